#pragma once

#include <string_view>
#include <variant>

namespace diophnet {

struct Identity {
  bool operator==(const Identity&) const = default;
};
struct Relu {
  bool operator==(const Relu&) const = default;
};
struct Sigmoid {
  bool operator==(const Sigmoid&) const = default;
};

/// Activation solving the linear Diophantine relation a*x + b*y = c for y:
/// phi(x) = (c - a*x) / b.  Requires b != 0.
struct DioLinear {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;
  bool operator==(const DioLinear&) const = default;
};

/// phi(x) = (c - a*x^2 + b*x - z) / d.  Requires d != 0; z is a constant offset.
struct DioQuadratic {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double z = 0.0;
  double d = 1.0;
  bool operator==(const DioQuadratic&) const = default;
};

/// Principal real branch of x^a - y^b = k, i.e. phi(x) = (x^a - k)^(1/b),
/// defined where x^a >= k.
struct DioExponential {
  int a = 1;
  int b = 1;
  double k = 0.0;
  bool operator==(const DioExponential&) const = default;
};

using ActivationSpec =
    std::variant<Identity, Relu, Sigmoid, DioLinear, DioQuadratic, DioExponential>;

// Throws DomainError when the parameters are outside the activation's domain rules.
void validate(const ActivationSpec& spec);

bool is_diophantine(const ActivationSpec& spec);

// identity | relu | sigmoid | dio_linear | dio_quadratic | dio_exponential
std::string_view kind_name(const ActivationSpec& spec);

double activation_eval(const ActivationSpec& spec, double x);

// phi'(x).  The relu subgradient at 0 is 0.  dio_exponential throws
// NumericError where the derivative is unbounded (y = 0 with b > 1).
double activation_derivative(const ActivationSpec& spec, double x);

/// Bound B with |phi(x)| <= B for every |x| <= m inside the activation's domain.
///
/// dio_linear returns (|c| + |a| m) / |b|.  dio_quadratic and dio_exponential
/// return the supremum of the closed form over [-m, m].  Throws
/// UnsupportedError for the standard activations.
double activation_bound(const ActivationSpec& spec, double m);

/// Supremum of |phi'(x)| over |x| <= m (intersected with the valid domain).
///
/// dio_linear: |a|/|b|.  dio_quadratic: (2|a|m + |b|)/|d|, which reduces to
/// (|a| + |b|)/|d| at m = 1/2.  dio_exponential: closed form of
/// sup |a x^(a-1) / (b y^(b-1))|, possibly +infinity when the derivative
/// blows up at the domain boundary.  Throws DomainError if the domain is empty.
double lipschitz_constant(const ActivationSpec& spec, double m);

}  // namespace diophnet
