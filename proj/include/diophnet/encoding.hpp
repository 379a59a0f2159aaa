#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "diophnet/linalg.hpp"
#include "diophnet/network.hpp"
#include "diophnet/polynomial.hpp"

namespace diophnet {

enum class Rounding {
  // Nearest integer, exact halves go toward zero (3.5 -> 3, -1.5 -> -1).
  half_toward_zero,
  // Nearest integer, exact halves go up (3.5 -> 4).  Kept for comparison runs.
  half_up,
};

double round_to_integer(double v, Rounding rule = Rounding::half_toward_zero);

/// Fixed-point realization of the encoding map: phi(theta) = round(scale * theta).
struct EncodingMap {
  double scale = 1.0;
  Rounding rounding = Rounding::half_toward_zero;

  void validate() const;
  bool operator==(const EncodingMap&) const = default;
};

std::vector<std::int64_t> encode(std::span<const double> theta, const EncodingMap& map);
std::vector<double> decode(std::span<const std::int64_t> x, const EncodingMap& map);

// Integer projection, coordinatewise.  Idempotent.
std::vector<double> project_integers(std::span<const double> theta,
                                     Rounding rule = Rounding::half_toward_zero);
Matrix project_integers(const Matrix& m, Rounding rule = Rounding::half_toward_zero);
Network project_integers(const Network& net, Rounding rule = Rounding::half_toward_zero);

bool all_integral(std::span<const double> theta);

/// Constraint P(phi(theta_S)) = 0 on a subset S of the flattened parameters.
struct Constraint {
  DiophantinePolynomial polynomial;
  EncodingMap map;
  std::vector<std::size_t> parameters;  // indices into theta; empty selects all

  // The selected coordinates of theta, checked against the polynomial's arity.
  std::vector<double> select(std::span<const double> theta) const;
};

/// Smooth constraint penalty P(scale * theta)^2.  Equals the exact squared
/// residual of the encoded parameters whenever scale * theta is integral.
double diophantine_loss(const DiophantinePolynomial& p, std::span<const double> theta,
                        const EncodingMap& map);
double diophantine_loss(const Constraint& c, std::span<const double> theta);

// d/dtheta of diophantine_loss(c, theta), full length of theta.
std::vector<double> diophantine_loss_gradient(const Constraint& c, std::span<const double> theta);

// Exact squared residual of the rounded encoding, |P(phi(theta))|^2.
double constraint_residual(const Constraint& c, std::span<const double> theta);

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;
  bool operator==(const Rational&) const = default;
};

// Continued-fraction convergents of theta with denominator <= max_den,
// computed exactly from the binary value of theta.
std::vector<Rational> convergents(double theta, std::int64_t max_den);

// Last convergent with q <= max_den.
Rational rational_approx(double theta, std::int64_t max_den);

}  // namespace diophnet
