#include "diophnet/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diophnet/error.hpp"

namespace diophnet {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Real b-th root of a non-negative value.
double root(double v, int b) {
  if (b == 1) return v;
  if (b == 2) return std::sqrt(v);
  if (b == 3) return std::cbrt(v);
  return std::pow(v, 1.0 / b);
}

// Smallest |x| with x^a >= k, i.e. k^(1/a).
double exponential_radius(const DioExponential& f) {
  return f.k <= 0.0 ? 0.0 : std::pow(f.k, 1.0 / f.a);
}

void require_nonnegative(double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("input bound M must be finite and >= 0");
}

double quadratic_value(const DioQuadratic& f, double x) {
  return (f.c - f.a * x * x + f.b * x - f.z) / f.d;
}

}  // namespace

void validate(const ActivationSpec& spec) {
  std::visit(overloaded{
                 [](const DioLinear& f) {
                   if (f.b == 0.0) throw DomainError("dio_linear requires b != 0");
                   if (!std::isfinite(f.a) || !std::isfinite(f.b) || !std::isfinite(f.c))
                     throw DomainError("dio_linear parameters must be finite");
                 },
                 [](const DioQuadratic& f) {
                   if (f.d == 0.0) throw DomainError("dio_quadratic requires d != 0");
                   for (double v : {f.a, f.b, f.c, f.z, f.d})
                     if (!std::isfinite(v)) throw DomainError("dio_quadratic parameters must be finite");
                 },
                 [](const DioExponential& f) {
                   if (f.a < 1 || f.b < 1)
                     throw DomainError("dio_exponential requires positive integer exponents");
                   if (!(f.k >= 0.0) || !std::isfinite(f.k))
                     throw DomainError("dio_exponential requires finite k >= 0");
                 },
                 [](const auto&) {},
             },
             spec);
}

bool is_diophantine(const ActivationSpec& spec) {
  return std::holds_alternative<DioLinear>(spec) || std::holds_alternative<DioQuadratic>(spec) ||
         std::holds_alternative<DioExponential>(spec);
}

std::string_view kind_name(const ActivationSpec& spec) {
  return std::visit(overloaded{
                        [](const Identity&) { return std::string_view("identity"); },
                        [](const Relu&) { return std::string_view("relu"); },
                        [](const Sigmoid&) { return std::string_view("sigmoid"); },
                        [](const DioLinear&) { return std::string_view("dio_linear"); },
                        [](const DioQuadratic&) { return std::string_view("dio_quadratic"); },
                        [](const DioExponential&) { return std::string_view("dio_exponential"); },
                    },
                    spec);
}

double activation_eval(const ActivationSpec& spec, double x) {
  return std::visit(
      overloaded{
          [x](const Identity&) { return x; },
          [x](const Relu&) { return x > 0.0 ? x : 0.0; },
          [x](const Sigmoid&) {
            if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
            const double e = std::exp(x);
            return e / (1.0 + e);
          },
          [x](const DioLinear& f) { return (f.c - f.a * x) / f.b; },
          [x](const DioQuadratic& f) { return quadratic_value(f, x); },
          [x](const DioExponential& f) {
            const double base = int_pow(x, f.a) - f.k;
            if (base < 0.0) {
              throw DomainError("dio_exponential: x^a < k at x = " + std::to_string(x));
            }
            return root(base, f.b);
          },
      },
      spec);
}

double activation_derivative(const ActivationSpec& spec, double x) {
  return std::visit(
      overloaded{
          [](const Identity&) { return 1.0; },
          [x](const Relu&) { return x > 0.0 ? 1.0 : 0.0; },
          [&spec, x](const Sigmoid&) {
            const double s = activation_eval(spec, x);
            return s * (1.0 - s);
          },
          [](const DioLinear& f) { return -f.a / f.b; },
          [x](const DioQuadratic& f) { return (-2.0 * f.a * x + f.b) / f.d; },
          [&spec, x](const DioExponential& f) {
            const double y = activation_eval(spec, x);
            const double num = f.a * int_pow(x, f.a - 1);
            if (f.b == 1) return num;
            const double den = f.b * int_pow(y, f.b - 1);
            if (den == 0.0) {
              throw NumericError("dio_exponential: unbounded derivative at x = " +
                                 std::to_string(x));
            }
            return num / den;
          },
      },
      spec);
}

double activation_bound(const ActivationSpec& spec, double m) {
  require_nonnegative(m);
  return std::visit(
      overloaded{
          [m](const DioLinear& f) { return (std::abs(f.c) + std::abs(f.a) * m) / std::abs(f.b); },
          [m](const DioQuadratic& f) {
            double best = std::max(std::abs(quadratic_value(f, -m)), std::abs(quadratic_value(f, m)));
            if (f.a != 0.0) {
              const double vertex = f.b / (2.0 * f.a);
              if (std::abs(vertex) <= m) best = std::max(best, std::abs(quadratic_value(f, vertex)));
            }
            return best;
          },
          [m](const DioExponential& f) {
            // |phi| grows with |x| on both branches of the domain.
            if (exponential_radius(f) > m) throw DomainError("dio_exponential: empty domain on [-M, M]");
            return root(std::max(int_pow(m, f.a) - f.k, 0.0), f.b);
          },
          [](const auto&) -> double {
            throw UnsupportedError("activation_bound: only defined for Diophantine activations");
          },
      },
      spec);
}

double lipschitz_constant(const ActivationSpec& spec, double m) {
  require_nonnegative(m);
  return std::visit(
      overloaded{
          [](const Identity&) { return 1.0; },
          [](const Relu&) { return 1.0; },
          [](const Sigmoid&) { return 0.25; },
          [](const DioLinear& f) { return std::abs(f.a) / std::abs(f.b); },
          [m](const DioQuadratic& f) {
            return (2.0 * std::abs(f.a) * m + std::abs(f.b)) / std::abs(f.d);
          },
          [m](const DioExponential& f) {
            if (exponential_radius(f) > m) throw DomainError("dio_exponential: empty domain on [-M, M]");
            // With t = |x|: |phi'| = (a/b) t^(a-1) (t^a - k)^(1/b - 1).
            if (f.b == 1) return f.a * int_pow(m, f.a - 1);
            constexpr double inf = std::numeric_limits<double>::infinity();
            // The (t^a - k)^(1/b - 1) factor diverges at the boundary t^a = k.
            if (f.k > 0.0) return inf;
            const double expo = static_cast<double>(f.a) / f.b - 1.0;
            if (expo < 0.0) return inf;
            if (expo == 0.0) return 1.0;
            return static_cast<double>(f.a) / f.b * std::pow(m, expo);
          },
      },
      spec);
}

}  // namespace diophnet
