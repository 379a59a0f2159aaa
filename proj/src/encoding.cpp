#include "diophnet/encoding.hpp"

#include <cmath>
#include <string>

#include "diophnet/error.hpp"

namespace diophnet {

double round_to_integer(double v, Rounding rule) {
  const double lo = std::floor(v);
  const double frac = v - lo;  // exact for finite doubles
  if (frac < 0.5) return lo;
  if (frac > 0.5) return lo + 1.0;
  if (rule == Rounding::half_up) return lo + 1.0;
  return v > 0.0 ? lo : lo + 1.0;
}

void EncodingMap::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("encoding scale must be > 0");
}

std::vector<std::int64_t> encode(std::span<const double> theta, const EncodingMap& map) {
  map.validate();
  require_finite(theta, "encode");
  std::vector<std::int64_t> out;
  out.reserve(theta.size());
  for (double v : theta) {
    const double r = round_to_integer(map.scale * v, map.rounding);
    if (!(std::abs(r) < 9.2e18)) throw ArithmeticError("encode: value out of 64-bit range");
    out.push_back(static_cast<std::int64_t>(r));
  }
  return out;
}

std::vector<double> decode(std::span<const std::int64_t> x, const EncodingMap& map) {
  map.validate();
  std::vector<double> out;
  out.reserve(x.size());
  for (auto v : x) out.push_back(static_cast<double>(v) / map.scale);
  return out;
}

std::vector<double> project_integers(std::span<const double> theta, Rounding rule) {
  require_finite(theta, "project_integers");
  std::vector<double> out;
  out.reserve(theta.size());
  for (double v : theta) out.push_back(round_to_integer(v, rule));
  return out;
}

Matrix project_integers(const Matrix& m, Rounding rule) {
  return Matrix(m.rows(), m.cols(), project_integers(m.data(), rule));
}

Network project_integers(const Network& net, Rounding rule) {
  return with_parameters(net, project_integers(flatten_parameters(net), rule));
}

bool all_integral(std::span<const double> theta) {
  for (double v : theta)
    if (std::floor(v) != v) return false;
  return true;
}

std::vector<double> Constraint::select(std::span<const double> theta) const {
  std::vector<double> out;
  if (parameters.empty()) {
    out.assign(theta.begin(), theta.end());
  } else {
    out.reserve(parameters.size());
    for (auto i : parameters) {
      if (i >= theta.size()) {
        throw ShapeError("constraint selects parameter " + std::to_string(i) + " of " +
                         std::to_string(theta.size()));
      }
      out.push_back(theta[i]);
    }
  }
  if (out.size() != polynomial.n_vars()) {
    throw ShapeError("constraint arity " + std::to_string(polynomial.n_vars()) + " != " +
                     std::to_string(out.size()) + " selected parameters");
  }
  return out;
}

double diophantine_loss(const DiophantinePolynomial& p, std::span<const double> theta,
                        const EncodingMap& map) {
  return diophantine_loss(Constraint{p, map, {}}, theta);
}

double diophantine_loss(const Constraint& c, std::span<const double> theta) {
  c.map.validate();
  std::vector<double> x = c.select(theta);
  for (double& v : x) v *= c.map.scale;
  const double r = c.polynomial.eval_real(x);
  return r * r;
}

std::vector<double> diophantine_loss_gradient(const Constraint& c, std::span<const double> theta) {
  c.map.validate();
  std::vector<double> x = c.select(theta);
  for (double& v : x) v *= c.map.scale;
  const double r = c.polynomial.eval_real(x);
  const std::vector<double> dp = c.polynomial.gradient_real(x);
  std::vector<double> g(theta.size(), 0.0);
  for (std::size_t j = 0; j < dp.size(); ++j) {
    const std::size_t idx = c.parameters.empty() ? j : c.parameters[j];
    g[idx] += 2.0 * r * c.map.scale * dp[j];
  }
  return g;
}

double constraint_residual(const Constraint& c, std::span<const double> theta) {
  const std::vector<double> x = c.select(theta);
  const WideInt r = c.polynomial.eval(encode(x, c.map));
  const double rd = static_cast<double>(r);
  return rd * rd;
}

namespace {

// floor(a / b) for b > 0.
WideInt floor_div(WideInt a, WideInt b) {
  WideInt q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

}  // namespace

std::vector<Rational> convergents(double theta, std::int64_t max_den) {
  if (!std::isfinite(theta)) throw DomainError("rational_approx: non-finite input");
  if (max_den < 1) throw DomainError("rational_approx: max_den must be >= 1");

  // theta = mant * 2^exp exactly.
  int e2 = 0;
  const double frac = std::frexp(theta, &e2);
  auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  int exp = e2 - 53;
  while (mant != 0 && mant % 2 == 0) {
    mant /= 2;
    ++exp;
  }

  WideInt num = mant;
  WideInt den = 1;
  if (mant == 0) {
    exp = 0;
  } else if (exp >= 0) {
    if (std::abs(theta) >= 9.2e18) throw ArithmeticError("rational_approx: |theta| exceeds 64-bit range");
    num = static_cast<WideInt>(mant) << exp;
  } else if (exp < -125) {
    // Every later partial quotient exceeds any 64-bit denominator.
    return {Rational{0, 1}};
  } else {
    den = static_cast<WideInt>(1) << (-exp);
  }

  std::vector<Rational> out;
  WideInt p_prev = 1, p_prev2 = 0;
  WideInt q_prev = 0, q_prev2 = 1;
  while (true) {
    const WideInt a = floor_div(num, den);
    // q = a * q_prev + q_prev2 would exceed max_den; checked before multiplying.
    if (q_prev != 0 && a > (max_den - q_prev2) / q_prev) break;
    const WideInt p = a * p_prev + p_prev2;
    const WideInt q = a * q_prev + q_prev2;
    if (p > INT64_MAX || p < INT64_MIN) throw ArithmeticError("rational_approx: numerator overflow");
    out.push_back(Rational{static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    const WideInt rem = num - a * den;
    if (rem == 0) break;
    num = den;
    den = rem;
  }
  return out;
}

Rational rational_approx(double theta, std::int64_t max_den) {
  auto cs = convergents(theta, max_den);
  return cs.back();
}

}  // namespace diophnet
