#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diophnet {

__extension__ typedef __int128 WideInt;

std::string to_string(WideInt v);

struct Term {
  std::int64_t coefficient = 0;
  std::vector<unsigned> exponents;  // one entry per variable

  bool operator==(const Term&) const = default;
};

/// Integer-coefficient multivariate polynomial P(x1, ..., xn).
///
/// Terms are kept in a canonical order with like terms merged and zero
/// coefficients dropped, so two equal polynomials compare equal.
///
/// Text form: `coef * x1^e1 * x2^e2 ...` terms joined by `+`/`-`, e.g.
/// `x1^2 + x2^2 - x3^2` or `3*x1 x2 - 5`.  The `*` between factors is
/// optional and whitespace is ignored.
class DiophantinePolynomial {
 public:
  DiophantinePolynomial() = default;
  DiophantinePolynomial(std::size_t n_vars, std::vector<Term> terms);

  // n_vars = 0 infers the arity from the highest variable index.
  static DiophantinePolynomial parse(std::string_view text, std::size_t n_vars = 0);

  std::size_t n_vars() const { return n_vars_; }
  const std::vector<Term>& terms() const { return terms_; }

  // Exact evaluation in 128-bit arithmetic; throws ArithmeticError on overflow.
  WideInt eval(std::span<const std::int64_t> x) const;

  // Smooth relaxation: the same polynomial over the reals.
  double eval_real(std::span<const double> x) const;
  std::vector<double> gradient_real(std::span<const double> x) const;

  std::string to_string() const;

  bool operator==(const DiophantinePolynomial&) const = default;

 private:
  std::size_t n_vars_ = 0;
  std::vector<Term> terms_;
};

inline WideInt poly_eval(const DiophantinePolynomial& p, std::span<const std::int64_t> x) {
  return p.eval(x);
}

}  // namespace diophnet
