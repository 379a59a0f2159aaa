#include "diophnet/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "diophnet/error.hpp"

namespace diophnet {

namespace {

WideInt checked_mul(WideInt a, WideInt b) {
  WideInt r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("polynomial evaluation overflow");
  return r;
}

WideInt checked_add(WideInt a, WideInt b) {
  WideInt r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError("polynomial evaluation overflow");
  return r;
}

unsigned total_degree(const std::vector<unsigned>& e) {
  unsigned d = 0;
  for (unsigned v : e) d += v;
  return d;
}

// Higher total degree first, then lexicographically larger exponent vectors.
bool canonical_less(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  struct RawTerm {
    std::int64_t coefficient;
    std::map<std::size_t, unsigned> powers;  // 1-based variable index
  };

  std::vector<RawTerm> parse() {
    std::vector<RawTerm> out;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = take() == '-' ? -1 : 1;
    }
    out.push_back(term(sign));
    while (true) {
      skip_ws();
      if (at_end()) break;
      const char c = take();
      if (c != '+' && c != '-') fail(std::string("expected '+' or '-', found '") + c + "'");
      out.push_back(term(c == '-' ? -1 : 1));
    }
    return out;
  }

 private:
  RawTerm term(int sign) {
    RawTerm t{sign, {}};
    bool have_factor = false;
    while (true) {
      skip_ws();
      if (at_end()) break;
      const char c = peek();
      if (c == '*') {
        if (!have_factor) fail("'*' before any factor");
        take();
        skip_ws();
        if (at_end() || !(std::isdigit(static_cast<unsigned char>(peek())) || peek() == 'x'))
          fail("expected factor after '*'");
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        const std::int64_t v = number();
        if (__builtin_mul_overflow(t.coefficient, v, &t.coefficient))
          fail("coefficient overflow");
        have_factor = true;
      } else if (c == 'x') {
        take();
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
          fail("variable must be written x<index>");
        const std::int64_t idx = number();
        if (idx < 1) fail("variable indices start at 1");
        unsigned e = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          take();
          skip_ws();
          if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected exponent after '^'");
          const std::int64_t ev = number();
          if (ev > 64) fail("exponent too large");
          e = static_cast<unsigned>(ev);
        }
        t.powers[static_cast<std::size_t>(idx)] += e;
        have_factor = true;
      } else {
        break;
      }
    }
    if (!have_factor) fail("expected a term");
    return t;
  }

  std::int64_t number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) fail("invalid integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial: " + msg + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(WideInt v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // Work with the negative value so INT128_MIN is representable.
  WideInt n = neg ? v : -v;
  std::string digits;
  while (n != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(n % 10)));
    n /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

DiophantinePolynomial::DiophantinePolynomial(std::size_t n_vars, std::vector<Term> terms)
    : n_vars_(n_vars) {
  std::map<std::vector<unsigned>, WideInt, decltype(&canonical_less)> merged(&canonical_less);
  for (auto& t : terms) {
    if (t.exponents.size() != n_vars) {
      throw ShapeError("polynomial term has " + std::to_string(t.exponents.size()) +
                       " exponents, expected " + std::to_string(n_vars));
    }
    merged[t.exponents] += t.coefficient;
  }
  for (auto& [exps, coef] : merged) {
    if (coef == 0) continue;
    if (coef > INT64_MAX || coef < INT64_MIN) throw ArithmeticError("merged coefficient overflow");
    terms_.push_back(Term{static_cast<std::int64_t>(coef), exps});
  }
}

DiophantinePolynomial DiophantinePolynomial::parse(std::string_view text, std::size_t n_vars) {
  auto raw = Parser(text).parse();
  std::size_t max_idx = 0;
  for (const auto& t : raw)
    for (const auto& [idx, e] : t.powers) max_idx = std::max(max_idx, idx);
  if (n_vars == 0) {
    n_vars = max_idx;
  } else if (max_idx > n_vars) {
    throw ParseError("polynomial: variable x" + std::to_string(max_idx) + " exceeds arity " +
                     std::to_string(n_vars));
  }
  std::vector<Term> terms;
  terms.reserve(raw.size());
  for (const auto& t : raw) {
    Term term{t.coefficient, std::vector<unsigned>(n_vars, 0)};
    for (const auto& [idx, e] : t.powers) term.exponents[idx - 1] += e;
    terms.push_back(std::move(term));
  }
  return DiophantinePolynomial(n_vars, std::move(terms));
}

WideInt DiophantinePolynomial::eval(std::span<const std::int64_t> x) const {
  if (x.size() != n_vars_) {
    throw ShapeError("poly_eval: got " + std::to_string(x.size()) + " values for " +
                     std::to_string(n_vars_) + " variables");
  }
  WideInt total = 0;
  for (const Term& t : terms_) {
    WideInt v = t.coefficient;
    for (std::size_t i = 0; i < n_vars_; ++i)
      for (unsigned e = 0; e < t.exponents[i]; ++e) v = checked_mul(v, x[i]);
    total = checked_add(total, v);
  }
  return total;
}

double DiophantinePolynomial::eval_real(std::span<const double> x) const {
  if (x.size() != n_vars_) throw ShapeError("poly_eval_real: arity mismatch");
  double total = 0.0;
  for (const Term& t : terms_) {
    double v = static_cast<double>(t.coefficient);
    for (std::size_t i = 0; i < n_vars_; ++i)
      for (unsigned e = 0; e < t.exponents[i]; ++e) v *= x[i];
    total += v;
  }
  return total;
}

std::vector<double> DiophantinePolynomial::gradient_real(std::span<const double> x) const {
  if (x.size() != n_vars_) throw ShapeError("poly_gradient: arity mismatch");
  std::vector<double> g(n_vars_, 0.0);
  for (const Term& t : terms_) {
    for (std::size_t j = 0; j < n_vars_; ++j) {
      if (t.exponents[j] == 0) continue;
      double v = static_cast<double>(t.coefficient) * t.exponents[j];
      for (std::size_t i = 0; i < n_vars_; ++i) {
        const unsigned e = i == j ? t.exponents[i] - 1 : t.exponents[i];
        for (unsigned k = 0; k < e; ++k) v *= x[i];
      }
      g[j] += v;
    }
  }
  return g;
}

std::string DiophantinePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term& t = terms_[k];
    const bool neg = t.coefficient < 0;
    const std::uint64_t mag = neg ? 0ULL - static_cast<std::uint64_t>(t.coefficient)
                                  : static_cast<std::uint64_t>(t.coefficient);
    if (k == 0) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    std::string factors;
    for (std::size_t i = 0; i < n_vars_; ++i) {
      if (t.exponents[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(i + 1);
      if (t.exponents[i] > 1) factors += "^" + std::to_string(t.exponents[i]);
    }
    if (factors.empty()) {
      out += std::to_string(mag);
    } else if (mag == 1) {
      out += factors;
    } else {
      out += std::to_string(mag) + "*" + factors;
    }
  }
  return out;
}

}  // namespace diophnet
