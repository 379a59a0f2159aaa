#include "diophnet/lattice.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "diophnet/error.hpp"

namespace diophnet {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

using BigVector = std::vector<cpp_int>;

cpp_rational exact_rational(double v) {
  int e = 0;
  const double frac = std::frexp(v, &e);
  cpp_int mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  e -= 53;
  if (e >= 0) return cpp_rational(mant << e);
  return cpp_rational(mant, cpp_int(1) << (-e));
}

// floor(r + 1/2)
cpp_int round_nearest(const cpp_rational& r) {
  const cpp_rational shifted = r + cpp_rational(1, 2);
  cpp_int n = numerator(shifted);
  const cpp_int& d = denominator(shifted);
  cpp_int q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

class GramSchmidt {
 public:
  explicit GramSchmidt(const std::vector<BigVector>& b) { recompute(b); }

  void recompute(const std::vector<BigVector>& b) {
    const std::size_t n = b.size();
    const std::size_t dim = b.front().size();
    star_.assign(n, std::vector<cpp_rational>(dim));
    mu_.assign(n, std::vector<cpp_rational>(n));
    norm_sq_.assign(n, cpp_rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < dim; ++k) star_[i][k] = cpp_rational(b[i][k]);
      for (std::size_t j = 0; j < i; ++j) {
        cpp_rational proj = 0;
        for (std::size_t k = 0; k < dim; ++k) proj += cpp_rational(b[i][k]) * star_[j][k];
        mu_[i][j] = proj / norm_sq_[j];
        for (std::size_t k = 0; k < dim; ++k) star_[i][k] -= mu_[i][j] * star_[j][k];
      }
      for (std::size_t k = 0; k < dim; ++k) norm_sq_[i] += star_[i][k] * star_[i][k];
      if (norm_sq_[i] == 0) throw RankError("lll_reduce: basis vectors are linearly dependent");
    }
  }

  cpp_rational& mu(std::size_t i, std::size_t j) { return mu_[i][j]; }
  const cpp_rational& norm_sq(std::size_t i) const { return norm_sq_[i]; }

 private:
  std::vector<std::vector<cpp_rational>> star_;
  std::vector<std::vector<cpp_rational>> mu_;
  std::vector<cpp_rational> norm_sq_;
};

void size_reduce(std::vector<BigVector>& b, GramSchmidt& gs, std::size_t k, std::size_t j) {
  const cpp_int r = round_nearest(gs.mu(k, j));
  if (r == 0) return;
  for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= r * b[j][c];
  for (std::size_t i = 0; i < j; ++i) gs.mu(k, i) -= cpp_rational(r) * gs.mu(j, i);
  gs.mu(k, j) -= cpp_rational(r);
}

}  // namespace

LatticeBasis lll_reduce(const LatticeBasis& basis, double delta) {
  if (!(delta > 0.25 && delta < 1.0)) throw DomainError("lll_reduce: delta must lie in (1/4, 1)");
  const std::size_t n = basis.rank();
  if (n == 0) return basis;
  const std::size_t dim = basis.dimension();
  for (const auto& v : basis.vectors)
    if (v.size() != dim) throw ShapeError("lll_reduce: vectors of unequal dimension");
  if (n > dim) throw RankError("lll_reduce: more vectors than the ambient dimension");

  std::vector<BigVector> b(n, BigVector(dim));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) b[i][k] = basis.vectors[i][k];

  const cpp_rational lovasz = exact_rational(delta);
  GramSchmidt gs(b);
  std::size_t k = 1;
  while (k < n) {
    size_reduce(b, gs, k, k - 1);
    const cpp_rational m = gs.mu(k, k - 1);
    if (gs.norm_sq(k) < (lovasz - m * m) * gs.norm_sq(k - 1)) {
      std::swap(b[k], b[k - 1]);
      gs.recompute(b);
      k = std::max<std::size_t>(k - 1, 1);
    } else {
      for (std::size_t j = k - 1; j-- > 0;) size_reduce(b, gs, k, j);
      ++k;
    }
  }

  LatticeBasis out;
  out.vectors.assign(n, IntVector(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (b[i][c] > INT64_MAX || b[i][c] < INT64_MIN)
        throw ArithmeticError("lll_reduce: reduced entry exceeds 64-bit range");
      out.vectors[i][c] = static_cast<std::int64_t>(b[i][c]);
    }
  }
  return out;
}

LllInitResult lll_init(const Network& net, const EncodingMap& map, double delta) {
  const std::vector<double> theta = flatten_parameters(net);
  const std::vector<double> quantized = decode(encode(theta, map), map);

  auto fallback = [&](std::string why) {
    return LllInitResult{with_parameters(net, quantized), true, std::move(why)};
  };

  std::size_t width = 0;
  for (const Layer& l : net.layers()) width = std::max(width, l.parameter_count());

  LatticeBasis basis;
  std::size_t offset = 0;
  for (const Layer& l : net.layers()) {
    const auto block = std::span<const double>(theta).subspan(offset, l.parameter_count());
    offset += block.size();
    IntVector v = encode(block, map);
    v.resize(width, 0);
    basis.vectors.push_back(std::move(v));
  }

  LatticeBasis reduced;
  try {
    reduced = lll_reduce(basis, delta);
  } catch (const RankError& e) {
    return fallback(std::string("rank-deficient parameter blocks: ") + e.what());
  }

  std::vector<double> out;
  out.reserve(theta.size());
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const std::size_t len = net.layer(i).parameter_count();
    const IntVector& v = reduced.vectors[i];
    if (std::any_of(v.begin() + static_cast<std::ptrdiff_t>(len), v.end(),
                    [](std::int64_t x) { return x != 0; })) {
      return fallback("reduced vector " + std::to_string(i) + " does not fit layer " +
                      std::to_string(i));
    }
    const auto decoded = decode(std::span<const std::int64_t>(v).first(len), map);
    out.insert(out.end(), decoded.begin(), decoded.end());
  }

  auto max_abs = [](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
  };
  if (max_abs(out) > max_abs(quantized)) {
    return fallback("reduced basis has larger max-magnitude than the quantized parameters");
  }
  return LllInitResult{with_parameters(net, out), false, "reduced"};
}

}  // namespace diophnet
