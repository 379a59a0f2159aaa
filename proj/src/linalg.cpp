#include "diophnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diophnet/error.hpp"

namespace diophnet {

namespace {

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_same_shape(const Matrix& x, const Matrix& y, const char* op) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(x.rows(), x.cols()) +
                     " vs " + shape_str(y.rows(), y.cols()));
  }
}

}  // namespace

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite value");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("Matrix: " + std::to_string(data_.size()) + " values for shape " +
                     shape_str(rows_, cols_));
  }
  require_finite(data_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::span<const double> Matrix::row(std::size_t r) const {
  return std::span<const double>(data_).subspan(r * cols_, cols_);
}

Vector Matrix::row_vector(std::size_t r) const {
  auto s = row(r);
  return Vector(std::vector<double>(s.begin(), s.end()));
}

Vector::Vector(std::size_t n) : data_(n, 0.0) {}

Vector::Vector(std::vector<double> data) : data_(std::move(data)) {
  require_finite(data_, "Vector");
}

Vector::Vector(std::initializer_list<double> values) : data_(values) {
  require_finite(data_, "Vector");
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + shape_str(a.rows(), a.cols()) + " x " +
                     shape_str(b.rows(), b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  require_finite(out.data(), "matmul");
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw ShapeError("matvec: " + shape_str(a.rows(), a.cols()) + " x " +
                     std::to_string(x.size()));
  }
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
  require_finite(out.data(), "matvec");
  return out;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) {
    throw ShapeError("matvec_transposed: " + shape_str(a.rows(), a.cols()) + "^T x " +
                     std::to_string(x.size()));
  }
  Vector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * x[i];
  require_finite(out.data(), "matvec_transposed");
  return out;
}

Matrix outer(const Vector& u, const Vector& v) {
  Matrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
  require_finite(out.data(), "outer");
  return out;
}

Matrix axpy(double alpha, const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "axpy");
  Matrix out = y;
  auto xs = x.data();
  auto os = out.data();
  for (std::size_t i = 0; i < os.size(); ++i) os[i] += alpha * xs[i];
  require_finite(out.data(), "axpy");
  return out;
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw ShapeError("axpy: vector length mismatch");
  Vector out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * x[i];
  require_finite(out.data(), "axpy");
  return out;
}

double frobenius_sq(const Matrix& x) {
  double acc = 0.0;
  for (double v : x.data()) acc += v * v;
  return acc;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(const Vector& x) { return dot(x, x); }

double norm(const Vector& x) { return std::sqrt(norm_sq(x)); }

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  // Gram matrix on the smaller side.
  const Matrix g = a.rows() < a.cols() ? matmul(a, transpose(a)) : matmul(transpose(a), a);
  const std::size_t n = g.rows();
  Matrix s = g;
  const double scale = std::max(frobenius_sq(g), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
    if (off <= 1e-30 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) largest = std::max(largest, s(i, i));
  return std::sqrt(largest);
}

}  // namespace diophnet
