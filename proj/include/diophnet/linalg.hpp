#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace diophnet {

class Vector;

/// Dense row-major matrix of finite doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> row(std::size_t r) const;
  Vector row_vector(std::size_t r) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense vector of finite doubles.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n);
  explicit Vector(std::vector<double> data);
  Vector(std::initializer_list<double> values);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  const std::vector<double>& values() const& { return data_; }
  std::vector<double> values() && { return std::move(data_); }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> data_;
};

// Throws NumericError naming `what` if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// a * x
Vector matvec(const Matrix& a, const Vector& x);
// a^T * x
Vector matvec_transposed(const Matrix& a, const Vector& x);
// u v^T
Matrix outer(const Vector& u, const Vector& v);

// alpha * x + y, elementwise.
Matrix axpy(double alpha, const Matrix& x, const Matrix& y);
Vector axpy(double alpha, const Vector& x, const Vector& y);

double frobenius_sq(const Matrix& x);
double dot(const Vector& a, const Vector& b);
double norm_sq(const Vector& x);
double norm(const Vector& x);

// Largest singular value, from a Jacobi eigendecomposition of a^T a.
double spectral_norm(const Matrix& a);

}  // namespace diophnet
