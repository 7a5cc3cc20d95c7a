#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opball/error.hpp"

namespace opball {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Every operator symbol in the library is carried by one.
class CMat {
 public:
  CMat() = default;

  CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  CMat(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorKind::ShapeMismatch, "entry count " + std::to_string(data_.size()) +
                                                " does not match " + shape_string());
    }
    for (const cplx& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::NonFinite, "matrix entry is not finite");
      }
    }
  }

  /// Row-wise literal, mainly for tests: CMat{{1, 2}, {3, 4}}.
  CMat(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static CMat zeros(std::size_t rows, std::size_t cols) { return CMat(rows, cols); }

  static CMat identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMat diag(std::span<const double> values) {
    CMat m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static CMat column(std::span<const cplx> values) {
    return CMat(values.size(), 1, std::vector<cplx>(values.begin(), values.end()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool same_shape(const CMat& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  std::string shape_string() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

  /// Conjugate transpose.
  CMat adjoint() const {
    CMat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  CMat transpose() const {
    CMat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  /// Entrywise complex conjugate.
  CMat conj() const {
    CMat r(*this);
    for (cplx& z : r.data_) z = std::conj(z);
    return r;
  }

  CMat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
      throw Error(ErrorKind::ShapeMismatch, "block out of range for " + shape_string());
    }
    CMat r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }

  void set_block(std::size_t r0, std::size_t c0, const CMat& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) {
      throw Error(ErrorKind::ShapeMismatch, "set_block out of range for " + shape_string());
    }
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  CMat& operator+=(const CMat& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  CMat& operator-=(const CMat& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  CMat& operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
  }

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator-(CMat a) { return a *= -1.0; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }
  friend CMat operator*(cplx s, CMat a) { return a *= s; }

  friend CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorKind::ShapeMismatch,
                  "cannot multiply " + a.shape_string() + " by " + b.shape_string());
    }
    CMat r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    }
    return r;
  }

  friend bool operator==(const CMat&, const CMat&) = default;

 private:
  void require_same_shape(const CMat& o, const char* op) const {
    if (!same_shape(o)) {
      throw Error(ErrorKind::ShapeMismatch,
                  std::string(op) + " on " + shape_string() + " and " + o.shape_string());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Block-diagonal matrix diag(a, b).
inline CMat block_diag(const CMat& a, const CMat& b) {
  CMat r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

/// Block anti-diagonal matrix [[0, a], [b, 0]].
inline CMat block_antidiag(const CMat& a, const CMat& b) {
  CMat r(a.rows() + b.rows(), b.cols() + a.cols());
  r.set_block(0, b.cols(), a);
  r.set_block(a.rows(), 0, b);
  return r;
}

}  // namespace opball
