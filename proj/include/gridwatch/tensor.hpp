#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <string>
#include <vector>

#include "gridwatch/errors.hpp"
#include "gridwatch/rng.hpp"

namespace gridwatch {

// Dense 2-d matrix of 64-bit reals, row-major. Scalars are 1x1, vectors are
// 1xN rows. All model state and intermediates live in this type.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::int64_t rows, std::int64_t cols)
      : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows * cols), 0.0) {
    if (rows < 0 || cols < 0) throw ShapeError("negative tensor extent");
  }

  static Tensor scalar(double x) {
    Tensor t(1, 1);
    t.v_[0] = x;
    return t;
  }

  static Tensor row(std::initializer_list<double> xs) {
    Tensor t(1, static_cast<std::int64_t>(xs.size()));
    std::size_t i = 0;
    for (double x : xs) t.v_[i++] = x;
    return t;
  }

  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    auto r = static_cast<std::int64_t>(rows.size());
    auto c = static_cast<std::int64_t>(rows.begin()->size());
    Tensor t(r, c);
    std::int64_t i = 0;
    for (const auto& row : rows) {
      if (static_cast<std::int64_t>(row.size()) != c)
        throw ShapeError("ragged initializer");
      std::int64_t j = 0;
      for (double x : row) t(i, j++) = x;
      ++i;
    }
    return t;
  }

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t size() const { return rows_ * cols_; }
  bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  double& operator()(std::int64_t r, std::int64_t c) { return v_[static_cast<std::size_t>(r * cols_ + c)]; }
  const double& operator()(std::int64_t r, std::int64_t c) const { return v_[static_cast<std::size_t>(r * cols_ + c)]; }
  double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }

  void fill(double x) { std::fill(v_.begin(), v_.end(), x); }
  void zero() { fill(0.0); }

  Tensor reshaped(std::int64_t r, std::int64_t c) const {
    if (r * c != size()) throw ShapeError("reshape changes element count");
    Tensor t = *this;
    t.rows_ = r;
    t.cols_ = c;
    return t;
  }

  bool all_finite() const {
    return Eigen::Map<const Eigen::ArrayXd>(v_.data(), static_cast<Eigen::Index>(v_.size()))
        .allFinite();
  }

  std::string shape_str() const {
    return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
  }

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<double> v_;
};

namespace detail {
using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using CEMap = Eigen::Map<const EMat>;

inline CEMap emap(const Tensor& t) { return CEMap(t.data(), t.rows(), t.cols()); }
inline EMap emap(Tensor& t) { return EMap(t.data(), t.rows(), t.cols()); }
}  // namespace detail

// out = a * b. Eigen supplies the GEMM kernel; shape checking, layout and
// every gradient rule stay in this codebase.
inline void matmul_into(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: inner dimensions disagree " + a.shape_str() + " x " + b.shape_str());
  if (out.rows() != a.rows() || out.cols() != b.cols()) out = Tensor(a.rows(), b.cols());
  detail::emap(out).noalias() = detail::emap(a) * detail::emap(b);
}

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  Tensor out;
  matmul_into(a, b, out);
  return out;
}

// out += a * b^T (gradient rule dA += dC * B^T).
inline void matmul_acc_nt(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.cols() != b.cols() || out.rows() != a.rows() || out.cols() != b.rows())
    throw ShapeError("matmul_acc_nt: shape mismatch");
  detail::emap(out).noalias() += detail::emap(a) * detail::emap(b).transpose();
}

// out += a^T * b (gradient rule dB += A^T * dC).
inline void matmul_acc_tn(const Tensor& a, const Tensor& b, Tensor& out) {
  if (a.rows() != b.rows() || out.rows() != a.cols() || out.cols() != b.cols())
    throw ShapeError("matmul_acc_tn: shape mismatch");
  detail::emap(out).noalias() += detail::emap(a).transpose() * detail::emap(b);
}

inline void fill_uniform(Tensor& t, Rng& rng, double lo, double hi) {
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
}

inline double dot_flat(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace gridwatch
