#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "twopoint/rat.hpp"

namespace twopoint {

/// Dense square matrix of ring elements, row-major.
template <class V>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n) {}
  Matrix(std::size_t n, const V& fill) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  V& operator()(std::size_t i, std::size_t j) { return data_.at(i * n_ + j); }
  const V& operator()(std::size_t i, std::size_t j) const { return data_.at(i * n_ + j); }

  Matrix& operator+=(const Matrix& o) {
    if (o.n_ != n_) throw ValidationError("matrix size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

 private:
  std::size_t n_ = 0;
  std::vector<V> data_;
};

/// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
inline std::optional<Matrix<Rat>> inverse(const Matrix<Rat>& m) {
  const std::size_t n = m.size();
  Matrix<Rat> a = m;
  Matrix<Rat> inv(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = Rat(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    Rat p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      Rat f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Solves A x = b for square A; nullopt when singular.
inline std::optional<std::vector<Rat>> solve(const Matrix<Rat>& a, const std::vector<Rat>& b) {
  auto inv = inverse(a);
  if (!inv) return std::nullopt;
  std::vector<Rat> x(a.size(), Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) x[i] += (*inv)(i, j) * b[j];
  return x;
}

}  // namespace twopoint
