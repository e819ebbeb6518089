#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hamforge/expr.hpp"

namespace Eigen {

template <>
struct NumTraits<hamforge::Expr> : GenericNumTraits<hamforge::Expr> {
  using Real = hamforge::Expr;
  using NonInteger = hamforge::Expr;
  using Nested = hamforge::Expr;
  using Literal = hamforge::Expr;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen

namespace hamforge {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ExprMatrix = Matrix<Expr>;
using ExprVector = Vector<Expr>;

/// Dense cube of side n with Rank indices, row-major.
template <class Scalar, int Rank>
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(int n) : n_(n), data_(count(n)) {}

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <class... I>
  Scalar& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const Scalar& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  Scalar* begin() { return data_.data(); }
  Scalar* end() { return data_.data() + data_.size(); }
  const Scalar* begin() const { return data_.data(); }
  const Scalar* end() const { return data_.data() + data_.size(); }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!(x == Scalar(0))) return false;
    return true;
  }

 private:
  static std::size_t count(int n) {
    std::size_t c = 1;
    for (int r = 0; r < Rank; ++r) c *= static_cast<std::size_t>(n);
    return c;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int r = 0; r < Rank; ++r) o = o * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[r]);
    return o;
  }

  int n_ = 0;
  std::vector<Scalar> data_;
};

using Tensor3 = DenseTensor<Expr, 3>;
using Tensor4 = DenseTensor<Expr, 4>;

/// Exact inverse by Gauss-Jordan elimination; throws MathError when singular.
template <class Scalar>
Matrix<Scalar> inverse(const Matrix<Scalar>& m) {
  const auto n = m.rows();
  if (m.cols() != n) throw InvalidInput("inverse: matrix not square");
  Matrix<Scalar> a = m, inv = Matrix<Scalar>::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a(p, c) == Scalar(0)) ++p;
    if (p == n) throw MathError("singular matrix");
    if (p != c) {
      a.row(p).swap(a.row(c));
      inv.row(p).swap(inv.row(c));
    }
    const Scalar piv = a(c, c);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(c, j) = a(c, j) / piv;
      inv(c, j) = inv(c, j) / piv;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || a(r, c) == Scalar(0)) continue;
      const Scalar f = a(r, c);
      for (Eigen::Index j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Exact determinant by elimination.
template <class Scalar>
Scalar determinant(const Matrix<Scalar>& m) {
  const auto n = m.rows();
  Matrix<Scalar> a = m;
  Scalar det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && a(p, c) == Scalar(0)) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      a.row(p).swap(a.row(c));
      det = -det;
    }
    det = det * a(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (a(r, c) == Scalar(0)) continue;
      const Scalar f = a(r, c) / a(c, c);
      for (Eigen::Index j = c; j < n; ++j) a(r, j) = a(r, j) - f * a(c, j);
    }
  }
  return det;
}

}  // namespace hamforge
