#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace slowent {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Square matrix over arbitrary-precision integers. Only what the action
/// validation and Bowen-window products need.
class BigIntMatrix {
public:
  BigIntMatrix() = default;
  explicit BigIntMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n * n)) {}
  explicit BigIntMatrix(const IntMatrix &m);

  static BigIntMatrix identity(int n);

  int size() const noexcept { return n_; }
  BigInt &operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const BigInt &operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }

  BigIntMatrix operator*(const BigIntMatrix &rhs) const;
  bool operator==(const BigIntMatrix &rhs) const = default;

  /// Fraction-free (Bareiss) elimination; exact.
  BigInt determinant() const;

  /// Inverse of a matrix with determinant +-1 (adjugate times determinant).
  BigIntMatrix unimodular_inverse() const;

  BigIntMatrix power(long long exponent) const;

  /// Largest absolute entry.
  BigInt max_abs() const;

  /// Largest absolute row sum (induced sup-norm).
  BigInt row_sum_norm() const;

  Eigen::MatrixXd to_double() const;

private:
  int n_ = 0;
  std::vector<BigInt> data_;
};

} // namespace slowent
