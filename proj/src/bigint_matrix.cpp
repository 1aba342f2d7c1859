#include "slowent/bigint_matrix.hpp"

#include <utility>

#include "slowent/error.hpp"

namespace slowent {

BigIntMatrix::BigIntMatrix(const IntMatrix &m) : BigIntMatrix(static_cast<int>(m.rows())) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) (*this)(i, j) = BigInt(m(i, j));
}

BigIntMatrix BigIntMatrix::identity(int n) {
  BigIntMatrix out(n);
  for (int i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

BigIntMatrix BigIntMatrix::operator*(const BigIntMatrix &rhs) const {
  if (n_ != rhs.n_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  BigIntMatrix out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int l = 0; l < n_; ++l) {
      const BigInt &a = (*this)(i, l);
      if (a == 0) continue;
      for (int j = 0; j < n_; ++j) out(i, j) += a * rhs(l, j);
    }
  }
  return out;
}

BigInt BigIntMatrix::determinant() const {
  if (n_ == 0) return BigInt(1);
  BigIntMatrix a = *this;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n_ - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n_; ++i) {
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return BigInt(0);
      for (int j = 0; j < n_; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n_; ++i) {
      for (int j = k + 1; j < n_; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n_ - 1, n_ - 1);
}

BigIntMatrix BigIntMatrix::unimodular_inverse() const {
  const BigInt det = determinant();
  if (det != 1 && det != -1) {
    throw Error(ErrorCode::NonUnimodular, "determinant is not +-1");
  }
  if (n_ == 1) {
    BigIntMatrix out(1);
    out(0, 0) = det;
    return out;
  }
  BigIntMatrix out(n_);
  BigIntMatrix minor(n_ - 1);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      // cofactor C_ij lands at adj(j, i)
      for (int r = 0, mr = 0; r < n_; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < n_; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = (*this)(r, c);
        }
        ++mr;
      }
      BigInt cof = minor.determinant();
      if ((i + j) % 2 == 1) cof = -cof;
      out(j, i) = cof * det;
    }
  }
  return out;
}

BigIntMatrix BigIntMatrix::power(long long exponent) const {
  BigIntMatrix base = exponent < 0 ? unimodular_inverse() : *this;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-exponent)
                                      : static_cast<unsigned long long>(exponent);
  BigIntMatrix result = identity(n_);
  while (e > 0) {
    if (e & 1ULL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

BigInt BigIntMatrix::max_abs() const {
  BigInt best = 0;
  for (const auto &v : data_) {
    const BigInt a = abs(v);
    if (a > best) best = a;
  }
  return best;
}

BigInt BigIntMatrix::row_sum_norm() const {
  BigInt best = 0;
  for (int i = 0; i < n_; ++i) {
    BigInt row = 0;
    for (int j = 0; j < n_; ++j) row += abs((*this)(i, j));
    if (row > best) best = row;
  }
  return best;
}

Eigen::MatrixXd BigIntMatrix::to_double() const {
  Eigen::MatrixXd out(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out(i, j) = (*this)(i, j).convert_to<double>();
  return out;
}

} // namespace slowent
