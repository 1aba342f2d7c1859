#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "slowent/action.hpp"

namespace fixtures {

using slowent::IntMatrix;

inline IntMatrix mat2(long a, long b, long c, long d) {
  IntMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline slowent::IntegerMatrixAction fibonacci() { return slowent::verify_action({mat2(2, 1, 1, 1)}); }

inline IntMatrix block_diag(const IntMatrix &a, const IntMatrix &b) {
  IntMatrix m = IntMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

inline slowent::IntegerMatrixAction t4_block() {
  const IntMatrix i2 = IntMatrix::Identity(2, 2);
  return slowent::verify_action(
      {block_diag(mat2(2, 1, 1, 1), i2), block_diag(i2, mat2(3, 1, 2, 1))});
}

/// log|lambda| of a 2x2 integer matrix from its characteristic polynomial.
inline std::pair<double, double> log_moduli_2x2(const IntMatrix &m) {
  const double tr = static_cast<double>(m(0, 0) + m(1, 1));
  const double det = static_cast<double>(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = tr * tr - 4 * det;
  if (disc < 0) return {0.5 * std::log(std::abs(det)), 0.5 * std::log(std::abs(det))};
  const double r = std::sqrt(disc);
  return {std::log(std::abs((tr + r) / 2)), std::log(std::abs((tr - r) / 2))};
}

inline const double kLogGolden2 = std::log((3 + std::sqrt(5.0)) / 2);  // 0.9624236501
inline const double kLog2Sqrt3 = std::log(2 + std::sqrt(3.0));        // 1.3169578969

/// Functional with multiplicity, as a plain record for oracle comparison.
struct Expected {
  Eigen::VectorXd coeffs;
  int multiplicity;
};

/// Merges equal functionals (sup distance below 1e-9).
inline std::vector<Expected> merge(const std::vector<Expected> &raw) {
  std::vector<Expected> out;
  for (const auto &e : raw) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Expected &o) {
      return (o.coeffs - e.coeffs).cwiseAbs().maxCoeff() < 1e-9;
    });
    if (it == out.end()) out.push_back(e);
    else it->multiplicity += e.multiplicity;
  }
  return out;
}

/// Sup distance between a spectrum and an expected multiset, or infinity
/// when the multiplicities cannot be matched.
inline double spectrum_distance(const slowent::LyapunovSpectrum &spec, std::vector<Expected> expected) {
  if (spec.size() != expected.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto &f : spec.functionals()) {
    auto best = expected.end();
    double bd = std::numeric_limits<double>::infinity();
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      if (it->multiplicity != f.multiplicity) continue;
      const double dist = (it->coeffs - f.coeffs).cwiseAbs().maxCoeff();
      if (dist < bd) {
        bd = dist;
        best = it;
      }
    }
    if (best == expected.end()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, bd);
    expected.erase(best);
  }
  return worst;
}

inline IntMatrix int_power(const IntMatrix &m, int e) {
  IntMatrix r = IntMatrix::Identity(m.rows(), m.cols());
  IntMatrix base = m;
  if (e < 0) {
    // 2x2 unimodular inverse
    const long det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    base = mat2(m(1, 1) * det, -m(0, 1) * det, -m(1, 0) * det, m(0, 0) * det);
    e = -e;
  }
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

/// Random unimodular matrix as a product of elementary operations.
inline IntMatrix random_unimodular(int d, std::mt19937_64 &rng, int steps = 4) {
  IntMatrix p = IntMatrix::Identity(d, d);
  std::uniform_int_distribution<int> idx(0, d - 1), coef(-1, 1);
  for (int s = 0; s < steps; ++s) {
    const int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const int c = coef(rng);
    IntMatrix e = IntMatrix::Identity(d, d);
    e(i, j) = c;
    p = p * e;
  }
  return p;
}

struct CorpusEntry {
  slowent::IntegerMatrixAction action;
  std::vector<Expected> expected;
};

/// Commuting unimodular actions built as block-diagonal products of powers
/// of hyperbolic 2x2 blocks, then conjugated by a random unimodular matrix.
inline std::vector<CorpusEntry> corpus(int count, std::uint64_t seed) {
  const std::vector<IntMatrix> blocks{mat2(2, 1, 1, 1), mat2(3, 1, 2, 1), mat2(5, 2, 2, 1),
                                      mat2(1, 1, 1, 0), mat2(4, 1, 3, 1), mat2(2, 3, 1, 2)};
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  while (static_cast<int>(out.size()) < count) {
    const int nb = std::uniform_int_distribution<int>(1, 3)(rng);
    const int k = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<int> which(static_cast<std::size_t>(nb));
    std::vector<std::vector<int>> exps(static_cast<std::size_t>(nb), std::vector<int>(static_cast<std::size_t>(k)));
    for (int b = 0; b < nb; ++b) {
      which[static_cast<std::size_t>(b)] = std::uniform_int_distribution<int>(0, static_cast<int>(blocks.size()) - 1)(rng);
      for (int j = 0; j < k; ++j) exps[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] = std::uniform_int_distribution<int>(-1, 2)(rng);
    }
    const int d = 2 * nb;
    std::vector<IntMatrix> gens;
    for (int j = 0; j < k; ++j) {
      IntMatrix g = IntMatrix::Zero(d, d);
      for (int b = 0; b < nb; ++b) {
        g.block(2 * b, 2 * b, 2, 2) = int_power(blocks[static_cast<std::size_t>(which[static_cast<std::size_t>(b)])], exps[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)]);
      }
      gens.push_back(g);
    }
    std::vector<Expected> raw;
    for (int b = 0; b < nb; ++b) {
      const IntMatrix &m = blocks[static_cast<std::size_t>(which[static_cast<std::size_t>(b)])];
      const auto [up, down] = log_moduli_2x2(m);
      Eigen::VectorXd cu(k), cd(k);
      for (int j = 0; j < k; ++j) {
        cu(j) = exps[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] * up;
        cd(j) = exps[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)] * down;
      }
      raw.push_back({cu, 1});
      raw.push_back({cd, 1});
    }
    auto expected = merge(raw);
    // skip near-coincident but distinct functionals (tolerance ambiguity by design)
    bool ambiguous = false;
    for (std::size_t i = 0; i < expected.size(); ++i)
      for (std::size_t j = i + 1; j < expected.size(); ++j)
        if ((expected[i].coeffs - expected[j].coeffs).cwiseAbs().maxCoeff() < 1e-6) ambiguous = true;
    if (ambiguous) continue;
    const IntMatrix p = random_unimodular(d, rng);
    auto base = slowent::verify_action(gens);
    out.push_back({base.conjugate(p), expected});
  }
  return out;
}

} // namespace fixtures
