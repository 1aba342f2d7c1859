#include "slowent/action.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "slowent/error.hpp"

namespace slowent {

namespace {

constexpr int kMaxAttempts = 8;
constexpr double kResidualTol = 1e-10;
constexpr std::uint64_t kCombinationSeed = 0x51077e47f00dULL;

IntMatrix to_int(const BigIntMatrix &m) {
  IntMatrix out(m.size(), m.size());
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      if (abs(m(i, j)) > BigInt(std::numeric_limits<std::int64_t>::max())) {
        throw Error(ErrorCode::InvalidArgument, "matrix entry exceeds 64-bit range");
      }
      out(i, j) = m(i, j).convert_to<std::int64_t>();
    }
  }
  return out;
}

int leading_index(const Eigen::VectorXd &c) {
  for (int j = 0; j < c.size(); ++j)
    if (std::abs(c(j)) > 1e-12) return j;
  return static_cast<int>(c.size());
}

// Deterministic spectrum order: by leading nonzero coordinate, then that
// coordinate descending, zero functionals last.
bool functional_before(const LyapunovFunctional &a, const LyapunovFunctional &b) {
  if (a.orbit_direction != b.orbit_direction) return !a.orbit_direction;
  const int la = leading_index(a.coeffs);
  const int lb = leading_index(b.coeffs);
  if (la != lb) return la < lb;
  for (int j = la; j < a.coeffs.size(); ++j) {
    if (a.coeffs(j) != b.coeffs(j)) return a.coeffs(j) > b.coeffs(j);
  }
  return false;
}

struct Cluster {
  std::complex<double> center;
  int count = 0; // eigenvalues in the upper half-plane representative
  bool complex_pair = false;
};

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd &ev, double tol) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) <= tol) parent[find(i)] = find(j);

  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }

  std::vector<Cluster> out;
  for (const auto &g : groups) {
    std::complex<double> mean = 0.0;
    for (int i : g) mean += ev(i);
    mean /= static_cast<double>(g.size());
    if (std::abs(mean.imag()) <= tol) {
      out.push_back({{mean.real(), 0.0}, static_cast<int>(g.size()), false});
    } else if (mean.imag() > 0) {
      out.push_back({mean, static_cast<int>(g.size()), true});
    }
    // lower half-plane clusters are represented by their conjugates
  }
  return out;
}

struct JointBlock {
  Eigen::VectorXd coeffs;
  Eigen::MatrixXd basis;
};

// One attempt at the joint decomposition using a given combination. Returns
// false when the combination failed to separate the family.
bool try_decompose(const std::vector<Eigen::MatrixXd> &gens, const Eigen::VectorXd &weights,
                   std::vector<JointBlock> &blocks, double &worst_residual) {
  const int d = static_cast<int>(gens.front().rows());
  const int k = static_cast<int>(gens.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < k; ++j) C += weights(j) * gens[j];
  const double scale = std::max(1.0, C.norm());

  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) return false;
  const auto clusters = cluster_eigenvalues(es.eigenvalues(), 1e-5 * scale);

  blocks.clear();
  worst_residual = 0.0;
  int covered = 0;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  for (const auto &cl : clusters) {
    const int m = cl.complex_pair ? 2 * cl.count : cl.count;
    Eigen::MatrixXd factor;
    if (cl.complex_pair) {
      factor = C * C - 2.0 * cl.center.real() * C + std::norm(cl.center) * I;
    } else {
      factor = C - cl.center.real() * I;
    }
    Eigen::MatrixXd power = I;
    for (int p = 0; p < cl.count; ++p) power = power * factor;

    Eigen::MatrixXd W;
    if (m == d) {
      W = I;
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(power, Eigen::ComputeFullV);
      W = svd.matrixV().rightCols(m);
    }

    JointBlock block{Eigen::VectorXd::Zero(k), W};
    for (int j = 0; j < k; ++j) {
      const Eigen::MatrixXd B = W.transpose() * gens[j] * W;
      const double res =
          (gens[j] * W - W * B).cwiseAbs().maxCoeff() / std::max(1.0, gens[j].norm());
      worst_residual = std::max(worst_residual, res);
      if (res > kResidualTol) return false;

      // every eigenvalue of the restriction must share one modulus
      const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(B, false).eigenvalues();
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int i = 0; i < ev.size(); ++i) {
        const double lm = std::log(std::abs(ev(i)));
        lo = std::min(lo, lm);
        hi = std::max(hi, lm);
      }
      if (!(hi - lo <= 1e-6)) return false;
      const double c = std::log(std::abs(B.determinant())) / m;
      block.coeffs(j) = std::abs(c) < 1e-12 ? 0.0 : c; // round-off from |det| = 1
    }
    covered += m;
    blocks.push_back(std::move(block));
  }
  return covered == d;
}

} // namespace

// ---------------------------------------------------------------------------

IntegerMatrixAction verify_action(std::vector<IntMatrix> matrices) {
  if (matrices.empty()) throw Error(ErrorCode::InvalidArgument, "no generators given");
  const auto d = matrices.front().rows();
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    if (matrices[i].rows() != matrices[i].cols() || matrices[i].rows() != d) {
      std::ostringstream os;
      os << "generator " << i << " is " << matrices[i].rows() << "x" << matrices[i].cols()
         << ", expected " << d << "x" << d;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
  }
  if (d < 2) throw Error(ErrorCode::DimensionMismatch, "torus dimension must be at least 2");

  std::vector<BigIntMatrix> exact;
  exact.reserve(matrices.size());
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    exact.emplace_back(matrices[i]);
    const BigInt det = exact.back().determinant();
    if (det != 1 && det != -1) {
      std::ostringstream os;
      os << "(" << i << ") det=" << det;
      throw Error(ErrorCode::NonUnimodular, os.str());
    }
  }
  for (std::size_t i = 0; i < exact.size(); ++i) {
    for (std::size_t j = i + 1; j < exact.size(); ++j) {
      if (!(exact[i] * exact[j] == exact[j] * exact[i])) {
        std::ostringstream os;
        os << "(" << i << "," << j << ")";
        throw Error(ErrorCode::NonCommuting, os.str());
      }
    }
  }
  return IntegerMatrixAction(static_cast<int>(d), std::move(matrices));
}

IntegerMatrixAction IntegerMatrixAction::inverse() const {
  std::vector<IntMatrix> inv;
  for (const auto &g : generators_) inv.push_back(to_int(BigIntMatrix(g).unimodular_inverse()));
  return IntegerMatrixAction(dim_, std::move(inv));
}

IntegerMatrixAction IntegerMatrixAction::conjugate(const IntMatrix &p) const {
  const BigIntMatrix P(p);
  const BigIntMatrix Pinv = P.unimodular_inverse();
  std::vector<IntMatrix> out;
  for (const auto &g : generators_) out.push_back(to_int(P * BigIntMatrix(g) * Pinv));
  return IntegerMatrixAction(dim_, std::move(out));
}

// ---------------------------------------------------------------------------

LyapunovSpectrum::LyapunovSpectrum(std::vector<LyapunovFunctional> functionals, int dim,
                                   int rank, double grouping_tolerance)
    : functionals_(std::move(functionals)), dim_(dim), rank_(rank),
      grouping_tolerance_(grouping_tolerance) {
  if (rank_ < 1 || dim_ < 1) throw Error(ErrorCode::InvalidArgument, "rank and dim must be positive");
  if (!(grouping_tolerance_ > 0)) throw Error(ErrorCode::InvalidArgument, "grouping tolerance must be positive");
  for (const auto &f : functionals_) {
    if (f.coeffs.size() != rank_) throw Error(ErrorCode::DimensionMismatch, "functional length != rank");
    if (f.multiplicity < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 1");
    if (f.orbit_direction && !f.coeffs.isZero(0.0)) {
      throw Error(ErrorCode::InvalidArgument, "orbit-direction functional must vanish");
    }
  }
}

bool LyapunovSpectrum::suspended() const noexcept {
  return std::any_of(functionals_.begin(), functionals_.end(),
                     [](const auto &f) { return f.orbit_direction; });
}

std::vector<std::size_t> LyapunovSpectrum::non_orbit_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < functionals_.size(); ++i)
    if (!functionals_[i].orbit_direction) out.push_back(i);
  return out;
}

int LyapunovSpectrum::total_multiplicity() const noexcept {
  int s = 0;
  for (const auto &f : functionals_) s += f.multiplicity;
  return s;
}

std::vector<std::string> LyapunovSpectrum::invariant_violations() const {
  std::vector<std::string> out;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(rank_);
  int mult = 0;
  int orbit = 0;
  for (const auto &f : functionals_) {
    sum += f.multiplicity * f.coeffs;
    (f.orbit_direction ? orbit : mult) += f.multiplicity;
  }
  if (sum.cwiseAbs().maxCoeff() >= 1e-9) out.push_back("sum of multiplicity-weighted coeffs is nonzero");
  if (mult != dim_) out.push_back("multiplicities do not sum to the torus dimension");
  if (orbit != 0 && orbit != rank_) out.push_back("orbit multiplicity differs from rank");
  for (std::size_t i = 0; i < functionals_.size(); ++i) {
    for (std::size_t j = i + 1; j < functionals_.size(); ++j) {
      const double dist = (functionals_[i].coeffs - functionals_[j].coeffs).cwiseAbs().maxCoeff();
      if (dist <= grouping_tolerance_) {
        out.push_back("functionals " + std::to_string(i) + " and " + std::to_string(j) +
                      " are not separated");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

LyapunovDecomposition decompose(const IntegerMatrixAction &action, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const int k = action.rank();
  const int d = action.dim();
  std::vector<Eigen::MatrixXd> gens;
  for (const auto &g : action.generators()) gens.push_back(g.cast<double>());

  std::mt19937_64 rng(kCombinationSeed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<JointBlock> blocks;
  double residual = 0.0;
  int attempt = 0;
  bool ok = false;
  double worst_seen = 0.0;
  for (; attempt < kMaxAttempts && !ok; ++attempt) {
    Eigen::VectorXd w(k);
    for (int j = 0; j < k; ++j) w(j) = normal(rng);
    ok = try_decompose(gens, w, blocks, residual);
    worst_seen = std::max(worst_seen, residual);
  }
  if (!ok) {
    std::ostringstream os;
    os << "no common triangularization after " << kMaxAttempts
       << " combinations (worst residual " << worst_seen << ")";
    throw Error(ErrorCode::EigenFailure, os.str());
  }

  // Merge blocks whose functionals agree within tol (single linkage).
  const int nb = static_cast<int>(blocks.size());
  std::vector<int> parent(nb);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < nb; ++i) {
    for (int j = i + 1; j < nb; ++j) {
      const double dist = (blocks[i].coeffs - blocks[j].coeffs).cwiseAbs().maxCoeff();
      if (dist <= tol) {
        parent[find(i)] = find(j);
      } else if (dist <= 2.0 * tol) {
        std::ostringstream os;
        os << "functionals " << blocks[i].coeffs.transpose() << " and "
           << blocks[j].coeffs.transpose() << " differ by " << dist
           << "; candidate groupings: merged (multiplicity "
           << blocks[i].basis.cols() + blocks[j].basis.cols() << ") or separate";
        throw Error(ErrorCode::ToleranceAmbiguity, os.str());
      }
    }
  }

  struct Group {
    LyapunovFunctional functional;
    Eigen::MatrixXd basis;
  };
  std::vector<Group> groups;
  std::vector<int> slot(nb, -1);
  for (int i = 0; i < nb; ++i) {
    const int r = find(i);
    const int m = static_cast<int>(blocks[i].basis.cols());
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.push_back({{Eigen::VectorXd::Zero(k), 0, false}, Eigen::MatrixXd(d, 0)});
    }
    Group &g = groups[slot[r]];
    g.functional.coeffs += m * blocks[i].coeffs;
    g.functional.multiplicity += m;
    Eigen::MatrixXd joined(d, g.basis.cols() + m);
    joined << g.basis, blocks[i].basis;
    g.basis = std::move(joined);
  }
  for (auto &g : groups) g.functional.coeffs /= g.functional.multiplicity;

  std::stable_sort(groups.begin(), groups.end(), [](const Group &a, const Group &b) {
    return functional_before(a.functional, b.functional);
  });

  std::vector<LyapunovFunctional> fs;
  std::vector<Eigen::MatrixXd> bases;
  for (auto &g : groups) {
    fs.push_back(g.functional);
    // Orthonormalize the merged basis; blocks of one group are independent.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.basis);
    bases.push_back(qr.householderQ() * Eigen::MatrixXd::Identity(d, g.basis.cols()));
  }
  return {LyapunovSpectrum(std::move(fs), d, k, tol), std::move(bases), residual, attempt};
}

LyapunovSpectrum compute_spectrum(const IntegerMatrixAction &action, double tol) {
  return decompose(action, tol).spectrum;
}

Eigen::VectorXd evaluate_exponent(const LyapunovSpectrum &spec, const Eigen::VectorXd &t) {
  if (t.size() != spec.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "t has length " + std::to_string(t.size()) +
                                                  ", rank is " + std::to_string(spec.rank()));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(spec.size()));
  for (std::size_t i = 0; i < spec.size(); ++i) out(static_cast<Eigen::Index>(i)) = spec[i].coeffs.dot(t);
  return out;
}

LyapunovSpectrum suspend(const LyapunovSpectrum &spec) {
  if (spec.suspended()) throw Error(ErrorCode::AlreadySuspended, "");
  auto fs = spec.functionals();
  fs.push_back({Eigen::VectorXd::Zero(spec.rank()), spec.rank(), true});
  return LyapunovSpectrum(std::move(fs), spec.dim(), spec.rank(), spec.grouping_tolerance());
}

} // namespace slowent
