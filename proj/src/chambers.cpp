#include "slowent/chambers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowent/error.hpp"
#include "slowent/sampling.hpp"
#include "slowent/simplex.hpp"

namespace slowent {

namespace {

constexpr double kParallelTol = 1e-9;
constexpr double kMargin = 1e-6;
constexpr double kInfeasible = 1e-9;

bool is_nonzero(const Eigen::VectorXd &c) { return c.cwiseAbs().maxCoeff() > 1e-12; }

Eigen::VectorXd sign_normalize(Eigen::VectorXd n) {
  n.normalize();
  for (int j = 0; j < n.size(); ++j) {
    if (std::abs(n(j)) > 1e-12) {
      if (n(j) < 0) n = -n;
      break;
    }
  }
  return n;
}

std::vector<int> signs_of(const HyperplaneArrangement &arr, const Eigen::VectorXd &t) {
  std::vector<int> s;
  for (const auto &n : arr.normals) s.push_back(n.dot(t) > 0 ? 1 : -1);
  return s;
}

double margin_of(const HyperplaneArrangement &arr, const Eigen::VectorXd &t) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto &n : arr.normals) m = std::min(m, std::abs(n.dot(t)));
  return m / t.norm();
}

std::vector<Chamber> planar_chambers(const HyperplaneArrangement &arr) {
  std::vector<double> angles;
  for (const auto &n : arr.normals) {
    const double a = std::atan2(n(0), -n(1)); // direction of the line
    angles.push_back(std::fmod(a + 2 * M_PI, 2 * M_PI));
    angles.push_back(std::fmod(a + 3 * M_PI, 2 * M_PI));
  }
  std::sort(angles.begin(), angles.end());
  std::vector<Chamber> out;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double lo = angles[i];
    const double hi = i + 1 < angles.size() ? angles[i + 1] : angles.front() + 2 * M_PI;
    const double mid = 0.5 * (lo + hi);
    Eigen::VectorXd rep(2);
    rep << std::cos(mid), std::sin(mid);
    const double margin = margin_of(arr, rep);
    if (margin < kMargin) {
      std::ostringstream os;
      os << "sector between angles " << lo << " and " << hi << " has margin " << margin;
      throw Error(ErrorCode::DegenerateArrangement, os.str());
    }
    out.push_back({signs_of(arr, rep), rep});
  }
  return out;
}

// max delta s.t. s_j n_j . t >= delta, |t|_inf <= 1.
struct Feasibility {
  double ratio = 0.0; // delta / |t|
  Eigen::VectorXd point;
};

Feasibility sign_feasibility(const std::vector<Eigen::VectorXd> &normals,
                             const std::vector<int> &signs) {
  const int k = static_cast<int>(normals.front().size());
  const int m = static_cast<int>(signs.size());
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Zero(m + 2 * k + 1, k + 1);
  lp.b = Eigen::VectorXd::Zero(m + 2 * k + 1);
  int row = 0;
  for (int j = 0; j < m; ++j, ++row) {
    lp.A.row(row).head(k) = -signs[static_cast<std::size_t>(j)] * normals[static_cast<std::size_t>(j)].transpose();
    lp.A(row, k) = 1.0;
  }
  for (int i = 0; i < k; ++i) {
    lp.A(row, i) = 1.0;
    lp.b(row++) = 1.0;
    lp.A(row, i) = -1.0;
    lp.b(row++) = 1.0;
  }
  lp.A(row, k) = 1.0;
  lp.b(row) = 1.0;
  lp.relations.assign(static_cast<std::size_t>(lp.A.rows()), Relation::LessEq);
  lp.objective = Eigen::VectorXd::Zero(k + 1);
  lp.objective(k) = 1.0;
  lp.free_vars.assign(static_cast<std::size_t>(k + 1), true);
  lp.free_vars[static_cast<std::size_t>(k)] = false;
  const LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::LinearProgramFailure, "chamber feasibility LP");
  }
  Feasibility f;
  f.point = sol.x.head(k);
  const double tn = f.point.norm();
  f.ratio = tn > 0 ? sol.x(k) / tn : 0.0;
  return f;
}

} // namespace

HyperplaneArrangement make_arrangement(int rank, const std::vector<Eigen::VectorXd> &normals) {
  HyperplaneArrangement arr;
  arr.rank = rank;
  for (const auto &raw : normals) {
    if (raw.size() != rank) throw Error(ErrorCode::DimensionMismatch, "normal length != rank");
    if (!is_nonzero(raw)) continue;
    const Eigen::VectorXd n = sign_normalize(raw);
    const bool seen = std::any_of(arr.normals.begin(), arr.normals.end(), [&](const auto &m) {
      return (m - n).cwiseAbs().maxCoeff() <= kParallelTol;
    });
    if (!seen) {
      arr.normals.push_back(n);
      arr.source_indices.emplace_back();
    }
  }
  return arr;
}

HyperplaneArrangement lyapunov_hyperplanes(const LyapunovSpectrum &spec) {
  HyperplaneArrangement arr;
  arr.rank = spec.rank();
  for (auto i : spec.non_orbit_indices()) {
    const auto &c = spec[i].coeffs;
    if (!is_nonzero(c)) continue;
    const Eigen::VectorXd n = sign_normalize(c);
    std::size_t slot = arr.normals.size();
    for (std::size_t j = 0; j < arr.normals.size(); ++j) {
      if ((arr.normals[j] - n).cwiseAbs().maxCoeff() <= kParallelTol) slot = j;
    }
    if (slot == arr.normals.size()) {
      arr.normals.push_back(n);
      arr.source_indices.emplace_back();
    }
    arr.source_indices[slot].push_back(i);
  }
  if (arr.normals.empty()) {
    throw Error(ErrorCode::AllZeroSpectrum, "no nonzero Lyapunov functional");
  }
  return arr;
}

std::vector<Chamber> enumerate_chambers(const HyperplaneArrangement &arr) {
  const int k = arr.rank;
  if (k > 4) throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(k) + " > 4");
  if (arr.normals.empty()) {
    return {{{}, Eigen::VectorXd::Unit(k, 0)}};
  }
  if (k == 1) {
    return {{{1}, Eigen::VectorXd::Constant(1, arr.normals[0](0) > 0 ? 1.0 : -1.0)},
            {{-1}, Eigen::VectorXd::Constant(1, arr.normals[0](0) > 0 ? -1.0 : 1.0)}};
  }
  if (k == 2) return planar_chambers(arr);

  std::vector<std::vector<int>> current{{1}, {-1}};
  std::vector<Eigen::VectorXd> reps{arr.normals[0], -arr.normals[0]};
  for (std::size_t h = 1; h < arr.normals.size(); ++h) {
    std::vector<Eigen::VectorXd> subset(arr.normals.begin(),
                                        arr.normals.begin() + static_cast<long>(h) + 1);
    std::vector<std::vector<int>> next;
    std::vector<Eigen::VectorXd> next_reps;
    for (const auto &s : current) {
      for (int sign : {1, -1}) {
        auto candidate = s;
        candidate.push_back(sign);
        const Feasibility f = sign_feasibility(subset, candidate);
        if (f.ratio <= kInfeasible) continue;
        if (f.ratio < kMargin) {
          std::ostringstream os;
          os << "sign vector at hyperplane " << h << " only separable at margin " << f.ratio;
          throw Error(ErrorCode::DegenerateArrangement, os.str());
        }
        next.push_back(std::move(candidate));
        next_reps.push_back(f.point / f.point.norm());
      }
    }
    current = std::move(next);
    reps = std::move(next_reps);
  }
  std::vector<Chamber> out;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (arr.normals.size() == 1) reps[i] /= reps[i].norm();
    out.push_back({current[i], reps[i]});
  }
  std::sort(out.begin(), out.end(), [](const Chamber &a, const Chamber &b) {
    return std::lexicographical_compare(a.sign_vector.begin(), a.sign_vector.end(),
                                        b.sign_vector.begin(), b.sign_vector.end(),
                                        [](int x, int y) { return x > y; });
  });
  return out;
}

Classification classify_element(const LyapunovSpectrum &spec, const Eigen::VectorXd &t,
                                double tol) {
  if (t.size() != spec.rank()) throw Error(ErrorCode::DimensionMismatch, "t length != rank");
  if (t.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "t must be nonzero");
  const HyperplaneArrangement arr = lyapunov_hyperplanes(spec);
  const double tn = t.norm();
  Classification c;
  for (std::size_t j = 0; j < arr.normals.size(); ++j) {
    // an element shorter than tol cannot be placed in any chamber
    if (tn <= tol || std::abs(arr.normals[j].dot(t)) <= tol * tn) c.singular_hyperplanes.push_back(j);
  }
  c.regular = c.singular_hyperplanes.empty();
  if (c.regular) c.sign_vector = signs_of(arr, t);
  return c;
}

double separation_score(const LyapunovSpectrum &spec, const Eigen::VectorXd &t) {
  const Eigen::VectorXd chi = evaluate_exponent(spec, t);
  std::vector<double> vals;
  for (auto i : spec.non_orbit_indices())
    if (is_nonzero(spec[i].coeffs)) vals.push_back(chi(static_cast<Eigen::Index>(i)));
  double score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    score = std::min(score, std::abs(vals[i]));
    for (std::size_t j = i + 1; j < vals.size(); ++j) score = std::min(score, std::abs(vals[i] - vals[j]));
  }
  return vals.empty() ? 0.0 : score;
}

Eigen::VectorXd pick_generic_element(const LyapunovSpectrum &spec, const NormSpec &norm,
                                     int samples) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  if (norm.rank() != spec.rank()) throw Error(ErrorCode::DimensionMismatch, "norm rank != action rank");
  lyapunov_hyperplanes(spec); // AllZeroSpectrum check
  const int k = spec.rank();

  auto to_boundary = [&](const Eigen::VectorXd &u) -> Eigen::VectorXd {
    const double p = norm_value(norm, u);
    return p > 0 ? Eigen::VectorXd(u / p) : u;
  };

  Eigen::VectorXd best;
  double best_score = -1.0;
  int taken = 0;
  for (unsigned long idx = 1; taken < samples; ++idx) {
    const Eigen::VectorXd u = halton_sphere_point(idx, k);
    if (u.isZero(0.0)) continue;
    ++taken;
    const Eigen::VectorXd t = to_boundary(u);
    const double sc = separation_score(spec, t);
    if (sc > best_score) {
      best_score = sc;
      best = t;
    }
  }

  // Coordinate-wise refinement on the ball boundary.
  double step = 0.1 * best.cwiseAbs().maxCoeff();
  while (step > 1e-10 && k > 1) {
    bool improved = false;
    for (int j = 0; j < k; ++j) {
      for (double dir : {1.0, -1.0}) {
        Eigen::VectorXd y = best;
        y(j) += dir * step;
        if (y.isZero(0.0)) continue;
        y = to_boundary(y);
        const double sc = separation_score(spec, y);
        if (sc > best_score) {
          best_score = sc;
          best = y;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2.0;
  }

  if (best_score < 1e-9) {
    std::ostringstream os;
    os << "best separation score " << best_score;
    throw Error(ErrorCode::NoSeparatingElement, os.str());
  }
  const double p = norm_value(norm, best);
  if (p > 1.0) best /= p;
  return best;
}

} // namespace slowent
