#include "slowent/norm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "slowent/error.hpp"
#include "slowent/simplex.hpp"

namespace slowent {

namespace {

constexpr double kTieTol = 1e-12;

void check_length(const NormSpec &norm, const Eigen::VectorXd &v, const char *what) {
  if (v.size() != norm.rank()) {
    std::ostringstream os;
    os << what << " has length " << v.size() << ", norm acts on R^" << norm.rank();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Least-norm point of conv(points), by enumerating supports. Exact for the
// handful of tied vertices a support face has in low dimension.
Eigen::VectorXd min_norm_in_hull(const std::vector<Eigen::VectorXd> &pts) {
  const int n = static_cast<int>(pts.size());
  if (n == 1) return pts.front();
  Eigen::VectorXd best;
  double best_norm = std::numeric_limits<double>::infinity();
  const int limit = std::min(n, 12);
  for (unsigned mask = 1; mask < (1U << limit); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < limit; ++i)
      if (mask & (1U << i)) idx.push_back(i);
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) kkt(a, b) = pts[idx[a]].dot(pts[idx[b]]);
      kkt(a, m) = 1.0;
      kkt(m, a) = 1.0;
    }
    rhs(m) = 1.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if ((kkt * sol - rhs).norm() > 1e-9) continue;
    if (sol.head(m).minCoeff() < -1e-12) continue;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(pts.front().size());
    for (int a = 0; a < m; ++a) p += sol(a) * pts[idx[a]];
    const double pn = p.norm();
    if (pn < best_norm - 1e-15) {
      best_norm = pn;
      best = p;
    }
  }
  return best;
}

double polygon_area(const Eigen::MatrixXd &points) {
  // Andrew's monotone chain, then the shoelace formula.
  std::vector<Eigen::Vector2d> p;
  for (int i = 0; i < points.rows(); ++i) p.emplace_back(points(i, 0), points(i, 1));
  std::sort(p.begin(), p.end(), [](const auto &a, const auto &b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (p.size() < 3) return 0.0;
  auto cross = [](const Eigen::Vector2d &o, const Eigen::Vector2d &a, const Eigen::Vector2d &b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * p.size());
  std::size_t h = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], p[i]) <= 0) --h;
    hull[h++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = h + 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 2], hull[h - 1], p[i]) <= 0) --h;
    hull[h++] = p[i];
  }
  hull.resize(h - 1);
  double area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto &a = hull[i];
    const auto &b = hull[(i + 1) % hull.size()];
    area += a.x() * b.y() - a.y() * b.x();
  }
  return std::abs(area) / 2.0;
}

double unit_ball_l2(int k) {
  return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
}

} // namespace

std::string_view norm_kind_name(NormKind kind) noexcept {
  switch (kind) {
  case NormKind::L1: return "l1";
  case NormKind::L2: return "l2";
  case NormKind::LInf: return "linf";
  case NormKind::WeightedBox: return "weighted_box";
  case NormKind::Polytope: return "polytope";
  case NormKind::Ellipsoid: return "ellipsoid";
  }
  return "unknown";
}

NormSpec NormSpec::l1(int rank) {
  if (rank < 1) throw Error(ErrorCode::InvalidNorm, "rank must be positive");
  return NormSpec(NormKind::L1, rank);
}

NormSpec NormSpec::l2(int rank) {
  if (rank < 1) throw Error(ErrorCode::InvalidNorm, "rank must be positive");
  return NormSpec(NormKind::L2, rank);
}

NormSpec NormSpec::linf(int rank) {
  if (rank < 1) throw Error(ErrorCode::InvalidNorm, "rank must be positive");
  return NormSpec(NormKind::LInf, rank);
}

NormSpec NormSpec::weighted_box(Eigen::VectorXd weights) {
  if (weights.size() < 1) throw Error(ErrorCode::InvalidNorm, "empty weight vector");
  if (!(weights.minCoeff() > 0.0) || !weights.allFinite()) {
    throw Error(ErrorCode::InvalidNorm, "box weights must be strictly positive");
  }
  NormSpec n(NormKind::WeightedBox, static_cast<int>(weights.size()));
  n.weights_ = std::move(weights);
  return n;
}

NormSpec NormSpec::polytope(Eigen::MatrixXd vertices) {
  const int k = static_cast<int>(vertices.cols());
  if (k < 1 || vertices.rows() < 2) throw Error(ErrorCode::InvalidNorm, "polytope needs vertices");
  for (int i = 0; i < vertices.rows(); ++i) {
    bool mirrored = false;
    const double scale = std::max(1.0, vertices.row(i).cwiseAbs().maxCoeff());
    for (int j = 0; j < vertices.rows() && !mirrored; ++j) {
      mirrored = (vertices.row(i) + vertices.row(j)).cwiseAbs().maxCoeff() <= kTieTol * scale;
    }
    if (!mirrored) {
      throw Error(ErrorCode::InvalidNorm,
                  "polytope vertex " + std::to_string(i) + " has no antipode");
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vertices);
  lu.setThreshold(1e-12);
  if (lu.rank() < k) throw Error(ErrorCode::InvalidNorm, "polytope vertices do not span R^k");
  NormSpec n(NormKind::Polytope, k);
  n.vertices_ = std::move(vertices);
  return n;
}

NormSpec NormSpec::ellipsoid(Eigen::MatrixXd q) {
  if (q.rows() != q.cols() || q.rows() < 1) throw Error(ErrorCode::InvalidNorm, "ellipsoid matrix must be square");
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidNorm, "ellipsoid matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::InvalidNorm, "ellipsoid matrix is not positive definite");
  }
  NormSpec n(NormKind::Ellipsoid, static_cast<int>(q.rows()));
  n.inverse_ = q.inverse();
  n.inverse_ = 0.5 * (n.inverse_ + n.inverse_.transpose()).eval();
  n.matrix_ = std::move(q);
  return n;
}

NormSpec NormSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidNorm, "scale factor must be positive");
  const int k = rank_;
  switch (kind_) {
  case NormKind::L1: {
    Eigen::MatrixXd v(2 * k, k);
    v << factor * Eigen::MatrixXd::Identity(k, k), -factor * Eigen::MatrixXd::Identity(k, k);
    return polytope(v);
  }
  case NormKind::L2:
    return ellipsoid(Eigen::MatrixXd::Identity(k, k) / (factor * factor));
  case NormKind::LInf:
    return weighted_box(Eigen::VectorXd::Constant(k, factor));
  case NormKind::WeightedBox:
    return weighted_box(weights_ * factor);
  case NormKind::Polytope:
    return polytope(vertices_ * factor);
  case NormKind::Ellipsoid:
    return ellipsoid(matrix_ / (factor * factor));
  }
  throw Error(ErrorCode::InvalidNorm, "unknown norm kind");
}

std::string NormSpec::describe() const {
  std::ostringstream os;
  os << norm_kind_name(kind_) << "(k=" << rank_;
  if (kind_ == NormKind::WeightedBox) os << ", w=[" << weights_.transpose() << "]";
  if (kind_ == NormKind::Polytope) os << ", " << vertices_.rows() << " vertices";
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

double norm_value(const NormSpec &norm, const Eigen::VectorXd &t) {
  check_length(norm, t, "t");
  switch (norm.kind()) {
  case NormKind::L1: return t.lpNorm<1>();
  case NormKind::L2: return t.norm();
  case NormKind::LInf: return t.lpNorm<Eigen::Infinity>();
  case NormKind::WeightedBox: return t.cwiseAbs().cwiseQuotient(norm.weights()).maxCoeff();
  case NormKind::Ellipsoid: return std::sqrt(std::max(0.0, t.dot(norm.matrix() * t)));
  case NormKind::Polytope: {
    if (t.isZero(0.0)) return 0.0;
    // Minkowski gauge: least total weight of a nonnegative vertex combination.
    const Eigen::MatrixXd &V = norm.vertices();
    LinearProgram lp;
    lp.A = V.transpose();
    lp.b = t;
    lp.relations.assign(static_cast<std::size_t>(t.size()), Relation::Equal);
    lp.objective = -Eigen::VectorXd::Ones(V.rows());
    const LpSolution sol = maximize(lp);
    if (sol.status != LpStatus::Optimal) {
      throw Error(ErrorCode::LinearProgramFailure, "polytope gauge LP did not solve");
    }
    return -sol.value;
  }
  }
  throw Error(ErrorCode::InvalidNorm, "unknown norm kind");
}

DualMax dual_max(const NormSpec &norm, const Eigen::VectorXd &c) {
  check_length(norm, c, "c");
  const int k = norm.rank();
  DualMax out{0.0, Eigen::VectorXd::Zero(k)};
  if (c.isZero(0.0)) return out;

  switch (norm.kind()) {
  case NormKind::L1: {
    const double m = c.cwiseAbs().maxCoeff();
    int ties = 0;
    for (int j = 0; j < k; ++j) {
      if (std::abs(c(j)) >= m * (1.0 - kTieTol)) {
        out.argmax(j) = sgn(c(j));
        ++ties;
      }
    }
    out.argmax /= ties;
    out.value = m;
    return out;
  }
  case NormKind::L2:
    out.value = c.norm();
    out.argmax = c / out.value;
    return out;
  case NormKind::LInf:
    for (int j = 0; j < k; ++j) out.argmax(j) = sgn(c(j));
    out.value = c.lpNorm<1>();
    return out;
  case NormKind::WeightedBox:
    for (int j = 0; j < k; ++j) out.argmax(j) = sgn(c(j)) * norm.weights()(j);
    out.value = c.cwiseAbs().dot(norm.weights());
    return out;
  case NormKind::Ellipsoid: {
    // argmax Q^{-1} c / sqrt(c' Q^{-1} c)
    const Eigen::VectorXd y = norm.inverse_matrix() * c;
    out.value = std::sqrt(std::max(0.0, c.dot(y)));
    out.argmax = y / out.value;
    return out;
  }
  case NormKind::Polytope: {
    const Eigen::MatrixXd &V = norm.vertices();
    const Eigen::VectorXd scores = V * c;
    const double best = scores.maxCoeff();
    std::vector<Eigen::VectorXd> tied;
    for (int i = 0; i < V.rows(); ++i) {
      if (scores(i) >= best - kTieTol * (1.0 + std::abs(best))) tied.emplace_back(V.row(i).transpose());
    }
    out.value = best;
    out.argmax = min_norm_in_hull(tied);
    return out;
  }
  }
  throw Error(ErrorCode::InvalidNorm, "unknown norm kind");
}

// ---------------------------------------------------------------------------

std::vector<Facet> hull_facets(const Eigen::MatrixXd &points) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  const double scale = std::max(1.0, points.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  std::vector<Facet> facets;
  if (m == 1) {
    Eigen::Index imax = 0;
    Eigen::Index imin = 0;
    const double hi = points.col(0).maxCoeff(&imax);
    const double lo = points.col(0).minCoeff(&imin);
    facets.push_back({Eigen::VectorXd::Constant(1, 1.0), hi, {static_cast<int>(imax)}});
    facets.push_back({Eigen::VectorXd::Constant(1, -1.0), -lo, {static_cast<int>(imin)}});
    return facets;
  }
  if (n < m) return facets;

  std::vector<int> comb(m);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    Eigen::MatrixXd D(m - 1, m);
    for (int r = 1; r < m; ++r) D.row(r - 1) = points.row(comb[r]) - points.row(comb[0]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    if (sv.size() == m - 1 && sv(m - 2) > tol) {
      Eigen::VectorXd a = svd.matrixV().col(m - 1);
      double b = a.dot(points.row(comb[0]).transpose());
      const Eigen::VectorXd vals = points * a - Eigen::VectorXd::Constant(n, b);
      bool valid = true;
      if (vals.maxCoeff() <= tol) {
      } else if (vals.minCoeff() >= -tol) {
        a = -a;
        b = -b;
      } else {
        valid = false;
      }
      if (valid) {
        const bool seen = std::any_of(facets.begin(), facets.end(), [&](const Facet &f) {
          return (f.normal - a).cwiseAbs().maxCoeff() < 1e-9 && std::abs(f.offset - b) < tol;
        });
        if (!seen) {
          Facet f{a, b, {}};
          for (int i = 0; i < n; ++i)
            if (std::abs(points.row(i).dot(a) - b) <= tol) f.members.push_back(i);
          facets.push_back(std::move(f));
        }
      }
    }
    // next combination
    int i = m - 1;
    while (i >= 0 && comb[i] == n - m + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
  }
  return facets;
}

double hull_volume(const Eigen::MatrixXd &points) {
  const int m = static_cast<int>(points.cols());
  if (points.rows() == 0) return 0.0;
  if (m == 1) return points.col(0).maxCoeff() - points.col(0).minCoeff();
  if (m == 2) return polygon_area(points);

  const Eigen::VectorXd center = points.colwise().mean().transpose();
  double volume = 0.0;
  for (const Facet &f : hull_facets(points)) {
    const double height = f.offset - f.normal.dot(center);
    // orthonormal basis of the facet hyperplane
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(f.normal);
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd basis = Q.rightCols(m - 1);
    Eigen::MatrixXd proj(static_cast<Eigen::Index>(f.members.size()), m - 1);
    for (std::size_t i = 0; i < f.members.size(); ++i) {
      proj.row(static_cast<Eigen::Index>(i)) = points.row(f.members[i]) * basis;
    }
    volume += height * hull_volume(proj) / m;
  }
  return volume;
}

double unit_ball_volume(const NormSpec &norm) {
  const int k = norm.rank();
  switch (norm.kind()) {
  case NormKind::L1: return std::pow(2.0, k) / std::tgamma(k + 1.0);
  case NormKind::L2: return unit_ball_l2(k);
  case NormKind::LInf: return std::pow(2.0, k);
  case NormKind::WeightedBox: return std::pow(2.0, k) * norm.weights().prod();
  case NormKind::Ellipsoid: return unit_ball_l2(k) / std::sqrt(norm.matrix().determinant());
  case NormKind::Polytope:
    if (k == 1) return 2.0 * norm.vertices().cwiseAbs().maxCoeff();
    return hull_volume(norm.vertices());
  }
  throw Error(ErrorCode::InvalidNorm, "unknown norm kind");
}

double polytope_support_lp(const NormSpec &polytope, const Eigen::VectorXd &c) {
  if (polytope.kind() != NormKind::Polytope) {
    throw Error(ErrorCode::InvalidNorm, "support LP needs a polytope norm");
  }
  check_length(polytope, c, "c");
  const auto facets = hull_facets(polytope.vertices());
  const int k = polytope.rank();
  LinearProgram lp;
  lp.A.resize(static_cast<Eigen::Index>(facets.size()), k);
  lp.b.resize(static_cast<Eigen::Index>(facets.size()));
  for (std::size_t i = 0; i < facets.size(); ++i) {
    lp.A.row(static_cast<Eigen::Index>(i)) = facets[i].normal.transpose();
    lp.b(static_cast<Eigen::Index>(i)) = facets[i].offset;
  }
  lp.relations.assign(facets.size(), Relation::LessEq);
  lp.objective = c;
  lp.free_vars.assign(static_cast<std::size_t>(k), true);
  const LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::LinearProgramFailure, "support LP did not solve");
  }
  return sol.value;
}

} // namespace slowent
