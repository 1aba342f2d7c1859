#include "slowent/bowen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "slowent/error.hpp"
#include "slowent/simplex.hpp"

namespace slowent {

namespace {

const BigInt kExactLimit = BigInt(1) << 53;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
inline double unit_uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  return std::mt19937_64(seq);
}

using Polygon = std::vector<Eigen::Vector2d>;

// Keeps the part of poly with n . x <= c.
Polygon clip(const Polygon &poly, const Eigen::Vector2d &n, double c) {
  Polygon out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d &p = poly[i];
    const Eigen::Vector2d &q = poly[(i + 1) % m];
    const double fp = n.dot(p) - c;
    const double fq = n.dot(q) - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      out.push_back(p + (fp / (fp - fq)) * (q - p));
    }
  }
  return out;
}

double polygon_area(const Polygon &poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto &p = poly[i];
    const auto &q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

// Coordinate blocks coupled by any constraint matrix.
std::vector<std::vector<int>> coordinate_blocks(const BowenBody &body) {
  const int d = body.dim;
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (const auto &c : body.constraints) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j && c.matrix(i, j) != 0.0) parent[static_cast<std::size_t>(find(i))] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(static_cast<std::size_t>(d), -1);
  for (int i = 0; i < d; ++i) {
    const int r = find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return blocks;
}

Eigen::MatrixXd joint_basis(const LyapunovDecomposition &decomp, const NormSpec &norm,
                            Eigen::VectorXd &a) {
  const int d = decomp.spectrum.dim();
  Eigen::MatrixXd basis(d, d);
  a.resize(d);
  int col = 0;
  for (std::size_t i = 0; i < decomp.subspaces.size(); ++i) {
    const Eigen::MatrixXd &w = decomp.subspaces[i];
    const double ai = dual_max(norm, decomp.spectrum[i].coeffs).value;
    for (int c = 0; c < w.cols(); ++c, ++col) {
      basis.col(col) = w.col(c);
      a(col) = ai;
    }
  }
  if (col != d) throw Error(ErrorCode::EigenFailure, "Lyapunov subspaces do not span R^d");
  return basis;
}

// max of e . v over the body, by LP.
double body_support(const Eigen::MatrixXd &rows, double eps, const Eigen::VectorXd &e) {
  const auto m = rows.rows();
  const auto d = rows.cols();
  LinearProgram lp;
  lp.A.resize(2 * m, d);
  lp.A << rows, -rows;
  lp.b = Eigen::VectorXd::Constant(2 * m, eps);
  lp.relations.assign(static_cast<std::size_t>(2 * m), Relation::LessEq);
  lp.objective = e;
  lp.free_vars.assign(static_cast<std::size_t>(d), true);
  const LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::LinearProgramFailure, "Bowen body support LP");
  }
  return sol.value;
}

void check_s_eps(double s, double eps) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  if (!(eps > 0.0 && eps <= 0.25)) {
    throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1/4], got " + fmt(eps));
  }
}

} // namespace

bool BowenBody::contains(const Eigen::VectorXd &v, double rel_tol) const {
  const double bound = eps * (1.0 + rel_tol);
  for (const auto &c : constraints) {
    if ((c.matrix * v).cwiseAbs().maxCoeff() > bound) return false;
  }
  return true;
}

Eigen::MatrixXd BowenBody::stacked_rows() const {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(constraints.size()) * dim, dim);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    r.middleRows(static_cast<Eigen::Index>(i) * dim, dim) = constraints[i].matrix;
  }
  return r;
}

BowenBody bowen_constraints(const IntegerMatrixAction &action, const NormSpec &norm, double s,
                            double eps) {
  check_s_eps(s, eps);
  const int k = action.rank();
  if (norm.rank() != k) throw Error(ErrorCode::DimensionMismatch, "norm rank != action rank");

  std::vector<long long> bound(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const double reach = s * dual_max(norm, Eigen::VectorXd::Unit(k, j)).value;
    bound[static_cast<std::size_t>(j)] = static_cast<long long>(std::floor(reach + 1e-9));
  }

  std::vector<Eigen::VectorXd> window;
  std::vector<long long> t(bound.size());
  for (int j = 0; j < k; ++j) t[static_cast<std::size_t>(j)] = -bound[static_cast<std::size_t>(j)];
  const double limit = s * (1.0 + 1e-12) + 1e-12;
  while (true) {
    Eigen::VectorXd tv(k);
    for (int j = 0; j < k; ++j) tv(j) = static_cast<double>(t[static_cast<std::size_t>(j)]);
    if (norm_value(norm, tv) <= limit) window.push_back(tv);
    int j = k - 1;
    while (j >= 0 && t[static_cast<std::size_t>(j)] == bound[static_cast<std::size_t>(j)]) {
      t[static_cast<std::size_t>(j)] = -bound[static_cast<std::size_t>(j)];
      --j;
    }
    if (j < 0) break;
    ++t[static_cast<std::size_t>(j)];
  }
  if (window.empty()) throw Error(ErrorCode::EmptyWindow, "no lattice point in the window");

  const auto &gens = action.generators();
  if (window.size() > 1) {
    for (int j = 0; j < k; ++j) {
      if (bound[static_cast<std::size_t>(j)] == 0) continue;
      const BigIntMatrix g(gens[static_cast<std::size_t>(j)]);
      const BigInt step = std::max(g.row_sum_norm(), g.unimodular_inverse().row_sum_norm());
      const double reach = static_cast<double>(step) * eps;
      if (reach >= 0.5) {
        throw Error(ErrorCode::WraparoundRisk,
                    "generator " + std::to_string(j) + " moves an eps-pair by up to " + fmt(reach));
      }
    }
  }

  // Powers of each generator over its window range.
  std::vector<std::vector<BigIntMatrix>> powers(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const BigIntMatrix g(gens[static_cast<std::size_t>(j)]);
    const long long b = bound[static_cast<std::size_t>(j)];
    auto &pw = powers[static_cast<std::size_t>(j)];
    pw.resize(static_cast<std::size_t>(2 * b + 1));
    pw[static_cast<std::size_t>(b)] = BigIntMatrix::identity(action.dim());
    if (b > 0) {
      const BigIntMatrix inv = g.unimodular_inverse();
      for (long long e = 1; e <= b; ++e) {
        pw[static_cast<std::size_t>(b + e)] = pw[static_cast<std::size_t>(b + e - 1)] * g;
        pw[static_cast<std::size_t>(b - e)] = pw[static_cast<std::size_t>(b - e + 1)] * inv;
      }
    }
  }

  BowenBody body;
  body.s = s;
  body.eps = eps;
  body.norm_used = norm;
  body.dim = action.dim();
  for (const auto &tv : window) {
    BigIntMatrix m = BigIntMatrix::identity(action.dim());
    BowenConstraint c;
    for (int j = 0; j < k; ++j) {
      const auto e = static_cast<long long>(tv(j));
      c.t.push_back(e);
      m = m * powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(e + bound[static_cast<std::size_t>(j)])];
    }
    if (m.max_abs() > kExactLimit) {
      std::ostringstream os;
      os << "entries of M(t) exceed 2^53 at t = (";
      for (std::size_t j = 0; j < c.t.size(); ++j) os << (j ? "," : "") << c.t[j];
      os << ")";
      throw Error(ErrorCode::WraparoundRisk, os.str());
    }
    c.matrix = m.to_double();
    body.constraints.push_back(std::move(c));
  }
  return body;
}

double max_valid_slack(const LyapunovDecomposition &decomp, const NormSpec &norm) {
  double smallest = 1.0;
  for (const auto &f : decomp.spectrum.functionals()) {
    const double a = dual_max(norm, f.coeffs).value;
    if (a > 1e-12) smallest = std::min(smallest, a);
  }
  return smallest / (100.0 * decomp.spectrum.dim());
}

SandwichRectangles sandwich_rectangles(const LyapunovDecomposition &decomp,
                                       const NormSpec &norm, double s, double eps,
                                       double slack) {
  if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (!(slack > 0.0)) throw Error(ErrorCode::InvalidArgument, "slack must be positive");
  if (norm.rank() != decomp.spectrum.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "norm rank != action rank");
  }
  const double cap = max_valid_slack(decomp, norm);
  if (slack > cap * (1.0 + 1e-12)) {
    throw Error(ErrorCode::SlackTooLarge, "slack " + fmt(slack) + " exceeds " + fmt(cap));
  }
  SandwichRectangles r;
  r.basis = joint_basis(decomp, norm, r.a);
  const int d = static_cast<int>(r.a.size());
  const double m1 = d + 1.0;
  r.inner.resize(d);
  r.outer.resize(d);
  for (int i = 0; i < d; ++i) {
    r.inner(i) = eps * std::exp(-(r.a(i) + 2 * slack) * s) / m1;
    r.outer(i) = r.a(i) > 1e-12 ? m1 * eps * std::exp(-(r.a(i) - 2 * slack) * s) : m1 * eps;
  }
  r.s = s;
  r.eps = eps;
  r.slack = slack;
  return r;
}

SandwichCheck verify_sandwich(const BowenBody &body, const SandwichRectangles &box,
                              int boundary_samples, std::uint64_t seed) {
  const int d = body.dim;
  if (box.basis.rows() != d) throw Error(ErrorCode::DimensionMismatch, "basis size != d");
  SandwichCheck out;
  for (long mask = 0; mask < (1L << d); ++mask) {
    Eigen::VectorXd u(d);
    for (int i = 0; i < d; ++i) u(i) = (mask >> i & 1) ? box.inner(i) : -box.inner(i);
    ++out.inner_vertices;
    if (!body.contains(box.basis * u, 1e-12)) ++out.inner_violations;
  }
  const Eigen::MatrixXd rows = body.stacked_rows();
  const Eigen::MatrixXd to_eigen = box.basis.inverse();
  std::mt19937_64 rng = batch_rng(seed, 0);
  std::normal_distribution<double> gauss;
  for (int n = 0; n < boundary_samples; ++n) {
    Eigen::VectorXd dir(d);
    for (int i = 0; i < d; ++i) dir(i) = gauss(rng);
    const double reach = (rows * dir).cwiseAbs().maxCoeff();
    const Eigen::VectorXd coords = to_eigen * (dir * (body.eps / reach));
    ++out.boundary_samples;
    if ((coords.cwiseAbs().array() > box.outer.array() * (1.0 + 1e-9)).any()) {
      ++out.outer_violations;
    }
  }
  return out;
}

std::string_view volume_method_name(VolumeMethod m) noexcept {
  return m == VolumeMethod::ExactPolygon2D ? "ExactPolygon2D" : "MonteCarlo";
}

VolumeEstimate exact_volume_2d(const BowenBody &body) {
  VolumeEstimate est;
  est.method = VolumeMethod::ExactPolygon2D;
  est.value = 1.0;
  for (const auto &block : coordinate_blocks(body)) {
    if (block.size() > 2) {
      throw Error(ErrorCode::NotPlanarFactorizable,
                  "coupled coordinate block of size " + std::to_string(block.size()));
    }
    double vol = 0.0;
    if (block.size() == 1) {
      double half = body.eps;
      for (const auto &c : body.constraints) {
        const double r = std::abs(c.matrix(block[0], block[0]));
        if (r > 0) half = std::min(half, body.eps / r);
      }
      vol = 2 * half;
    } else {
      const int i0 = block[0], i1 = block[1];
      const double e = body.eps;
      Polygon poly{{-e, -e}, {e, -e}, {e, e}, {-e, e}};
      for (const auto &c : body.constraints) {
        for (int r : {i0, i1}) {
          const Eigen::Vector2d n(c.matrix(r, i0), c.matrix(r, i1));
          poly = clip(poly, n, e);
          poly = clip(poly, -n, e);
        }
      }
      vol = polygon_area(poly);
    }
    est.factor_volumes.push_back(vol);
    est.value *= vol;
  }
  return est;
}

VolumeEstimate mc_volume(const BowenBody &body, const SandwichRectangles &box, long long samples,
                         std::uint64_t seed) {
  if (samples < 10000) throw Error(ErrorCode::InvalidArgument, "samples must be >= 10^4");
  const int d = body.dim;
  if (box.basis.rows() != d) throw Error(ErrorCode::DimensionMismatch, "basis size != d");

  const Eigen::MatrixXd rows = body.stacked_rows();
  const Eigen::MatrixXd to_eigen = box.basis.inverse();
  VolumeEstimate est;
  est.method = VolumeMethod::MonteCarlo;
  est.samples = samples;
  est.seed = seed;
  est.bounding_box = box.outer;
  // The outer rectangle is only a bracket; make sure it contains the body.
  for (int i = 0; i < d; ++i) {
    const double reach = body_support(rows, body.eps, to_eigen.row(i).transpose());
    if (reach > est.bounding_box(i)) {
      est.bounding_box(i) = reach * (1.0 + 1e-9);
      est.box_widened = true;
    }
  }

  // Rows acting on eigen-coordinates, most restrictive first for early exit.
  Eigen::MatrixXd re = rows * box.basis;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(re.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> weight(order.size());
  for (Eigen::Index r = 0; r < re.rows(); ++r) {
    weight[static_cast<std::size_t>(r)] = (re.row(r).cwiseAbs().transpose().cwiseProduct(est.bounding_box)).sum();
  }
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
    return weight[static_cast<std::size_t>(x)] > weight[static_cast<std::size_t>(y)];
  });
  Eigen::MatrixXd sorted(re.rows(), d);
  for (std::size_t r = 0; r < order.size(); ++r) sorted.row(static_cast<Eigen::Index>(r)) = re.row(order[r]);
  const Eigen::MatrixXd rt = sorted.transpose(); // column-major rows for contiguous access

  constexpr long long kBatch = 1 << 16;
  long long accepted = 0;
  std::vector<double> u(static_cast<std::size_t>(d));
  const double *half = est.bounding_box.data();
  for (long long start = 0, b = 0; start < samples; start += kBatch, ++b) {
    std::mt19937_64 rng = batch_rng(seed, static_cast<std::uint64_t>(b));
    const long long n = std::min(kBatch, samples - start);
    for (long long i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) u[static_cast<std::size_t>(j)] = (2.0 * unit_uniform(rng) - 1.0) * half[j];
      bool inside = true;
      for (Eigen::Index r = 0; r < rt.cols() && inside; ++r) {
        const double *row = rt.col(r).data();
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += row[j] * u[static_cast<std::size_t>(j)];
        inside = std::abs(acc) <= body.eps;
      }
      accepted += inside ? 1 : 0;
    }
  }

  const double box_volume =
      std::abs(box.basis.determinant()) * (2.0 * est.bounding_box.array()).prod();
  est.accepted = accepted;
  if (accepted == 0) {
    // 95% upper bound for a zero count (rule of three).
    throw Error(ErrorCode::ZeroAcceptance,
                "0 of " + std::to_string(samples) + " samples accepted; volume < " +
                    fmt(3.0 * box_volume / static_cast<double>(samples)) + " at 95%");
  }
  const double r = static_cast<double>(accepted) / static_cast<double>(samples);
  est.value = box_volume * r;
  est.stderr_ = est.value * std::sqrt((1.0 - r) / (r * static_cast<double>(samples)));
  return est;
}

SlopeFit fit_slope(const std::vector<double> &s, const std::vector<double> &logvols) {
  if (s.size() != logvols.size()) throw Error(ErrorCode::DimensionMismatch, "s and logvols differ");
  if (s.size() < 3) throw Error(ErrorCode::InvalidArgument, "slope fit needs at least 3 points");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw Error(ErrorCode::InvalidArgument, "s grid must be strictly increasing");
  }
  for (double y : logvols) {
    if (!std::isfinite(y)) throw Error(ErrorCode::InvalidArgument, "non-finite log-volume");
  }

  auto line = [](const std::vector<double> &x, const std::vector<double> &y, std::size_t skip,
                 double &slope, double &intercept) {
    double n = 0, mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == skip) continue;
      mx += x[i];
      my += y[i];
      n += 1;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == skip) continue;
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    slope = sxy / sxx;
    intercept = my - slope * mx;
  };

  SlopeFit fit;
  fit.s_grid = s;
  fit.logvols = logvols;
  while (true) {
    const std::size_t n = fit.s_grid.size();
    line(fit.s_grid, fit.logvols, n, fit.slope, fit.intercept);
    fit.loo_min = std::numeric_limits<double>::infinity();
    fit.loo_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double sl = 0, ic = 0;
      line(fit.s_grid, fit.logvols, i, sl, ic);
      fit.loo_min = std::min(fit.loo_min, sl);
      fit.loo_max = std::max(fit.loo_max, sl);
    }
    if (n > 3 && fit.loo_max - fit.loo_min > 0.2 * std::abs(fit.slope)) {
      fit.s_grid.erase(fit.s_grid.begin());
      fit.logvols.erase(fit.logvols.begin());
      ++fit.dropped_leading;
      continue;
    }
    break;
  }
  double my = 0;
  for (double y : fit.logvols) my += y;
  my /= static_cast<double>(fit.logvols.size());
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < fit.s_grid.size(); ++i) {
    const double e = fit.logvols[i] - (fit.intercept + fit.slope * fit.s_grid[i]);
    ss_res += e * e;
    ss_tot += (fit.logvols[i] - my) * (fit.logvols[i] - my);
  }
  fit.r_squared = ss_tot > 0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

LocalEntropyEstimate estimate_local_slow_entropy(const IntegerMatrixAction &action,
                                                 const NormSpec &norm,
                                                 const std::optional<std::vector<double>> &gammas,
                                                 double eps, const std::vector<double> &s_grid,
                                                 long long samples, std::uint64_t seed,
                                                 EstimatorMethod method) {
  const LyapunovDecomposition decomp = decompose(action);
  const GammaAssignment g = gammas ? GammaAssignment::user(decomp.spectrum, *gammas)
                                   : GammaAssignment::haar(decomp.spectrum);
  LocalEntropyEstimate out;
  out.formula_delta = slow_entropy(decomp.spectrum, g, norm).total;
  const double slack = max_valid_slack(decomp, norm);

  std::vector<double> logvols;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    const BowenBody body = bowen_constraints(action, norm, s, eps);
    BowenRow row;
    row.s = s;
    row.constraints = body.constraints.size();
    bool exact = method == EstimatorMethod::Exact;
    if (method == EstimatorMethod::Auto) {
      const auto blocks = coordinate_blocks(body);
      exact = std::all_of(blocks.begin(), blocks.end(), [](const auto &b) { return b.size() <= 2; });
    }
    if (exact) {
      row.volume = exact_volume_2d(body);
    } else {
      const SandwichRectangles box = sandwich_rectangles(decomp, norm, s, eps, slack);
      row.volume = mc_volume(body, box, samples, seed + i);
    }
    logvols.push_back(-std::log(row.volume.value));
    out.rows.push_back(std::move(row));
  }
  out.fit = fit_slope(s_grid, logvols);
  out.relative_gap = out.formula_delta != 0.0
                         ? (out.fit.slope - out.formula_delta) / out.formula_delta
                         : 0.0;
  return out;
}

double auto_grid_resolution(double ball_volume, double eps, double points_per_ball) {
  if (!(ball_volume > 0.0) || !(points_per_ball > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "ball volume and points per ball must be positive");
  }
  return std::min(eps / 4.0, std::sqrt(ball_volume / points_per_ball));
}

long long cover_grid_side(double grid_resolution) {
  const auto n = static_cast<long long>(std::ceil(1.0 / grid_resolution - 1e-9));
  constexpr long long kMaxPoints = 1LL << 26;
  if (n * n > kMaxPoints) {
    throw Error(ErrorCode::InvalidArgument,
                "grid of " + std::to_string(n) + "^2 points exceeds the 2^26 limit");
  }
  return n;
}

CoverEstimate covering_number(const IntegerMatrixAction &action, const NormSpec &norm, double s,
                              double eps, double delta, double grid_resolution) {
  if (action.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "covering requires d = 2");
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
  if (!(grid_resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
  if (grid_resolution > eps / 4.0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::GridTooCoarse,
                "resolution " + fmt(grid_resolution) + " > eps/4 = " + fmt(eps / 4.0));
  }
  CoverEstimate out;
  out.s = s;
  out.eps = eps;
  out.delta = delta;
  if (delta >= 1.0) {
    check_s_eps(s, eps);
    out.count = 1;
    out.vacuous = true;
    out.grid_resolution = grid_resolution;
    return out;
  }

  const BowenBody body = bowen_constraints(action, norm, s, eps);
  const long long n = cover_grid_side(grid_resolution);
  const double h = 1.0 / static_cast<double>(n);
  const auto reach = static_cast<long long>(std::floor(eps * static_cast<double>(n) + 1e-9));

  // Constraint matrices reduced mod n; products stay far below 2^63.
  std::vector<std::array<long long, 4>> mats;
  for (const auto &c : body.constraints) {
    std::array<long long, 4> m{};
    for (int i = 0; i < 4; ++i) {
      const auto v = static_cast<long long>(c.matrix(i / 2, i % 2));
      m[static_cast<std::size_t>(i)] = ((v % n) + n) % n;
    }
    mats.push_back(m);
  }
  auto centered_ok = [&](long long v) {
    v %= n;
    if (v > n / 2) v -= n;
    if (v < -(n / 2)) v += n;
    return std::abs(v) <= reach;
  };
  std::vector<std::pair<long long, long long>> ball;
  for (long long a = -reach; a <= reach; ++a) {
    for (long long b = -reach; b <= reach; ++b) {
      const long long am = (a + n) % n, bm = (b + n) % n;
      bool ok = true;
      for (const auto &m : mats) {
        if (!centered_ok(m[0] * am + m[1] * bm) || !centered_ok(m[2] * am + m[3] * bm)) {
          ok = false;
          break;
        }
      }
      if (ok) ball.emplace_back(a, b);
    }
  }
  if (ball.size() > 65535) {
    throw Error(ErrorCode::InvalidArgument, "Bowen ball holds too many grid points");
  }

  const long long total = n * n;
  const auto target = static_cast<long long>(std::floor(delta * static_cast<double>(total)));
  const auto bs = static_cast<std::uint16_t>(ball.size());
  std::vector<std::uint16_t> gain(static_cast<std::size_t>(total), bs);
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(total), 0);
  std::vector<long long> histogram(ball.size() + 1, 0);
  histogram[ball.size()] = total;
  long long uncovered = total;
  long long count = 0;

  auto wrap = [n](long long x) { return x < 0 ? x + n : (x >= n ? x - n : x); };
  for (long long g = bs; g >= 1 && uncovered > target; --g) {
    if (histogram[static_cast<std::size_t>(g)] == 0) continue;
    for (long long c = 0; c < total && uncovered > target; ++c) {
      if (gain[static_cast<std::size_t>(c)] != g) continue;
      ++count;
      const long long ci = c / n, cj = c % n;
      for (const auto &[a, b] : ball) {
        const long long p = wrap(ci + a) * n + wrap(cj + b);
        if (covered[static_cast<std::size_t>(p)]) continue;
        covered[static_cast<std::size_t>(p)] = 1;
        --uncovered;
        const long long pi = p / n, pj = p % n;
        for (const auto &[a2, b2] : ball) {
          const long long q = wrap(pi - a2) * n + wrap(pj - b2);
          auto &gq = gain[static_cast<std::size_t>(q)];
          --histogram[gq];
          --gq;
          ++histogram[gq];
        }
      }
    }
  }

  out.count = std::max<long long>(count, 1);
  out.grid_resolution = h;
  out.grid_side = n;
  out.ball_points = static_cast<long long>(ball.size());
  out.uncovered_fraction = static_cast<double>(uncovered) / static_cast<double>(total);
  out.lower_bound = (1.0 - delta) / (static_cast<double>(ball.size()) * h * h);
  return out;
}

} // namespace slowent
