#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slowent/action.hpp"
#include "slowent/entropy.hpp"
#include "slowent/norm.hpp"

namespace slowent {

struct BowenConstraint {
  std::vector<long long> t; // lattice point of the window
  Eigen::MatrixXd matrix;   // M(t), integer valued and exactly representable
};

/// {v in R^d : |M(t) v|_inf <= eps for every lattice t with p(t) <= s},
/// the Bowen ball at the base point 0 in the linear chart.
struct BowenBody {
  std::vector<BowenConstraint> constraints;
  double s = 0.0;
  double eps = 0.0;
  NormSpec norm_used = NormSpec::linf(1);
  int dim = 0;

  bool contains(const Eigen::VectorXd &v, double rel_tol = 0.0) const;
  /// All constraint rows stacked: |R v|_inf <= eps.
  Eigen::MatrixXd stacked_rows() const;
};

/// Enumerates the window and forms the exact products M(t). Accepts
/// s >= 0 and eps in (0, 1/4]. Throws WraparoundRisk when one generator step
/// can move an eps-close pair by 1/2 or more, or when some entry of M(t)
/// exceeds 2^53 (no longer exact in double precision).
BowenBody bowen_constraints(const IntegerMatrixAction &action, const NormSpec &norm, double s,
                            double eps);

/// Lemma-type bracket inner <= body <= outer, in the joint eigenbasis.
/// Half-widths per basis column; m = d; chart constants are 1.
struct SandwichRectangles {
  Eigen::MatrixXd basis;  // d x d, columns grouped by Lyapunov subspace
  Eigen::VectorXd a;      // max of chi over the unit ball, per column
  Eigen::VectorXd inner;  // half-widths
  Eigen::VectorXd outer;  // half-widths
  double s = 0.0;
  double eps = 0.0;
  double slack = 0.0;
};

/// Largest slack accepted by sandwich_rectangles: min(1, min_{a_i > 0} a_i) / (100 d).
double max_valid_slack(const LyapunovDecomposition &decomp, const NormSpec &norm);

/// inner_i = eps e^{-(a_i + 2 slack) s} / (m + 1),
/// outer_i = (m + 1) eps e^{-(a_i - 2 slack) s} (no growth when a_i = 0).
/// Throws SlackTooLarge.
SandwichRectangles sandwich_rectangles(const LyapunovDecomposition &decomp,
                                       const NormSpec &norm, double s, double eps,
                                       double slack);

struct SandwichCheck {
  int inner_vertices = 0;
  int inner_violations = 0;
  int boundary_samples = 0;
  int outer_violations = 0;
  bool passed() const { return inner_violations == 0 && outer_violations == 0; }
};

/// Tests every inner vertex against all constraints and boundary points of
/// the body (ray shooting from 0) against the outer half-widths.
SandwichCheck verify_sandwich(const BowenBody &body, const SandwichRectangles &box,
                              int boundary_samples, std::uint64_t seed);

enum class VolumeMethod { ExactPolygon2D, MonteCarlo };

std::string_view volume_method_name(VolumeMethod m) noexcept;

struct VolumeEstimate {
  double value = 0.0;
  VolumeMethod method = VolumeMethod::ExactPolygon2D;
  long long samples = 0;
  long long accepted = 0;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;
  Eigen::VectorXd bounding_box;  // half-widths of the sampling region (MC)
  bool box_widened = false;      // outer rectangle did not contain the body
  std::vector<double> factor_volumes; // exact: one per planar factor
};

/// Exact area (or product of areas) by convex polygon clipping. Requires
/// d = 2 or a coordinate block structure with blocks of size <= 2.
/// Throws NotPlanarFactorizable.
VolumeEstimate exact_volume_2d(const BowenBody &body);

/// Uniform sampling in the (possibly widened) outer rectangle. Batches of
/// fixed size, each seeded from (seed, batch index). Throws ZeroAcceptance
/// with a 95% upper bound in the message.
VolumeEstimate mc_volume(const BowenBody &body, const SandwichRectangles &box,
                         long long samples, std::uint64_t seed);

enum class EstimatorMethod { Auto, Exact, MonteCarlo };

struct SlopeFit {
  std::vector<double> s_grid; // points actually used in the fit
  std::vector<double> logvols;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double loo_min = 0.0;
  double loo_max = 0.0;
  int dropped_leading = 0; // small-s points removed by the transient guard
};

/// Least squares of y on x with leave-one-out slope range; drops the leading
/// point while the range exceeds 20% of |slope| and more than 3 points remain.
SlopeFit fit_slope(const std::vector<double> &s, const std::vector<double> &logvols);

struct BowenRow {
  double s = 0.0;
  VolumeEstimate volume;
  std::size_t constraints = 0;
};

struct LocalEntropyEstimate {
  std::vector<BowenRow> rows; // full grid, including dropped points
  SlopeFit fit;
  double formula_delta = 0.0;
  double relative_gap = 0.0; // (slope - formula) / formula, 0 if formula is 0
};

/// Fits -log vol(B_s) against s. Base point is 0 (irrelevant for linear
/// actions with Haar measure).
LocalEntropyEstimate estimate_local_slow_entropy(const IntegerMatrixAction &action,
                                                 const NormSpec &norm,
                                                 const std::optional<std::vector<double>> &gammas,
                                                 double eps, const std::vector<double> &s_grid,
                                                 long long samples, std::uint64_t seed,
                                                 EstimatorMethod method = EstimatorMethod::Auto);

struct CoverEstimate {
  double s = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  long long count = 0;
  double grid_resolution = 0.0; // actual spacing 1/n
  long long grid_side = 0;
  long long ball_points = 0;    // grid points in one Bowen ball
  double uncovered_fraction = 0.0;
  double lower_bound = 0.0;     // (1 - delta) / (ball_points h^2)
  bool vacuous = false;         // delta >= 1
};

/// Greedy cover of the uniform grid on T^2 by Bowen balls of the torus
/// sup metric under d_F. Requires grid_resolution <= eps / 4 (GridTooCoarse).
CoverEstimate covering_number(const IntegerMatrixAction &action, const NormSpec &norm, double s,
                              double eps, double delta, double grid_resolution);

/// Side n of the n x n covering grid for a spacing; throws InvalidArgument
/// above 2^26 points.
long long cover_grid_side(double grid_resolution);

/// Spacing giving about points_per_ball grid points per Bowen ball of the
/// given volume, capped at eps / 4.
double auto_grid_resolution(double ball_volume, double eps, double points_per_ball = 24.0);

} // namespace slowent
