#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace slowent {

enum class NormKind { L1, L2, LInf, WeightedBox, Polytope, Ellipsoid };

std::string_view norm_kind_name(NormKind kind) noexcept;

/// A norm p on R^k drawn from a closed family with computable unit-ball
/// volume and support function. Constructed through the named factories,
/// which enforce the family invariants.
class NormSpec {
public:
  static NormSpec l1(int rank);
  static NormSpec l2(int rank);
  static NormSpec linf(int rank);
  /// Unit ball is the product of [-w_j, w_j].
  static NormSpec weighted_box(Eigen::VectorXd weights);
  /// Rows are points of a centrally symmetric body; the ball is their hull.
  static NormSpec polytope(Eigen::MatrixXd vertices);
  /// Unit ball {t : t' Q t <= 1}.
  static NormSpec ellipsoid(Eigen::MatrixXd q);

  NormKind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }

  const Eigen::VectorXd &weights() const noexcept { return weights_; }
  const Eigen::MatrixXd &vertices() const noexcept { return vertices_; }
  const Eigen::MatrixXd &matrix() const noexcept { return matrix_; }
  /// Ellipsoid only: Q^{-1}.
  const Eigen::MatrixXd &inverse_matrix() const noexcept { return inverse_; }

  /// Same norm with the unit ball scaled by factor (p(t) / factor).
  NormSpec scaled(double factor) const;

  std::string describe() const;

private:
  NormSpec(NormKind kind, int rank) : kind_(kind), rank_(rank) {}

  NormKind kind_;
  int rank_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd inverse_;
};

double norm_value(const NormSpec &norm, const Eigen::VectorXd &t);

struct DualMax {
  double value = 0.0;
  Eigen::VectorXd argmax;
};

/// Support function of the unit ball at c (the dual norm). Among several
/// maximizers the one of least Euclidean length is returned.
DualMax dual_max(const NormSpec &norm, const Eigen::VectorXd &c);

double unit_ball_volume(const NormSpec &norm);

/// Facet (a . t <= b, |a| = 1) of the hull of a point set.
struct Facet {
  Eigen::VectorXd normal;
  double offset = 0.0;
  std::vector<int> members;
};

/// Facets of the convex hull of the rows of `points` (full-dimensional).
std::vector<Facet> hull_facets(const Eigen::MatrixXd &points);

/// Volume of the convex hull of the rows of `points`.
double hull_volume(const Eigen::MatrixXd &points);

/// Polytope support function computed as an LP over the halfspace
/// description; independent of the vertex formula used by dual_max.
double polytope_support_lp(const NormSpec &polytope, const Eigen::VectorXd &c);

} // namespace slowent
