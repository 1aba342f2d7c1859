#pragma once

#include <vector>

#include <Eigen/Dense>

namespace slowent {

/// Dense two-phase simplex for the small LPs that show up here: chamber
/// feasibility, polytope gauges and bounding boxes of Bowen bodies. Sizes are
/// a few hundred rows at most; Bland's rule keeps it finite on degenerate
/// vertices.
enum class Relation { LessEq, Equal, GreaterEq };

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearProgram {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<Relation> relations; // one per row of A
  Eigen::VectorXd objective;       // maximized
  std::vector<bool> free_vars;     // empty means every variable is >= 0
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

LpSolution maximize(const LinearProgram &lp);

} // namespace slowent
