#include "slowent/simplex.hpp"

#include <cmath>
#include <limits>

#include "slowent/error.hpp"

namespace slowent {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis)
      : t_(std::move(t)), basis_(std::move(basis)) {}

  // Last row holds reduced costs of the objective being *minimized*; last
  // column holds the right-hand side.
  LpStatus run(int allowed_cols) {
    const int m = static_cast<int>(t_.rows()) - 1;
    const int rhs = static_cast<int>(t_.cols()) - 1;
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(m, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t_(i, enter) > kPivotTol) {
          const double ratio = t_(i, rhs) / t_(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::LinearProgramFailure, "simplex iteration limit");
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i != row && t_(i, col) != 0.0) {
        t_.row(i) -= t_(i, col) * t_.row(row);
      }
    }
    basis_[row] = col;
  }

  Eigen::MatrixXd &table() { return t_; }
  std::vector<int> &basis() { return basis_; }

private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

} // namespace

LpSolution maximize(const LinearProgram &lp) {
  const int rows = static_cast<int>(lp.A.rows());
  const int orig = static_cast<int>(lp.A.cols());
  if (lp.b.size() != rows || static_cast<int>(lp.relations.size()) != rows ||
      lp.objective.size() != orig) {
    throw Error(ErrorCode::DimensionMismatch, "linear program shape");
  }

  // Split free variables into positive and negative parts.
  std::vector<int> neg_col(orig, -1);
  int n = orig;
  for (int j = 0; j < orig; ++j) {
    if (!lp.free_vars.empty() && lp.free_vars[j]) neg_col[j] = n++;
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < orig; ++j) {
    A.col(j) = lp.A.col(j);
    c(j) = lp.objective(j);
    if (neg_col[j] >= 0) {
      A.col(neg_col[j]) = -lp.A.col(j);
      c(neg_col[j]) = -lp.objective(j);
    }
  }
  Eigen::VectorXd b = lp.b;
  std::vector<Relation> rel = lp.relations;
  for (int i = 0; i < rows; ++i) {
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
      if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
      else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
    }
  }

  int slack_count = 0;
  int art_count = 0;
  for (auto r : rel) {
    if (r != Relation::Equal) ++slack_count;
    if (r != Relation::LessEq) ++art_count;
  }
  const int total = n + slack_count + art_count;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, total + 1);
  std::vector<int> basis(rows);
  int s = n;
  int a = n + slack_count;
  for (int i = 0; i < rows; ++i) {
    t.row(i).head(n) = A.row(i);
    t(i, total) = b(i);
    if (rel[i] == Relation::LessEq) {
      t(i, s) = 1.0;
      basis[i] = s++;
    } else {
      if (rel[i] == Relation::GreaterEq) t(i, s++) = -1.0;
      t(i, a) = 1.0;
      basis[i] = a++;
    }
  }

  Tableau tab(std::move(t), std::move(basis));
  auto &T = tab.table();

  if (art_count > 0) {
    // Phase 1: minimize the sum of artificials.
    T.row(rows).segment(n + slack_count, art_count).setOnes();
    for (int i = 0; i < rows; ++i) {
      if (tab.basis()[i] >= n + slack_count) T.row(rows) -= T.row(i);
    }
    tab.run(total);
    const double scale = 1.0 + b.cwiseAbs().maxCoeff();
    if (-T(rows, total) > 1e-9 * scale) return {LpStatus::Infeasible, {}, 0.0};
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < rows; ++i) {
      if (tab.basis()[i] >= n + slack_count) {
        for (int j = 0; j < n + slack_count; ++j) {
          if (std::abs(T(i, j)) > 1e-9) {
            tab.pivot(i, j);
            break;
          }
        }
      }
    }
    for (int i = 0; i < rows; ++i) {
      if (tab.basis()[i] >= n + slack_count) {
        T.row(i).setZero(); // redundant equality row
      }
    }
  }

  // Phase 2 on the original objective (as minimization of -c).
  T.row(rows).setZero();
  T.row(rows).head(n) = -c.transpose();
  for (int i = 0; i < rows; ++i) {
    const int bj = tab.basis()[i];
    if (bj < n && T(rows, bj) != 0.0) T.row(rows) -= T(rows, bj) * T.row(i);
  }
  const LpStatus st = tab.run(n + slack_count);
  if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, {}, 0.0};

  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < rows; ++i) {
    if (tab.basis()[i] < n) y(tab.basis()[i]) = T(i, total);
  }
  LpSolution out;
  out.status = LpStatus::Optimal;
  out.x = Eigen::VectorXd::Zero(orig);
  for (int j = 0; j < orig; ++j) {
    out.x(j) = y(j) - (neg_col[j] >= 0 ? y(neg_col[j]) : 0.0);
  }
  out.value = lp.objective.dot(out.x);
  return out;
}

} // namespace slowent
