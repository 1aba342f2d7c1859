#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slowent/bigint_matrix.hpp"

namespace slowent {

/// A Z^k action on the d-torus by commuting integer matrices of determinant
/// +-1. Only obtainable through verify_action, so every instance satisfies
/// its invariants.
class IntegerMatrixAction {
public:
  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(generators_.size()); }
  const std::vector<IntMatrix> &generators() const noexcept { return generators_; }

  /// Same action generated by the inverse matrices.
  IntegerMatrixAction inverse() const;

  /// Conjugate every generator by a unimodular P: P A P^{-1}.
  IntegerMatrixAction conjugate(const IntMatrix &p) const;

private:
  friend IntegerMatrixAction verify_action(std::vector<IntMatrix> matrices);
  IntegerMatrixAction(int dim, std::vector<IntMatrix> generators)
      : dim_(dim), generators_(std::move(generators)) {}

  int dim_ = 0;
  std::vector<IntMatrix> generators_;
};

/// Checks squareness, unimodularity and pairwise commutation exactly.
/// Throws NonUnimodular, NonCommuting ("(i,j)") or DimensionMismatch.
IntegerMatrixAction verify_action(std::vector<IntMatrix> matrices);

struct LyapunovFunctional {
  Eigen::VectorXd coeffs; // chi(t) = coeffs . t
  int multiplicity = 1;   // real dimension of the Lyapunov subspace
  bool orbit_direction = false;
};

/// Distinct joint Lyapunov functionals of an action. The constructor checks
/// the per-functional invariants only; the global ones (trace identity,
/// multiplicity sum, separation) are reported by invariant_violations() so
/// that hand-built spectra can still be represented.
class LyapunovSpectrum {
public:
  LyapunovSpectrum(std::vector<LyapunovFunctional> functionals, int dim, int rank,
                   double grouping_tolerance = 1e-8);

  const std::vector<LyapunovFunctional> &functionals() const noexcept { return functionals_; }
  const LyapunovFunctional &operator[](std::size_t i) const { return functionals_.at(i); }
  std::size_t size() const noexcept { return functionals_.size(); }
  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  double grouping_tolerance() const noexcept { return grouping_tolerance_; }

  bool suspended() const noexcept;
  /// Indices of the functionals that are not orbit-direction zeros.
  std::vector<std::size_t> non_orbit_indices() const;
  int total_multiplicity() const noexcept;

  std::vector<std::string> invariant_violations() const;

private:
  std::vector<LyapunovFunctional> functionals_;
  int dim_;
  int rank_;
  double grouping_tolerance_;
};

/// Spectrum together with an orthonormal basis (d x multiplicity) of each
/// Lyapunov subspace, in spectrum order. Orbit functionals are never present
/// here since decomposition works on the Z^k action itself.
struct LyapunovDecomposition {
  LyapunovSpectrum spectrum;
  std::vector<Eigen::MatrixXd> subspaces;
  double invariance_residual = 0.0; // worst relative residual accepted
  int attempts = 0;
};

LyapunovDecomposition decompose(const IntegerMatrixAction &action, double tol = 1e-8);

LyapunovSpectrum compute_spectrum(const IntegerMatrixAction &action, double tol = 1e-8);

/// chi_i(t) for each functional, in spectrum order.
Eigen::VectorXd evaluate_exponent(const LyapunovSpectrum &spec, const Eigen::VectorXd &t);

/// Appends the k orbit-direction zero exponents of the R^k suspension.
LyapunovSpectrum suspend(const LyapunovSpectrum &spec);

} // namespace slowent
