#pragma once

#include <vector>

#include <Eigen/Dense>

#include "slowent/action.hpp"
#include "slowent/norm.hpp"

namespace slowent {

/// Lyapunov hyperplanes ker(chi_i), one unit normal per projective class.
/// Normals are sign-normalized: the first nonzero coordinate is positive.
struct HyperplaneArrangement {
  int rank = 0;
  std::vector<Eigen::VectorXd> normals;
  /// For each normal, the spectrum indices whose kernel it is (empty for
  /// arrangements built directly from normals).
  std::vector<std::vector<std::size_t>> source_indices;
};

struct Chamber {
  std::vector<int> sign_vector; // entries +1 / -1, one per normal
  Eigen::VectorXd representative;
};

/// Builds an arrangement from raw normals (normalized and deduplicated).
HyperplaneArrangement make_arrangement(int rank, const std::vector<Eigen::VectorXd> &normals);

HyperplaneArrangement lyapunov_hyperplanes(const LyapunovSpectrum &spec);

/// All Weyl chambers. Exact for rank <= 2; rank 3 and 4 use LP feasibility
/// over incrementally extended sign vectors; rank > 4 is rejected.
std::vector<Chamber> enumerate_chambers(const HyperplaneArrangement &arr);

struct Classification {
  bool regular = false;
  std::vector<int> sign_vector;                  // Regular only
  std::vector<std::size_t> singular_hyperplanes; // Singular only
};

/// Regular iff |n_j . t| > tol |t| for every hyperplane normal n_j.
Classification classify_element(const LyapunovSpectrum &spec, const Eigen::VectorXd &t,
                                double tol = 1e-6);

/// min(min_i |chi_i(t)|, min_{i != j} |chi_i(t) - chi_j(t)|) over nonzero
/// non-orbit functionals.
double separation_score(const LyapunovSpectrum &spec, const Eigen::VectorXd &t);

/// Element of the norm ball maximizing separation_score. Deterministic.
/// Throws NoSeparatingElement when the best score stays below 1e-9.
Eigen::VectorXd pick_generic_element(const LyapunovSpectrum &spec, const NormSpec &norm,
                                     int samples = 256);

} // namespace slowent
