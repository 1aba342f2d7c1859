#pragma once

#include <Eigen/Dense>

namespace slowent {

/// Radical inverse of `index` in `base`.
double radical_inverse(unsigned long index, unsigned base);

/// Deterministic quasi-uniform direction on the unit sphere of R^k: the
/// index-th Halton point pushed through the normal quantile and normalized.
/// Returns the zero vector when the Halton point maps to the origin.
Eigen::VectorXd halton_sphere_point(unsigned long index, int k);

} // namespace slowent
