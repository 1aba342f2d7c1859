#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slowent/action.hpp"
#include "slowent/norm.hpp"

namespace slowent {

enum class GammaSource { HaarMultiplicity, UserSupplied };

/// Transversal dimensions, one per non-orbit functional (in spectrum order).
class GammaAssignment {
public:
  /// Absolutely continuous (Haar) case: gamma_i = multiplicity.
  static GammaAssignment haar(const LyapunovSpectrum &spec);
  /// Hyperbolic case; values validated against the multiplicities.
  static GammaAssignment user(const LyapunovSpectrum &spec, std::vector<double> gammas);

  const std::vector<double> &values() const noexcept { return gammas_; }
  GammaSource source() const noexcept { return source_; }

private:
  GammaAssignment(std::vector<double> g, GammaSource s) : gammas_(std::move(g)), source_(s) {}
  std::vector<double> gammas_;
  GammaSource source_;
};

struct FunctionalTerm {
  std::size_t index = 0; // spectrum index
  double gamma = 0.0;
  double a = 0.0; // max of chi_i over the unit ball
  Eigen::VectorXd argmax;
  double product = 0.0;
};

struct SlowEntropyReport {
  std::vector<FunctionalTerm> terms;
  double total = 0.0;
  /// total / 2: with a symmetric ball the k = 1 formula counts both t and -t,
  /// so this is the figure comparable to the metric entropy of one generator.
  double half_total = 0.0;
  NormSpec norm;
};

SlowEntropyReport slow_entropy(const LyapunovSpectrum &spec, const GammaAssignment &gammas,
                               const NormSpec &norm);

/// Entropy of the single element alpha(t): sum of gamma_i chi_i(t) over the
/// positive exponents.
double pesin_entropy(const LyapunovSpectrum &spec, const GammaAssignment &gammas,
                     const Eigen::VectorXd &t);

struct GammaValidation {
  int trials = 0;
  bool sum_passed = false;  // sum gamma_i chi_i(t) == 0
  double sum_worst = 0.0;   // worst |residual| / |t|
  bool abs_passed = false;  // sum gamma_i |chi_i(t)| == 2 h(t)
  double abs_worst = 0.0;
};

GammaValidation validate_gammas(const LyapunovSpectrum &spec, const GammaAssignment &gammas,
                                int trial_count);

enum class NormFamily { WeightedBox, Ellipsoid };

std::string_view norm_family_name(NormFamily f) noexcept;

struct SearchTraceEntry {
  int iteration = 0;
  int restart = 0;
  std::vector<double> parameters; // log-parameters of the candidate
  double value = 0.0;
  double volume = 0.0;
};

struct NormSearchResult {
  NormSpec best_norm;
  double best_value = 0.0;
  double initial_value = 0.0;
  std::vector<SearchTraceEntry> trace;
  NormFamily family = NormFamily::WeightedBox;
  bool converged = false; // false means BudgetExhausted
  int iterations = 0;
};

/// Pattern search over a unit-volume norm family. Returns the best norm found
/// (an upper bound on the infimum over all unit-volume norms). When some
/// restart runs out of budget before the step falls below 1e-8 the result is
/// still returned with converged = false.
NormSearchResult minimize_over_norm_family(const LyapunovSpectrum &spec,
                                           const GammaAssignment &gammas, NormFamily family,
                                           int budget, std::uint64_t seed, int restarts = 4);

/// The unit-volume member of a family for the given log-parameters.
NormSpec family_member(NormFamily family, int rank, const std::vector<double> &log_params);

} // namespace slowent
