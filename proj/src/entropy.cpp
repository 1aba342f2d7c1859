#include "slowent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "slowent/error.hpp"
#include "slowent/sampling.hpp"

namespace slowent {

namespace {

void check_gammas(const LyapunovSpectrum &spec, const GammaAssignment &gammas) {
  const auto idx = spec.non_orbit_indices();
  if (gammas.values().size() != idx.size()) {
    std::ostringstream os;
    os << gammas.values().size() << " gammas for " << idx.size() << " non-orbit functionals";
    throw Error(ErrorCode::GammaMismatch, os.str());
  }
}

constexpr double kStepTol = 1e-8;

} // namespace

GammaAssignment GammaAssignment::haar(const LyapunovSpectrum &spec) {
  std::vector<double> g;
  for (auto i : spec.non_orbit_indices()) g.push_back(spec[i].multiplicity);
  return {std::move(g), GammaSource::HaarMultiplicity};
}

GammaAssignment GammaAssignment::user(const LyapunovSpectrum &spec, std::vector<double> gammas) {
  const auto idx = spec.non_orbit_indices();
  if (gammas.size() != idx.size()) {
    std::ostringstream os;
    os << gammas.size() << " gammas for " << idx.size() << " non-orbit functionals";
    throw Error(ErrorCode::GammaMismatch, os.str());
  }
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double cap = spec[idx[i]].multiplicity + 1e-12;
    if (!(gammas[i] >= 0.0) || gammas[i] > cap) {
      std::ostringstream os;
      os << "gamma " << i << " = " << gammas[i] << " outside [0, " << spec[idx[i]].multiplicity << "]";
      throw Error(ErrorCode::GammaMismatch, os.str());
    }
  }
  return {std::move(gammas), GammaSource::UserSupplied};
}

SlowEntropyReport slow_entropy(const LyapunovSpectrum &spec, const GammaAssignment &gammas,
                               const NormSpec &norm) {
  check_gammas(spec, gammas);
  if (norm.rank() != spec.rank()) {
    throw Error(ErrorCode::DimensionMismatch, "norm rank differs from action rank");
  }
  SlowEntropyReport report{{}, 0.0, 0.0, norm};
  const auto idx = spec.non_orbit_indices();
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const auto dm = dual_max(norm, spec[idx[n]].coeffs);
    FunctionalTerm term{idx[n], gammas.values()[n], dm.value, dm.argmax, 0.0};
    term.product = term.gamma * term.a;
    report.total += term.product;
    report.terms.push_back(std::move(term));
  }
  report.half_total = report.total / 2.0;
  return report;
}

double pesin_entropy(const LyapunovSpectrum &spec, const GammaAssignment &gammas,
                     const Eigen::VectorXd &t) {
  check_gammas(spec, gammas);
  const Eigen::VectorXd chi = evaluate_exponent(spec, t);
  if (t.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "t must be nonzero");
  const auto idx = spec.non_orbit_indices();
  double h = 0.0;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const double x = chi(static_cast<Eigen::Index>(idx[n]));
    if (x > 0) h += gammas.values()[n] * x;
  }
  return h;
}

GammaValidation validate_gammas(const LyapunovSpectrum &spec, const GammaAssignment &gammas,
                                int trial_count) {
  check_gammas(spec, gammas);
  if (trial_count < 1) throw Error(ErrorCode::InvalidArgument, "trial_count must be >= 1");
  const auto idx = spec.non_orbit_indices();
  GammaValidation out;
  unsigned long index = 1;
  while (out.trials < trial_count) {
    const Eigen::VectorXd t = halton_sphere_point(index++, spec.rank());
    if (t.isZero(0.0)) continue;
    const Eigen::VectorXd chi = evaluate_exponent(spec, t);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t n = 0; n < idx.size(); ++n) {
      const double x = chi(static_cast<Eigen::Index>(idx[n]));
      sum += gammas.values()[n] * x;
      abs_sum += gammas.values()[n] * std::abs(x);
    }
    const double tn = t.norm();
    out.sum_worst = std::max(out.sum_worst, std::abs(sum) / tn);
    out.abs_worst = std::max(out.abs_worst,
                             std::abs(abs_sum - 2.0 * pesin_entropy(spec, gammas, t)) / tn);
    ++out.trials;
  }
  out.sum_passed = out.sum_worst < 1e-9;
  out.abs_passed = out.abs_worst < 1e-9;
  return out;
}

// ---------------------------------------------------------------------------

std::string_view norm_family_name(NormFamily f) noexcept {
  return f == NormFamily::WeightedBox ? "weighted_box" : "ellipsoid";
}

namespace {

int parameter_count(NormFamily family, int k) {
  return family == NormFamily::WeightedBox ? k : k + k * (k - 1) / 2;
}

} // namespace

NormSpec family_member(NormFamily family, int k, const std::vector<double> &p) {
  if (static_cast<int>(p.size()) != parameter_count(family, k)) {
    throw Error(ErrorCode::DimensionMismatch, "wrong number of family parameters");
  }
  if (family == NormFamily::WeightedBox) {
    Eigen::VectorXd w(k);
    double log_sum = 0.0;
    for (int j = 0; j < k; ++j) log_sum += p[static_cast<std::size_t>(j)];
    // 2^k prod w = 1  <=>  sum log w = -k log 2
    const double shift = (-k * std::log(2.0) - log_sum) / k;
    for (int j = 0; j < k; ++j) w(j) = std::exp(p[static_cast<std::size_t>(j)] + shift);
    return NormSpec::weighted_box(w);
  }
  // Q = L L' with log-diagonal and free strictly lower part.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
  std::size_t pos = 0;
  for (int i = 0; i < k; ++i) L(i, i) = std::exp(p[pos++]);
  for (int i = 1; i < k; ++i)
    for (int j = 0; j < i; ++j) L(i, j) = p[pos++];
  Eigen::MatrixXd Q = L * L.transpose();
  Q = 0.5 * (Q + Q.transpose()).eval();
  const double vol = unit_ball_volume(NormSpec::ellipsoid(Q));
  Q *= std::pow(vol, 2.0 / k);
  Q = 0.5 * (Q + Q.transpose()).eval();
  return NormSpec::ellipsoid(Q);
}

NormSearchResult minimize_over_norm_family(const LyapunovSpectrum &spec,
                                           const GammaAssignment &gammas, NormFamily family,
                                           int budget, std::uint64_t seed, int restarts) {
  check_gammas(spec, gammas);
  if (budget < 0 || restarts < 1) throw Error(ErrorCode::InvalidArgument, "budget/restarts");
  const int k = spec.rank();
  const int np = parameter_count(family, k);
  auto objective = [&](const std::vector<double> &x) {
    return slow_entropy(spec, gammas, family_member(family, k, x)).total;
  };

  NormSearchResult result{family_member(family, k, std::vector<double>(np, 0.0)), 0.0, 0.0, {},
                          family, true, 0};
  result.best_value = result.initial_value = objective(std::vector<double>(np, 0.0));
  std::vector<double> best_x(np, 0.0);

  // Restarts are independent; the first starts at the canonical member.
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(np, 0.0);
    if (r > 0) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal(0.0, 0.5);
      for (auto &v : x) v = normal(rng);
    }
    double fx = objective(x);
    double step = 0.5;
    int it = 0;
    for (; it < budget && step >= kStepTol; ++it) {
      std::vector<double> best_trial;
      double best_f = fx;
      for (int j = 0; j < np; ++j) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> y = x;
          y[static_cast<std::size_t>(j)] += dir * step;
          const double fy = objective(y);
          if (fy < best_f) {
            best_f = fy;
            best_trial = std::move(y);
          }
        }
      }
      if (!best_trial.empty()) {
        x = std::move(best_trial);
        fx = best_f;
      } else {
        step /= 2.0;
      }
      result.trace.push_back(
          {it, r, x, fx, unit_ball_volume(family_member(family, k, x))});
    }
    result.iterations += it;
    if (step >= kStepTol) result.converged = false;
    if (fx < result.best_value) {
      result.best_value = fx;
      best_x = x;
    }
  }
  result.best_norm = family_member(family, k, best_x);
  result.best_value = objective(best_x);
  return result;
}

} // namespace slowent
