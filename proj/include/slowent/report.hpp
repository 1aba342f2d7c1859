#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slowent/chambers.hpp"

namespace slowent {

struct ActionSection {
  int dim = 0;
  int rank = 0;
  std::vector<long long> determinants;
  bool operator==(const ActionSection &) const = default;
};

struct FunctionalRecord {
  std::vector<double> coeffs;
  int multiplicity = 1;
  bool orbit = false;
  bool operator==(const FunctionalRecord &) const = default;
};

struct SpectrumSection {
  std::vector<FunctionalRecord> functionals;
  double invariance_residual = 0.0;
  int attempts = 0;
  std::vector<std::string> invariant_violations;
  bool operator==(const SpectrumSection &) const = default;
};

struct ChamberRecord {
  std::vector<int> signs;
  std::vector<double> representative;
  bool operator==(const ChamberRecord &) const = default;
};

struct ChambersSection {
  std::vector<std::vector<double>> normals;
  std::vector<ChamberRecord> chambers;
  std::vector<double> generic_element;
  bool operator==(const ChambersSection &) const = default;
};

struct TermRecord {
  std::size_t index = 0;
  double gamma = 0.0;
  double a = 0.0;
  double product = 0.0;
  std::vector<double> argmax;
  bool operator==(const TermRecord &) const = default;
};

struct PesinRecord {
  std::vector<int> signs;
  std::vector<double> t;
  double value = 0.0;
  bool operator==(const PesinRecord &) const = default;
};

struct EntropySection {
  std::string norm;
  std::string gamma_source;
  std::vector<double> gammas;
  std::vector<TermRecord> terms;
  double total = 0.0;
  double half_total = 0.0;
  std::vector<PesinRecord> pesin;
  int identity_trials = 0;
  bool sum_identity_passed = false;
  double sum_identity_residual = 0.0;
  bool abs_identity_passed = false;
  double abs_identity_residual = 0.0;
  bool operator==(const EntropySection &) const = default;
};

struct BowenRecord {
  double s = 0.0;
  double volume = 0.0;
  double stderr_ = 0.0;
  std::string method;
  double neg_log_volume = 0.0;
  std::size_t constraints = 0;
  long long samples = 0;
  long long accepted = 0;
  bool operator==(const BowenRecord &) const = default;
};

struct FitRecord {
  std::vector<double> s_grid;
  std::vector<double> logvols;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double loo_min = 0.0;
  double loo_max = 0.0;
  int dropped_leading = 0;
  bool operator==(const FitRecord &) const = default;
};

struct EstimationSection {
  double eps = 0.0;
  std::vector<BowenRecord> rows;
  FitRecord fit;
  double formula_delta = 0.0;
  double relative_gap = 0.0;
  bool operator==(const EstimationSection &) const = default;
};

struct CoverRecord {
  double s = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  long long count = 0;
  double grid_resolution = 0.0;
  long long grid_side = 0;
  long long ball_points = 0;
  double uncovered_fraction = 0.0;
  double lower_bound = 0.0;
  bool vacuous = false;
  bool operator==(const CoverRecord &) const = default;
};

struct CoverSection {
  std::vector<CoverRecord> rows;
  bool operator==(const CoverSection &) const = default;
};

struct SearchSection {
  std::string family;
  std::string best_norm;
  std::vector<double> best_parameters; // box weights, or Q row-major
  double best_value = 0.0;
  double initial_value = 0.0;
  bool converged = false;
  int iterations = 0;
  std::size_t trace_length = 0;
  bool operator==(const SearchSection &) const = default;
};

/// Excluded from determinism comparisons.
struct Provenance {
  std::string config_hash;
  std::string version;
  double wall_time_seconds = 0.0;
  bool operator==(const Provenance &) const = default;
};

struct Report {
  std::string command;
  std::optional<ActionSection> action;
  std::optional<SpectrumSection> spectrum;
  std::optional<ChambersSection> chambers;
  std::optional<EntropySection> entropy;
  std::optional<EstimationSection> estimation;
  std::optional<CoverSection> cover;
  std::optional<SearchSection> norm_search;
  std::vector<std::string> skipped; // "section: reason"
  Provenance provenance;
  bool operator==(const Report &) const = default;
};

nlohmann::json report_to_json(const Report &r);
Report report_from_json(const nlohmann::json &j);

/// 17 significant digits, '.' decimal point.
std::string format_real(double x);

std::string spectrum_csv(const SpectrumSection &s);
std::string entropy_csv(const EntropySection &e);
std::string bowen_csv(const EstimationSection &e);
std::string cover_csv(const CoverSection &c);

/// Deterministic SVG of a rank-2 arrangement. Throws RankNotTwo.
std::string render_svg_chambers(const HyperplaneArrangement &arr, const std::vector<Chamber> &chambers);
void emit_svg_chambers(const HyperplaneArrangement &arr, const std::vector<Chamber> &chambers,
                       const std::filesystem::path &path);

/// FNV-1a 64-bit, hex.
std::string content_hash(const std::string &text);

} // namespace slowent
