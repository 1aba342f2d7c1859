#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slowent/bigint_matrix.hpp"
#include "slowent/bowen.hpp"
#include "slowent/entropy.hpp"
#include "slowent/norm.hpp"

namespace slowent {

struct EstimatorConfig {
  double eps = 0.02;
  std::vector<double> s_grid{1, 2, 3, 4};
  std::optional<std::vector<double>> cover_s_grid;
  long long samples = 1000000;
  std::uint64_t seed = 42;
  double delta = 0.05;
  std::optional<double> grid_resolution; // absent: chosen per s from the exact ball volume
  EstimatorMethod method = EstimatorMethod::Auto;
};

struct SearchConfig {
  NormFamily family = NormFamily::WeightedBox;
  int budget = 2000;
  int restarts = 4;
};

struct OutputConfig {
  std::string directory = ".";
  std::vector<std::string> formats{"json", "csv"};
};

struct RunConfig {
  int dim = 0;
  int rank = 0;
  std::vector<IntMatrix> generators;
  NormSpec norm = NormSpec::l2(1);
  std::optional<std::vector<double>> gammas;
  EstimatorConfig estimator;
  std::optional<SearchConfig> search;
  OutputConfig output;
  std::string source_text;

  bool wants(const std::string &format) const;
};

/// Strict JSON schema: unknown keys fail with ConfigParse naming the key.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::filesystem::path &path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;
  std::optional<double> eps;
  std::optional<std::string> out;
  std::optional<std::vector<std::string>> formats;
};

void apply_overrides(RunConfig &cfg, const Overrides &o);

} // namespace slowent
