#include "slowent/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "slowent/error.hpp"

namespace slowent {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &msg) { throw Error(ErrorCode::ConfigParse, msg); }

void check_keys(const json &obj, std::initializer_list<std::string_view> allowed,
                const std::string &where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto &[key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T> T get(const json &obj, const char *key, const std::string &where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &) {
    fail("missing or invalid '" + std::string(key) + "' in " + where);
  }
}

double real(const json &v, const std::string &what) {
  if (!v.is_number()) fail(what + " must be a number");
  return v.get<double>();
}

std::vector<double> real_list(const json &v, const std::string &what) {
  if (!v.is_array()) fail(what + " must be an array");
  std::vector<double> out;
  for (const auto &x : v) out.push_back(real(x, what));
  return out;
}

Eigen::MatrixXd real_matrix(const json &v, const std::string &what) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) fail(what + " must be a nested array");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = real_list(v[static_cast<std::size_t>(i)], what);
    if (static_cast<Eigen::Index>(row.size()) != cols) fail(what + " rows differ in length");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

IntMatrix generator(const json &v, int d, std::size_t index) {
  const std::string what = "generator " + std::to_string(index);
  std::vector<json> flat;
  if (!v.is_array()) fail(what + " must be an array");
  if (!v.empty() && v[0].is_array()) {
    if (static_cast<int>(v.size()) != d) {
      throw Error(ErrorCode::DimensionMismatch, what + " has " + std::to_string(v.size()) + " rows");
    }
    for (const auto &row : v) {
      if (!row.is_array() || static_cast<int>(row.size()) != d) {
        throw Error(ErrorCode::DimensionMismatch, what + " is not " + std::to_string(d) + "x" + std::to_string(d));
      }
      for (const auto &x : row) flat.push_back(x);
    }
  } else {
    if (static_cast<int>(v.size()) != d * d) {
      throw Error(ErrorCode::DimensionMismatch, what + " needs " + std::to_string(d * d) + " entries");
    }
    flat.assign(v.begin(), v.end());
  }
  IntMatrix m(d, d);
  for (int i = 0; i < d * d; ++i) {
    const json &x = flat[static_cast<std::size_t>(i)];
    if (!x.is_number_integer()) fail(what + " entries must be integers");
    m(i / d, i % d) = x.get<std::int64_t>();
  }
  return m;
}

NormSpec parse_norm(const json &v, int rank) {
  check_keys(v, {"kind", "weights", "vertices", "matrix"}, "norm");
  const auto kind = get<std::string>(v, "kind", "norm");
  auto only = [&](std::initializer_list<std::string_view> keys) {
    std::vector<std::string_view> allowed{"kind"};
    allowed.insert(allowed.end(), keys);
    for (const auto &[key, _] : v.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail("key '" + key + "' does not apply to norm kind " + kind);
      }
    }
  };
  if (kind == "l1") { only({}); return NormSpec::l1(rank); }
  if (kind == "l2" || kind == "standard") { only({}); return NormSpec::l2(rank); }
  if (kind == "linf") { only({}); return NormSpec::linf(rank); }
  if (kind == "weighted_box") {
    only({"weights"});
    const auto w = real_list(v.at("weights"), "norm.weights");
    return NormSpec::weighted_box(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
  }
  if (kind == "polytope") {
    only({"vertices"});
    if (!v.contains("vertices")) fail("missing 'vertices' in norm");
    return NormSpec::polytope(real_matrix(v.at("vertices"), "norm.vertices"));
  }
  if (kind == "ellipsoid") {
    only({"matrix"});
    if (!v.contains("matrix")) fail("missing 'matrix' in norm");
    return NormSpec::ellipsoid(real_matrix(v.at("matrix"), "norm.matrix"));
  }
  fail("unknown norm kind '" + kind + "'");
}

std::vector<std::string> parse_formats(const std::vector<std::string> &formats) {
  static const std::set<std::string> known{"json", "csv", "svg"};
  for (const auto &f : formats) {
    if (!known.count(f)) fail("unknown output format '" + f + "'");
  }
  return formats;
}

} // namespace

bool RunConfig::wants(const std::string &format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

RunConfig parse_config(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  check_keys(doc, {"action", "norm", "gammas", "estimator", "output", "search"}, "config");
  if (!doc.contains("action")) fail("missing 'action'");

  RunConfig cfg;
  cfg.source_text = text;
  const json &action = doc["action"];
  check_keys(action, {"dim", "rank", "generators"}, "action");
  cfg.dim = get<int>(action, "dim", "action");
  cfg.rank = get<int>(action, "rank", "action");
  if (!action.contains("generators") || !action["generators"].is_array()) {
    fail("missing or invalid 'generators' in action");
  }
  if (cfg.dim < 2) throw Error(ErrorCode::DimensionMismatch, "dim must be >= 2");
  if (cfg.rank < 1) throw Error(ErrorCode::DimensionMismatch, "rank must be >= 1");
  if (static_cast<int>(action["generators"].size()) != cfg.rank) {
    throw Error(ErrorCode::DimensionMismatch, "rank " + std::to_string(cfg.rank) + " but " +
                                                  std::to_string(action["generators"].size()) +
                                                  " generators");
  }
  for (std::size_t i = 0; i < action["generators"].size(); ++i) {
    cfg.generators.push_back(generator(action["generators"][i], cfg.dim, i));
  }

  cfg.norm = doc.contains("norm") ? parse_norm(doc["norm"], cfg.rank) : NormSpec::l2(cfg.rank);
  if (cfg.norm.rank() != cfg.rank) {
    throw Error(ErrorCode::DimensionMismatch, "norm rank != action rank");
  }
  if (doc.contains("gammas")) cfg.gammas = real_list(doc["gammas"], "gammas");

  if (doc.contains("estimator")) {
    const json &e = doc["estimator"];
    check_keys(e, {"eps", "s_grid", "cover_s_grid", "samples", "seed", "delta", "grid_resolution", "method"},
               "estimator");
    auto &est = cfg.estimator;
    if (e.contains("eps")) est.eps = real(e["eps"], "estimator.eps");
    if (e.contains("s_grid")) est.s_grid = real_list(e["s_grid"], "estimator.s_grid");
    if (e.contains("cover_s_grid")) est.cover_s_grid = real_list(e["cover_s_grid"], "estimator.cover_s_grid");
    if (e.contains("samples")) est.samples = get<long long>(e, "samples", "estimator");
    if (e.contains("seed")) est.seed = get<std::uint64_t>(e, "seed", "estimator");
    if (e.contains("delta")) est.delta = real(e["delta"], "estimator.delta");
    if (e.contains("grid_resolution")) est.grid_resolution = real(e["grid_resolution"], "estimator.grid_resolution");
    if (e.contains("method")) {
      const auto m = get<std::string>(e, "method", "estimator");
      if (m == "auto") est.method = EstimatorMethod::Auto;
      else if (m == "exact") est.method = EstimatorMethod::Exact;
      else if (m == "mc") est.method = EstimatorMethod::MonteCarlo;
      else fail("unknown estimator method '" + m + "'");
    }
  }

  if (doc.contains("search")) {
    const json &s = doc["search"];
    check_keys(s, {"family", "budget", "restarts"}, "search");
    SearchConfig sc;
    if (s.contains("family")) {
      const auto f = get<std::string>(s, "family", "search");
      if (f == "weighted_box") sc.family = NormFamily::WeightedBox;
      else if (f == "ellipsoid") sc.family = NormFamily::Ellipsoid;
      else fail("unknown search family '" + f + "'");
    }
    if (s.contains("budget")) sc.budget = get<int>(s, "budget", "search");
    if (s.contains("restarts")) sc.restarts = get<int>(s, "restarts", "search");
    cfg.search = sc;
  }

  if (doc.contains("output")) {
    const json &o = doc["output"];
    check_keys(o, {"directory", "formats"}, "output");
    if (o.contains("directory")) cfg.output.directory = get<std::string>(o, "directory", "output");
    if (o.contains("formats")) {
      cfg.output.formats = parse_formats(get<std::vector<std::string>>(o, "formats", "output"));
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_overrides(RunConfig &cfg, const Overrides &o) {
  if (o.seed) cfg.estimator.seed = *o.seed;
  if (o.samples) cfg.estimator.samples = *o.samples;
  if (o.eps) cfg.estimator.eps = *o.eps;
  if (o.out) cfg.output.directory = *o.out;
  if (o.formats) cfg.output.formats = parse_formats(*o.formats);
}

} // namespace slowent
