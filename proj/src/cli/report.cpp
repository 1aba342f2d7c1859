#include "slowent/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slowent/error.hpp"

namespace slowent {

using nlohmann::json;

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ActionSection, dim, rank, determinants)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FunctionalRecord, coeffs, multiplicity, orbit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SpectrumSection, functionals, invariance_residual, attempts,
                                   invariant_violations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ChamberRecord, signs, representative)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ChambersSection, normals, chambers, generic_element)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TermRecord, index, gamma, a, product, argmax)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PesinRecord, signs, t, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EntropySection, norm, gamma_source, gammas, terms, total,
                                   half_total, pesin, identity_trials, sum_identity_passed,
                                   sum_identity_residual, abs_identity_passed,
                                   abs_identity_residual)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BowenRecord, s, volume, stderr_, method, neg_log_volume,
                                   constraints, samples, accepted)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FitRecord, s_grid, logvols, slope, intercept, r_squared,
                                   loo_min, loo_max, dropped_leading)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EstimationSection, eps, rows, fit, formula_delta, relative_gap)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CoverRecord, s, eps, delta, count, grid_resolution, grid_side,
                                   ball_points, uncovered_fraction, lower_bound, vacuous)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CoverSection, rows)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SearchSection, family, best_norm, best_parameters, best_value,
                                   initial_value, converged, iterations, trace_length)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Provenance, config_hash, version, wall_time_seconds)

namespace {

template <class T> void put(json &j, const char *key, const std::optional<T> &v) {
  if (v) j[key] = *v;
}

template <class T> void take(const json &j, const char *key, std::optional<T> &v) {
  if (j.contains(key)) v = j.at(key).get<T>();
}

std::string sign_label(const std::vector<int> &signs) {
  std::string s = "(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i) s += ",";
    s += signs[i] > 0 ? "+" : "-";
  }
  return s + ")";
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(x) < 5e-4 ? 0.0 : x);
  return buf;
}

} // namespace

json report_to_json(const Report &r) {
  json j;
  j["command"] = r.command;
  put(j, "action", r.action);
  put(j, "spectrum", r.spectrum);
  put(j, "chambers", r.chambers);
  put(j, "entropy", r.entropy);
  put(j, "estimation", r.estimation);
  put(j, "cover", r.cover);
  put(j, "norm_search", r.norm_search);
  j["skipped"] = r.skipped;
  j["provenance"] = r.provenance;
  return j;
}

Report report_from_json(const json &j) {
  Report r;
  r.command = j.at("command").get<std::string>();
  take(j, "action", r.action);
  take(j, "spectrum", r.spectrum);
  take(j, "chambers", r.chambers);
  take(j, "entropy", r.entropy);
  take(j, "estimation", r.estimation);
  take(j, "cover", r.cover);
  take(j, "norm_search", r.norm_search);
  r.skipped = j.at("skipped").get<std::vector<std::string>>();
  r.provenance = j.at("provenance").get<Provenance>();
  return r;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string spectrum_csv(const SpectrumSection &s) {
  std::ostringstream os;
  const std::size_t k = s.functionals.empty() ? 0 : s.functionals.front().coeffs.size();
  os << "index";
  for (std::size_t j = 0; j < k; ++j) os << ",c" << j + 1;
  os << ",multiplicity,orbit\n";
  for (std::size_t i = 0; i < s.functionals.size(); ++i) {
    const auto &f = s.functionals[i];
    os << i;
    for (double c : f.coeffs) os << ',' << format_real(c);
    os << ',' << f.multiplicity << ',' << (f.orbit ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string entropy_csv(const EntropySection &e) {
  std::ostringstream os;
  const std::size_t k = e.terms.empty() ? 0 : e.terms.front().argmax.size();
  os << "index,gamma,a,product";
  for (std::size_t j = 0; j < k; ++j) os << ",argmax" << j + 1;
  os << '\n';
  for (const auto &t : e.terms) {
    os << t.index << ',' << format_real(t.gamma) << ',' << format_real(t.a) << ','
       << format_real(t.product);
    for (double x : t.argmax) os << ',' << format_real(x);
    os << '\n';
  }
  os << "total,,," << format_real(e.total);
  for (std::size_t j = 0; j < k; ++j) os << ',';
  os << '\n';
  return os.str();
}

std::string bowen_csv(const EstimationSection &e) {
  std::ostringstream os;
  os << "s,volume,stderr,method,neg_log_volume,constraints_count\n";
  for (const auto &r : e.rows) {
    os << format_real(r.s) << ',' << format_real(r.volume) << ',' << format_real(r.stderr_) << ','
       << r.method << ',' << format_real(r.neg_log_volume) << ',' << r.constraints << '\n';
  }
  return os.str();
}

std::string cover_csv(const CoverSection &c) {
  std::ostringstream os;
  os << "s,eps,delta,count,uncovered_fraction\n";
  for (const auto &r : c.rows) {
    os << format_real(r.s) << ',' << format_real(r.eps) << ',' << format_real(r.delta) << ','
       << r.count << ',' << format_real(r.uncovered_fraction) << '\n';
  }
  return os.str();
}

std::string render_svg_chambers(const HyperplaneArrangement &arr,
                                const std::vector<Chamber> &chambers) {
  if (arr.rank != 2) {
    throw Error(ErrorCode::RankNotTwo, "arrangement has rank " + std::to_string(arr.rank));
  }
  constexpr double c = 200.0, line_r = 180.0, label_r = 120.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
        "viewBox=\"0 0 400 400\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"400\" height=\"400\" fill=\"white\"/>\n";
  os << "<circle cx=\"200.000\" cy=\"200.000\" r=\"2.000\" fill=\"black\"/>\n";
  for (std::size_t i = 0; i < arr.normals.size(); ++i) {
    const auto &n = arr.normals[i];
    const double dx = -n(1), dy = n(0); // direction of ker
    os << "<line x1=\"" << fixed(c - line_r * dx) << "\" y1=\"" << fixed(c + line_r * dy)
       << "\" x2=\"" << fixed(c + line_r * dx) << "\" y2=\"" << fixed(c - line_r * dy)
       << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto &ch : chambers) {
    const Eigen::VectorXd u = ch.representative.normalized();
    os << "<text x=\"" << fixed(c + label_r * u(0)) << "\" y=\"" << fixed(c - label_r * u(1))
       << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
       << sign_label(ch.sign_vector) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg_chambers(const HyperplaneArrangement &arr, const std::vector<Chamber> &chambers,
                       const std::filesystem::path &path) {
  const std::string svg = render_svg_chambers(arr, chambers);
  std::ofstream out(path, std::ios::binary);
  out << svg;
}

std::string content_hash(const std::string &text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace slowent
