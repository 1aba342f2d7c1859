#include "slowent/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>

#include "slowent/bowen.hpp"
#include "slowent/error.hpp"

namespace slowent {

namespace {

const std::set<std::string> kSubcommands{"verify",  "spectrum",       "chambers",       "entropy",
                                         "minimize", "estimate-bowen", "estimate-cover", "report"};

std::vector<double> to_std(const Eigen::VectorXd &v) { return {v.data(), v.data() + v.size()}; }

ActionSection action_section(const RunConfig &cfg) {
  ActionSection a;
  a.dim = cfg.dim;
  a.rank = cfg.rank;
  for (const auto &g : cfg.generators) {
    a.determinants.push_back(static_cast<long long>(BigIntMatrix(g).determinant()));
  }
  return a;
}

SpectrumSection spectrum_section(const LyapunovDecomposition &d) {
  SpectrumSection s;
  for (const auto &f : d.spectrum.functionals()) {
    s.functionals.push_back({to_std(f.coeffs), f.multiplicity, f.orbit_direction});
  }
  s.invariance_residual = d.invariance_residual;
  s.attempts = d.attempts;
  s.invariant_violations = d.spectrum.invariant_violations();
  return s;
}

struct ChamberData {
  HyperplaneArrangement arr;
  std::vector<Chamber> chambers;
};

ChambersSection chambers_section(const LyapunovSpectrum &spec, const NormSpec &norm,
                                 ChamberData &data) {
  data.arr = lyapunov_hyperplanes(spec);
  data.chambers = enumerate_chambers(data.arr);
  ChambersSection c;
  for (const auto &n : data.arr.normals) c.normals.push_back(to_std(n));
  for (const auto &ch : data.chambers) c.chambers.push_back({ch.sign_vector, to_std(ch.representative)});
  c.generic_element = to_std(pick_generic_element(spec, norm));
  return c;
}

GammaAssignment gammas_for(const RunConfig &cfg, const LyapunovSpectrum &spec) {
  return cfg.gammas ? GammaAssignment::user(spec, *cfg.gammas) : GammaAssignment::haar(spec);
}

EntropySection entropy_section(const RunConfig &cfg, const LyapunovSpectrum &spec,
                               const std::vector<Chamber> *chambers) {
  const GammaAssignment g = gammas_for(cfg, spec);
  const SlowEntropyReport rep = slow_entropy(spec, g, cfg.norm);
  EntropySection e;
  e.norm = cfg.norm.describe();
  e.gamma_source = g.source() == GammaSource::HaarMultiplicity ? "HaarMultiplicity" : "UserSupplied";
  e.gammas = g.values();
  for (const auto &t : rep.terms) e.terms.push_back({t.index, t.gamma, t.a, t.product, to_std(t.argmax)});
  e.total = rep.total;
  e.half_total = rep.half_total;
  if (chambers) {
    for (const auto &ch : *chambers) {
      e.pesin.push_back({ch.sign_vector, to_std(ch.representative),
                         pesin_entropy(spec, g, ch.representative)});
    }
  }
  const GammaValidation v = validate_gammas(spec, g, 100);
  e.identity_trials = v.trials;
  e.sum_identity_passed = v.sum_passed;
  e.sum_identity_residual = v.sum_worst;
  e.abs_identity_passed = v.abs_passed;
  e.abs_identity_residual = v.abs_worst;
  return e;
}

EstimationSection estimation_section(const RunConfig &cfg, const IntegerMatrixAction &action) {
  const auto &est = cfg.estimator;
  const LocalEntropyEstimate le = estimate_local_slow_entropy(
      action, cfg.norm, cfg.gammas, est.eps, est.s_grid, est.samples, est.seed, est.method);
  EstimationSection e;
  e.eps = est.eps;
  for (const auto &r : le.rows) {
    e.rows.push_back({r.s, r.volume.value, r.volume.stderr_,
                      std::string(volume_method_name(r.volume.method)), -std::log(r.volume.value),
                      r.constraints, r.volume.samples, r.volume.accepted});
  }
  e.fit = {le.fit.s_grid,  le.fit.logvols, le.fit.slope,  le.fit.intercept,
           le.fit.r_squared, le.fit.loo_min, le.fit.loo_max, le.fit.dropped_leading};
  e.formula_delta = le.formula_delta;
  e.relative_gap = le.relative_gap;
  return e;
}

CoverSection cover_section(const RunConfig &cfg, const IntegerMatrixAction &action) {
  const auto &est = cfg.estimator;
  const std::vector<double> grid = est.cover_s_grid ? *est.cover_s_grid : est.s_grid;
  std::vector<double> spacing;
  for (double s : grid) {
    if (est.grid_resolution) {
      spacing.push_back(*est.grid_resolution);
    } else {
      const BowenBody body = bowen_constraints(action, cfg.norm, s, est.eps);
      spacing.push_back(auto_grid_resolution(exact_volume_2d(body).value, est.eps));
    }
    cover_grid_side(spacing.back());
  }
  CoverSection c;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CoverEstimate ce =
        covering_number(action, cfg.norm, grid[i], est.eps, est.delta, spacing[i]);
    c.rows.push_back({ce.s, ce.eps, ce.delta, ce.count, ce.grid_resolution, ce.grid_side,
                      ce.ball_points, ce.uncovered_fraction, ce.lower_bound, ce.vacuous});
  }
  return c;
}

SearchSection search_section(const RunConfig &cfg, const LyapunovSpectrum &spec) {
  const SearchConfig sc = cfg.search.value_or(SearchConfig{});
  const NormSearchResult r = minimize_over_norm_family(spec, gammas_for(cfg, spec), sc.family,
                                                       sc.budget, cfg.estimator.seed, sc.restarts);
  SearchSection s;
  s.family = std::string(norm_family_name(sc.family));
  s.best_norm = r.best_norm.describe();
  if (r.best_norm.kind() == NormKind::WeightedBox) {
    s.best_parameters = to_std(r.best_norm.weights());
  } else {
    const Eigen::MatrixXd q = r.best_norm.matrix().transpose(); // row-major flattening
    s.best_parameters.assign(q.data(), q.data() + q.size());
  }
  s.best_value = r.best_value;
  s.initial_value = r.initial_value;
  s.converged = r.converged;
  s.iterations = r.iterations;
  s.trace_length = r.trace.size();
  return s;
}

bool not_applicable(const Error &e) {
  return e.code() == ErrorCode::AllZeroSpectrum || e.code() == ErrorCode::RankTooLarge;
}

} // namespace

Report build_report(const std::string &sub, const RunConfig &cfg) {
  if (!kSubcommands.count(sub)) throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + sub);
  Report r;
  r.command = sub;
  r.provenance.config_hash = content_hash(cfg.source_text);
  r.provenance.version = kVersion;
  const IntegerMatrixAction action = verify_action(cfg.generators);
  r.action = action_section(cfg);
  if (sub == "verify") return r;
  if (sub == "estimate-cover") {
    r.cover = cover_section(cfg, action);
    return r;
  }

  const LyapunovDecomposition decomp = decompose(action);
  const LyapunovSpectrum &spec = decomp.spectrum;
  r.spectrum = spectrum_section(decomp);
  const bool all = sub == "report";

  ChamberData chambers;
  bool have_chambers = false;
  if (sub == "chambers" || sub == "entropy" || all) {
    try {
      r.chambers = chambers_section(spec, cfg.norm, chambers);
      have_chambers = true;
    } catch (const Error &e) {
      if (sub == "chambers" || !not_applicable(e)) throw;
      r.skipped.push_back(std::string("chambers: ") + e.what());
    }
  }
  if (sub == "entropy" || all) {
    r.entropy = entropy_section(cfg, spec, have_chambers ? &chambers.chambers : nullptr);
  }
  if (sub == "minimize" || (all && cfg.search)) r.norm_search = search_section(cfg, spec);
  if (sub == "estimate-bowen" || all) r.estimation = estimation_section(cfg, action);
  if (all) {
    if (cfg.dim == 2 && cfg.estimator.cover_s_grid) {
      r.cover = cover_section(cfg, action);
    } else {
      r.skipped.push_back("cover: needs d = 2 and estimator.cover_s_grid");
    }
  }
  return r;
}

void write_artifacts(const Report &report, const RunConfig &cfg) {
  const std::filesystem::path dir(cfg.output.directory);
  std::filesystem::create_directories(dir);
  auto write = [&](const char *name, const std::string &text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir / name).string());
    out << text;
  };
  if (cfg.wants("json")) write("report.json", report_to_json(report).dump(2) + "\n");
  if (cfg.wants("csv")) {
    if (report.spectrum) write("spectrum.csv", spectrum_csv(*report.spectrum));
    if (report.entropy) write("entropy.csv", entropy_csv(*report.entropy));
    if (report.estimation) write("bowen.csv", bowen_csv(*report.estimation));
    if (report.cover) write("cover.csv", cover_csv(*report.cover));
  }
  if (cfg.wants("svg") && report.chambers) {
    HyperplaneArrangement arr;
    arr.rank = cfg.rank;
    for (const auto &n : report.chambers->normals) {
      arr.normals.push_back(Eigen::Map<const Eigen::VectorXd>(n.data(), static_cast<Eigen::Index>(n.size())));
    }
    std::vector<Chamber> chambers;
    for (const auto &c : report.chambers->chambers) {
      chambers.push_back({c.signs, Eigen::Map<const Eigen::VectorXd>(
                                       c.representative.data(),
                                       static_cast<Eigen::Index>(c.representative.size()))});
    }
    if (arr.rank == 2 || report.command == "chambers") {
      write("chambers.svg", render_svg_chambers(arr, chambers));
    }
  }
}

int run(const std::string &subcommand, const std::filesystem::path &config_path,
        const Overrides &overrides, std::ostream &out, std::ostream &err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, overrides);
    Report report = build_report(subcommand, cfg);
    report.provenance.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_artifacts(report, cfg);
    out << report_to_json(report).dump(2) << '\n';
    if (report.norm_search && !report.norm_search->converged) {
      err << error_name(ErrorCode::BudgetExhausted) << " norm search stopped after "
          << report.norm_search->iterations << " iterations\n";
      return 2;
    }
    return 0;
  } catch (const Error &e) {
    err << e.what() << '\n';
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "InvalidArgument " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "NumericalFailure " << e.what() << '\n';
    return 2;
  }
}

} // namespace slowent
