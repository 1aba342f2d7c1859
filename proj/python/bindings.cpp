#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slowent/action.hpp"
#include "slowent/chambers.hpp"
#include "slowent/cli.hpp"
#include "slowent/entropy.hpp"
#include "slowent/error.hpp"
#include "slowent/norm.hpp"

namespace py = pybind11;
using namespace slowent;

namespace {

using Nested = std::vector<std::vector<std::vector<std::int64_t>>>;

IntegerMatrixAction make_action(const Nested &generators) {
  std::vector<IntMatrix> mats;
  for (const auto &g : generators) {
    const auto rows = static_cast<Eigen::Index>(g.size());
    const auto cols = rows ? static_cast<Eigen::Index>(g.front().size()) : 0;
    IntMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (static_cast<Eigen::Index>(g[i].size()) != cols) {
        throw Error(ErrorCode::DimensionMismatch, "ragged generator rows");
      }
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g[i][j];
    }
    mats.push_back(std::move(m));
  }
  return verify_action(std::move(mats));
}

NormSpec make_norm(const std::string &kind, int rank, const std::optional<Eigen::VectorXd> &w,
                   const std::optional<Eigen::MatrixXd> &m) {
  if (kind == "l1") return NormSpec::l1(rank);
  if (kind == "l2" || kind == "standard") return NormSpec::l2(rank);
  if (kind == "linf") return NormSpec::linf(rank);
  if (kind == "weighted_box") {
    if (!w) throw Error(ErrorCode::InvalidNorm, "weighted_box needs weights");
    return NormSpec::weighted_box(*w);
  }
  if (kind == "polytope") {
    if (!m) throw Error(ErrorCode::InvalidNorm, "polytope needs vertices");
    return NormSpec::polytope(*m);
  }
  if (kind == "ellipsoid") {
    if (!m) throw Error(ErrorCode::InvalidNorm, "ellipsoid needs a matrix");
    return NormSpec::ellipsoid(*m);
  }
  throw Error(ErrorCode::InvalidNorm, "unknown norm kind " + kind);
}

py::dict functional_dict(const LyapunovFunctional &f) {
  py::dict d;
  d["coeffs"] = f.coeffs;
  d["multiplicity"] = f.multiplicity;
  d["orbit_direction"] = f.orbit_direction;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Slow entropy of commuting toral automorphisms";
  m.attr("__version__") = kVersion;

  static PyObject *exc = py::exception<Error>(m, "SlowEntropyError").ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error &e) {
      py::object err = py::reinterpret_borrow<py::object>(exc)(py::str(e.what()));
      err.attr("name") = std::string(e.name());
      err.attr("numerical") = is_numerical(e.code());
      PyErr_SetObject(exc, err.ptr());
    }
  });

  m.def(
      "spectrum",
      [](const Nested &generators, double tol) {
        const auto spec = compute_spectrum(make_action(generators), tol);
        py::list out;
        for (const auto &f : spec.functionals()) out.append(functional_dict(f));
        return out;
      },
      py::arg("generators"), py::arg("tol") = 1e-8,
      "Joint Lyapunov functionals of the action generated by the matrices.");

  m.def(
      "slow_entropy",
      [](const Nested &generators, const std::string &norm,
         std::optional<Eigen::VectorXd> weights, std::optional<Eigen::MatrixXd> matrix,
         std::optional<std::vector<double>> gammas) {
        const auto action = make_action(generators);
        const auto spec = compute_spectrum(action);
        const auto g = gammas ? GammaAssignment::user(spec, *gammas) : GammaAssignment::haar(spec);
        const auto rep = slow_entropy(spec, g, make_norm(norm, action.rank(), weights, matrix));
        py::list terms;
        for (const auto &t : rep.terms) {
          py::dict d;
          d["index"] = t.index;
          d["gamma"] = t.gamma;
          d["a"] = t.a;
          d["argmax"] = t.argmax;
          d["product"] = t.product;
          terms.append(d);
        }
        py::dict out;
        out["total"] = rep.total;
        out["half_total"] = rep.half_total;
        out["terms"] = terms;
        return out;
      },
      py::arg("generators"), py::arg("norm") = "l2", py::arg("weights") = py::none(),
      py::arg("matrix") = py::none(), py::arg("gammas") = py::none(),
      "Slow entropy of the action for the given norm on the acting group.");

  m.def(
      "chamber_count",
      [](const Nested &generators) {
        const auto spec = compute_spectrum(make_action(generators));
        return enumerate_chambers(lyapunov_hyperplanes(spec)).size();
      },
      py::arg("generators"), "Number of Weyl chambers of the action.");

  m.def(
      "build_report",
      [](const std::string &subcommand, const std::string &config_text) {
        const RunConfig cfg = parse_config(config_text);
        return report_to_json(build_report(subcommand, cfg)).dump();
      },
      py::arg("subcommand"), py::arg("config_text"),
      "Runs one subcommand on a JSON config and returns the report as JSON text.");

  m.def(
      "run",
      [](const std::string &subcommand, const std::string &config_path,
         std::optional<std::uint64_t> seed, std::optional<long long> samples,
         std::optional<double> eps, std::optional<std::string> out,
         std::optional<std::vector<std::string>> formats) {
        Overrides o{seed, samples, eps, out, formats};
        std::ostringstream so;
        std::ostringstream se;
        const int status = run(subcommand, config_path, o, so, se);
        return py::make_tuple(status, so.str(), se.str());
      },
      py::arg("subcommand"), py::arg("config_path"), py::arg("seed") = py::none(),
      py::arg("samples") = py::none(), py::arg("eps") = py::none(), py::arg("out") = py::none(),
      py::arg("formats") = py::none(),
      "Full command with artifacts; returns (exit status, stdout, stderr).");
}
