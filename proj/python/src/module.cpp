#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "sparsegf2/core.hpp"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/exact.hpp"
#include "sparsegf2/gf2.hpp"
#include "sparsegf2/json_io.hpp"
#include "sparsegf2/sampler.hpp"
#include "sparsegf2/thresholds.hpp"
#include "sparsegf2/verify.hpp"

namespace py = pybind11;
using namespace sparsegf2;

namespace {

using Rows = std::vector<std::vector<std::uint32_t>>;

// Structured results cross as JSON, then become plain dicts on the Python side.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

SampleConfig sample_config(int n, long m, const std::string& rho, const std::string& model, std::uint64_t seed) {
  SampleConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.dist = parse_rho(rho);
  cfg.model = parse_model(model);
  cfg.seed = seed;
  return cfg;
}

GF2Matrix matrix_of(const Rows& rows, std::size_t n) {
  GF2Matrix mat(n);
  for (const auto& r : rows) mat.add_row_indices(r);
  return mat;
}

PeelOrder order_of(const std::string& s) {
  if (s == "fifo") return PeelOrder::fifo;
  if (s == "lifo") return PeelOrder::lifo;
  if (s == "random") return PeelOrder::random;
  throw InvalidParam("order must be fifo, lifo or random");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse random GF(2) matrices: thresholds, cores, exact sums.";
  m.def("version", [] { return std::string(version()); });

  m.def("normalize_rho", [](const std::string& rho) { return parse_rho(rho).to_spec(); }, py::arg("rho"));
  m.def(
      "thresholds",
      [](const std::string& rho, std::optional<double> witness) { return to_py(to_json(threshold_report(parse_rho(rho), witness))); },
      py::arg("rho"), py::arg("witness_alpha") = py::none());
  m.def("table1", [] { return to_py(table1_json()); });
  m.def("alpha_star", [](const std::string& rho) { return alpha_star(parse_rho(rho)).value; }, py::arg("rho"));
  m.def("alpha_sharp", [](const std::string& rho) { return alpha_sharp(parse_rho(rho)).value; }, py::arg("rho"));
  m.def(
      "alpha_bar",
      [](const std::string& rho) -> std::optional<double> {
        const auto b = alpha_bar(parse_rho(rho));
        return b ? std::optional<double>(b->value) : std::nullopt;
      },
      py::arg("rho"));
  m.def("g_star", [](const std::string& rho, double alpha) { return g_star(parse_rho(rho), alpha); }, py::arg("rho"),
        py::arg("alpha"));
  m.def(
      "h_psi",
      [](const std::string& rho, double x) {
        const auto v = h_psi(parse_rho(rho), x);
        return py::dict(py::arg("h") = v.h, py::arg("psi") = v.psi, py::arg("dh") = v.dh, py::arg("dpsi") = v.dpsi);
      },
      py::arg("rho"), py::arg("x"));
  m.def("F", [](const std::string& rho, double alpha) { return F_of_alpha(parse_rho(rho), alpha).value; },
        py::arg("rho"), py::arg("alpha"));
  m.def("core_theory", [](const std::string& rho, double alpha) { return to_py(to_json(core_theory(parse_rho(rho), alpha))); },
        py::arg("rho"), py::arg("alpha"));

  m.def(
      "sample_rows",
      [](int n, long rows, const std::string& rho, const std::string& model, std::uint64_t seed) {
        return sample_rows(sample_config(n, rows, rho, model, seed));
      },
      py::arg("n"), py::arg("m"), py::arg("rho") = "r=3", py::arg("model") = "exact", py::arg("seed") = 0);
  m.def(
      "first_dependency",
      [](int n, const std::string& rho, const std::string& model, std::uint64_t seed) {
        return run_Tn(sample_config(n, 0, rho, model, seed));
      },
      py::arg("n"), py::arg("rho") = "r=3", py::arg("model") = "exact", py::arg("seed") = 0);
  m.def("corank", [](const Rows& rows, std::size_t n) { return corank(matrix_of(rows, n)); }, py::arg("rows"),
        py::arg("n"));
  m.def(
      "null_vectors",
      [](const Rows& rows, std::size_t n) { return enumerate_null_vectors(matrix_of(rows, n)).vectors; },
      py::arg("rows"), py::arg("n"));
  m.def(
      "peel",
      [](const Rows& rows, std::size_t n, const std::string& order, std::uint64_t seed) {
        return to_py(to_json(peel_2core(Hypergraph(n, rows), order_of(order), seed), true));
      },
      py::arg("rows"), py::arg("n"), py::arg("order") = "fifo", py::arg("seed") = 0);

  m.def("pi_multinomial", [](long n, long rows, const std::string& rho) { return to_py(to_json(pi_multinomial(n, rows, parse_rho(rho)))); },
        py::arg("n"), py::arg("m"), py::arg("rho"));
  m.def(
      "pi_multinomial_exact",
      [](long n, long rows, const std::string& rho) { return pi_multinomial_exact(n, rows, parse_rho(rho)).str(); },
      py::arg("n"), py::arg("m"), py::arg("rho"));
  m.def(
      "expected_null_count",
      [](long n, long rows, const std::string& rho, const std::string& model) {
        return to_double(expected_null_count(n, rows, parse_rho(rho), parse_model(model)).total);
      },
      py::arg("n"), py::arg("m"), py::arg("rho") = "r=3", py::arg("model") = "exact");

  m.def("verify", [](const std::string& suite) { return to_py(to_json(run_verify(suite))); }, py::arg("suite") = "all");
}
