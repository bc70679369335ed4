#include "saferisk/copula.hpp"
#include "saferisk/datamodel.hpp"
#include "saferisk/density.hpp"
#include "saferisk/error.hpp"
#include "saferisk/quantiles.hpp"
#include "saferisk/riskcore.hpp"
#include "saferisk/simgen.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace saferisk;

namespace {

std::optional<SeverityScale> to_scale(const std::optional<std::array<double, 5>>& scores)
{
  if (!scores)
    return std::nullopt;
  return SeverityScale(*scores);
}

AttributeCatalog catalog_arg(const std::string& path, const std::optional<std::array<double, 5>>& scores)
{
  return path.empty() ? demo_catalog() : load_catalog(path, to_scale(scores));
}

py::dict pairs_dict(const RiskPairSample& s)
{
  py::dict d;
  d["x"] = s.x;
  d["y"] = s.y;
  return d;
}

GeneratorConfig gen_config(std::size_t n_sim, std::uint64_t seed, std::size_t streams, const std::string& negatives)
{
  GeneratorConfig cfg;
  cfg.n_sim = n_sim;
  cfg.seed = seed;
  cfg.streams = streams;
  cfg.negatives = parse_negative_policy(negatives);
  return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Construction safety risk analysis (C++ core)";

  auto base = py::register_exception<Error>(m, "SafeRiskError");
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<InsufficientSupport>(m, "InsufficientSupport", validation.ptr());

  m.def("demo_catalog_csv", [] { return std::string(demo_catalog_csv()); });

  m.def(
    "relative_risks",
    [](const std::string& catalog, const std::string& basis, const std::optional<std::array<double, 5>>& scores) {
      auto cat = catalog_arg(catalog, scores);
      auto rr = catalog_relative_risks(cat, parse_basis(basis));
      py::dict d;
      for (std::size_t i = 0; i < rr.size(); ++i)
        d[py::str(rr.names[i])] = rr.values[i];
      return d;
    },
    py::arg("catalog") = "", py::arg("basis") = "real", py::arg("severity_scores") = py::none(),
    "Relative risk per attribute. An empty catalog path selects the bundled demo catalog.");

  m.def(
    "escalation_deltas",
    [](const std::string& catalog) {
      std::vector<std::tuple<std::string, double, double, double>> out;
      for (const auto& d : escalation_deltas(catalog_arg(catalog, std::nullopt)))
        out.emplace_back(d.name, d.rr_real, d.rr_worst, d.delta);
      return out;
    },
    py::arg("catalog") = "");

  m.def(
    "situation_risk",
    [](const std::vector<std::string>& attributes, const std::string& catalog, const std::string& basis) {
      auto cat = catalog_arg(catalog, std::nullopt);
      return situation_risk(catalog_relative_risks(cat, parse_basis(basis)), attributes);
    },
    py::arg("attributes"), py::arg("catalog") = "", py::arg("basis") = "real");

  m.def(
    "report_risks",
    [](const std::string& matrix, const std::string& catalog, bool strict) {
      auto cat = catalog_arg(catalog, std::nullopt);
      auto mat = parse_report_matrix(matrix, cat, strict);
      RiskPairSample s{ report_risks(mat, catalog_relative_risks(cat, Basis::real)).values,
                        report_risks(mat, catalog_relative_risks(cat, Basis::worst)).values };
      return pairs_dict(s);
    },
    py::arg("matrix"), py::arg("catalog") = "", py::arg("strict") = false);

  m.def(
    "demo_report_risks",
    [](std::size_t n_reports, std::uint64_t seed) {
      auto cat = demo_catalog();
      auto mat = generate_demo_matrix(cat, n_reports, seed);
      RiskPairSample s{ report_risks(mat, catalog_relative_risks(cat, Basis::real)).values,
                        report_risks(mat, catalog_relative_risks(cat, Basis::worst)).values };
      return pairs_dict(s);
    },
    py::arg("n_reports") = 814, py::arg("seed") = 1);

  m.def("silverman_bandwidth", [](const std::vector<double>& x) { return silverman_bandwidth(x); });

  m.def(
    "kde",
    [](const std::vector<double>& sample, const std::vector<double>& at, const std::string& support,
       std::optional<double> bandwidth) {
      const Support sup = parse_support(support);
      KdeModel model = bandwidth ? KdeModel(sample, *bandwidth, sup) : KdeModel::fit(sample, sup);
      std::vector<double> out;
      out.reserve(at.size());
      for (double x : at)
        out.push_back(sup == Support::real_line ? kde_pdf(model, x) : kde_pdf_corrected(model, x).value);
      return out;
    },
    py::arg("sample"), py::arg("at"), py::arg("support") = "real", py::arg("bandwidth") = py::none(),
    "Density at the given points; a bounded support applies the boundary correction.");

  m.def(
    "simulate",
    [](const std::vector<double>& sample, std::size_t n_sim, std::uint64_t seed, std::size_t streams,
       const std::string& negatives) {
      py::gil_scoped_release release;
      return smoothed_bootstrap_uni(sample, gen_config(n_sim, seed, streams, negatives));
    },
    py::arg("sample"), py::arg("n_sim") = 100000, py::arg("seed") = 1, py::arg("streams") = 1,
    py::arg("negatives") = "reject");

  m.def(
    "simulate_pairs",
    [](const std::vector<double>& x, const std::vector<double>& y, std::size_t n_sim, std::uint64_t seed,
       std::size_t streams, const std::string& negatives) {
      RiskPairSample sim;
      {
        py::gil_scoped_release release;
        sim = smoothed_bootstrap_biv({ x, y }, gen_config(n_sim, seed, streams, negatives));
      }
      return pairs_dict(sim);
    },
    py::arg("x"), py::arg("y"), py::arg("n_sim") = 100000, py::arg("seed") = 1, py::arg("streams") = 1,
    py::arg("negatives") = "reject");

  m.def("kendall_tau",
        [](const std::vector<double>& x, const std::vector<double>& y) { return kendall_tau({ x, y }); });

  m.def(
    "copula_density",
    [](const std::vector<double>& x, const std::vector<double>& y, std::size_t m) {
      auto grid = empirical_copula_density({ x, y }, m);
      std::vector<std::vector<double>> rows(grid.m, std::vector<double>(grid.m));
      for (std::size_t k = 0; k < grid.m; ++k)
        for (std::size_t l = 0; l < grid.m; ++l)
          rows[k][l] = grid.at(k, l);
      return py::make_tuple(grid.coords, rows);
    },
    py::arg("x"), py::arg("y"), py::arg("m") = kDefaultCopulaGrid);

  m.def("quantile", [](const std::vector<double>& x, double p) { return empirical_quantile(x, p); });
  m.def("return_period_quantile",
        [](const std::vector<double>& x, double t) { return return_period_quantile(x, t); });

  m.def("risk_ranges", [](const std::vector<double>& x) { return build_ranges(x, Basis::real).breakpoints; });

  m.def("classify", [](double value, const std::array<double, 6>& breakpoints) {
    return std::string(to_string(classify(value, RiskRanges(breakpoints, Basis::real))));
  });

  m.def(
    "escalate",
    [](const std::vector<double>& x, const std::vector<double>& y, double x0, double window_lo,
       double window_hi, double threshold, std::size_t min_support) {
      RiskPairSample pairs{ x, y };
      EscalationQuery q;
      q.x0 = x0;
      q.window_lo = window_lo;
      q.window_hi = window_hi;
      q.threshold = threshold;
      q.min_support = min_support;
      auto est = escalation_estimate(pairs, q, build_ranges(y, Basis::worst));
      py::dict d;
      d["value"] = est.value;
      d["level"] = std::string(to_string(est.level));
      d["support"] = est.support;
      return d;
    },
    py::arg("x"), py::arg("y"), py::arg("x0"), py::arg("window_lo") = 5.0, py::arg("window_hi") = 5.0,
    py::arg("threshold") = 0.8, py::arg("min_support") = 30);
}
