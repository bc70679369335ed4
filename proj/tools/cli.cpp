#include "cli.hpp"

#include "saferisk/copula.hpp"
#include "saferisk/csv.hpp"
#include "saferisk/datamodel.hpp"
#include "saferisk/density.hpp"
#include "saferisk/error.hpp"
#include "saferisk/quantiles.hpp"
#include "saferisk/riskcore.hpp"
#include "saferisk/simgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace saferisk::cli {

namespace {

// Everything a run depends on, filled by CLI11.
struct RunConfig
{
  std::string catalog;
  std::string matrix;
  std::string values;
  std::string column;
  std::string sim;
  std::string out;
  std::string severity_scores;
  std::string basis = "real";
  std::string mode = "uni";
  std::string negatives = "reject";
  std::string pseudo = "normal";
  std::string support = "nonneg";
  std::string format = "text";
  std::string histogram_out;
  std::string write_catalog;
  std::vector<std::string> attributes;
  std::vector<double> quantiles;
  std::size_t n_sim = 100000;
  std::size_t n_reports = 814;
  std::uint64_t seed = 1;
  std::size_t streams = 1;
  std::size_t grid_points = kDefaultGridPoints;
  std::size_t bins = 0;
  std::size_t min_support = 30;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::optional<double> bandwidth;
  double window_lo = 5;
  double window_hi = 5;
  double threshold = 0.8;
  bool strict = false;
  bool corrected = false;
  bool precise = false;
};

struct Input
{
  std::string path;
  std::string text;
};

Input read_input(const std::string& path, const char* what)
{
  if (path.empty())
    throw ValidationError(std::string("missing --") + what);
  return { path, csv::read_file(path) };
}

std::string digest_line(const char* role, const Input& in)
{
  return std::string(role) + "=" + in.path + " fnv1a64=" + csv::hex_digest(csv::fnv1a64(in.text));
}

// "# ..." provenance block: command, effective options and input digests.
std::string provenance(const CLI::App& sub, const std::vector<std::string>& digests)
{
  std::ostringstream os;
  os << "# saferisk " << sub.get_name() << '\n';
  std::istringstream cfg(sub.config_to_str(true, false));
  for (std::string line; std::getline(cfg, line);)
    if (!line.empty())
      os << "# " << line << '\n';
  for (const auto& d : digests)
    os << "# input " << d << '\n';
  return os.str();
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text)
{
  if (cfg.out.empty())
    out << text;
  else
    csv::write_file(cfg.out, text);
}

std::optional<SeverityScale> scale_override(const RunConfig& cfg)
{
  if (cfg.severity_scores.empty())
    return std::nullopt;
  return parse_severity_scale(cfg.severity_scores);
}

AttributeCatalog catalog_from(const Input& in, const RunConfig& cfg)
{
  auto override_scale = scale_override(cfg);
  SeverityScale scale = override_scale ? *override_scale
                                       : scale_directive(in.text).value_or(SeverityScale{});
  return parse_catalog_text(in.text, scale, in.path);
}

std::vector<double> column_values(const csv::Table& table, const RunConfig& cfg, const std::string& source)
{
  std::size_t idx = static_cast<std::size_t>(-1);
  if (!cfg.column.empty()) {
    idx = table.find(cfg.column);
    if (idx == static_cast<std::size_t>(-1))
      throw ValidationError(source + ": no column named '" + cfg.column + "'");
  } else {
    const bool real = parse_basis(cfg.basis) == Basis::real;
    for (const char* name : { "sim_value", real ? "x_sim" : "y_sim", real ? "risk_real" : "risk_worst" }) {
      idx = table.find(name);
      if (idx != static_cast<std::size_t>(-1))
        break;
    }
    if (idx == static_cast<std::size_t>(-1))
      idx = 0;
  }
  return table.columns[idx];
}

RiskPairSample pairs_from(const csv::Table& table, const std::string& source)
{
  for (auto [xn, yn] : { std::pair{ "x_sim", "y_sim" }, std::pair{ "risk_real", "risk_worst" } }) {
    auto xi = table.find(xn);
    auto yi = table.find(yn);
    if (xi != static_cast<std::size_t>(-1) && yi != static_cast<std::size_t>(-1))
      return { table.columns[xi], table.columns[yi] };
  }
  throw ValidationError(source + ": expected x_sim,y_sim (or risk_real,risk_worst) columns");
}

std::string fmt(double v)
{
  return csv::format_double(v);
}

// --- subcommands ------------------------------------------------------------

int cmd_attributes(const CLI::App& sub, const RunConfig& cfg, std::ostream& out)
{
  auto in = read_input(cfg.catalog, "catalog");
  auto catalog = catalog_from(in, cfg);
  std::string text = provenance(sub, { digest_line("catalog", in) });
  text += relative_risks_csv(catalog, cfg.precise);
  emit(cfg, out, text);
  return kSuccess;
}

struct ReportData
{
  Input catalog_in;
  Input matrix_in;
  RiskSample real;
  RiskSample worst;
};

ReportData load_reports(const RunConfig& cfg, std::ostream& err)
{
  ReportData d{ read_input(cfg.catalog, "catalog"), read_input(cfg.matrix, "matrix"), {}, {} };
  auto catalog = catalog_from(d.catalog_in, cfg);
  auto matrix = parse_report_matrix_text(d.matrix_in.text, catalog, cfg.strict, d.matrix_in.path);
  if (matrix.dropped_empty_rows() > 0)
    err << "warning: dropped " << matrix.dropped_empty_rows() << " report(s) with no attributes\n";
  if (matrix.rows() == 0)
    throw ValidationError(d.matrix_in.path + ": no reports");
  d.real = report_risks(matrix, catalog_relative_risks(catalog, Basis::real));
  d.worst = report_risks(matrix, catalog_relative_risks(catalog, Basis::worst));
  return d;
}

int cmd_reports(const CLI::App& sub, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  auto d = load_reports(cfg, err);
  std::string text = provenance(sub, { digest_line("catalog", d.catalog_in), digest_line("matrix", d.matrix_in) });
  text += report_risks_csv(d.real, d.worst);
  emit(cfg, out, text);
  return kSuccess;
}

int cmd_simulate(const CLI::App& sub, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  GeneratorConfig gen;
  gen.n_sim = cfg.n_sim;
  gen.seed = cfg.seed;
  gen.streams = cfg.streams;
  gen.negatives = parse_negative_policy(cfg.negatives);
  gen.validate();
  if (cfg.mode != "uni" && cfg.mode != "biv")
    throw ValidationError("unknown mode '" + cfg.mode + "' (expected uni or biv)");
  if (cfg.pseudo != "normal" && cfg.pseudo != "rank")
    throw ValidationError("unknown pseudo mapping '" + cfg.pseudo + "' (expected normal or rank)");
  const Basis basis = parse_basis(cfg.basis);

  auto d = load_reports(cfg, err);
  std::ostringstream os;
  os << provenance(sub, { digest_line("catalog", d.catalog_in), digest_line("matrix", d.matrix_in) });
  if (cfg.mode == "uni") {
    const auto& source = basis == Basis::real ? d.real.values : d.worst.values;
    auto sim = smoothed_bootstrap_uni(source, gen);
    os << "sim_value\n";
    for (double v : sim)
      os << fmt(v) << '\n';
  } else {
    RiskPairSample pairs{ d.real.values, d.worst.values };
    auto sim = smoothed_bootstrap_biv(pairs, gen);
    auto pseudo = cfg.pseudo == "rank" ? pseudo_rank(sim) : pseudo_normal(sim);
    os << "# pseudo=" << (cfg.pseudo == "rank" ? "pseudo_rank" : "pseudo_normal") << '\n';
    os << "x_sim,y_sim,u,v\n";
    for (std::size_t i = 0; i < sim.size(); ++i)
      os << fmt(sim.x[i]) << ',' << fmt(sim.y[i]) << ',' << fmt(pseudo.x[i]) << ',' << fmt(pseudo.y[i]) << '\n';
  }
  emit(cfg, out, os.str());
  return kSuccess;
}

int cmd_density(const CLI::App& sub, const RunConfig& cfg, std::ostream& out)
{
  if (cfg.grid_points < 2)
    throw ValidationError("--grid-points must be at least 2");
  auto in = read_input(cfg.values, "values");
  auto table = csv::parse_numeric_table(in.text, in.path);
  auto values = column_values(table, cfg, in.path);
  const Support support = cfg.corrected ? parse_support(cfg.support) : Support::real_line;
  KdeModel model = cfg.bandwidth ? KdeModel(values, *cfg.bandwidth, support)
                                 : KdeModel::fit(values, support);
  auto [lo, hi] = default_grid_range(model, cfg.corrected);
  if (cfg.grid_lo)
    lo = *cfg.grid_lo;
  if (cfg.grid_hi)
    hi = *cfg.grid_hi;
  auto grid = density_grid(model, lo, hi, cfg.grid_points, cfg.corrected);

  std::ostringstream os;
  os << provenance(sub, { digest_line("values", in) });
  os << "# bandwidth=" << fmt(model.bandwidth());
  if (support != Support::real_line)
    os << " transformed_bandwidth=" << fmt(model.transformed_bandwidth());
  os << '\n';
  os << grid.to_csv();
  emit(cfg, out, os.str());

  if (!cfg.histogram_out.empty()) {
    auto bins = histogram(values, cfg.bins);
    csv::write_file(cfg.histogram_out, provenance(sub, { digest_line("values", in) }) + histogram_csv(bins));
  }
  return kSuccess;
}

int cmd_ranges(const CLI::App& sub, const RunConfig& cfg, std::ostream& out)
{
  auto in = read_input(cfg.values, "values");
  auto table = csv::parse_numeric_table(in.text, in.path);
  auto values = column_values(table, cfg, in.path);
  std::ostringstream os;
  os << provenance(sub, { digest_line("values", in) });
  if (!cfg.quantiles.empty()) {
    os << "p,return_period,value\n";
    for (double p : cfg.quantiles) {
      const double q = empirical_quantile(values, p);
      os << fmt(p) << ',' << (p < 1.0 ? fmt(1.0 / (1.0 - p)) : std::string("inf")) << ',' << fmt(q) << '\n';
    }
  } else {
    auto ranges = build_ranges(values, parse_basis(cfg.basis));
    os << "quantile,value,label\n";
    for (std::size_t k = 0; k < 6; ++k) {
      os << fmt(RiskRanges::kLevels[k]) << ',' << fmt(ranges.breakpoints[k]) << ',';
      if (k < 5)
        os << csv::escape(to_string(static_cast<RiskLevel>(k)));
      os << '\n';
    }
  }
  emit(cfg, out, os.str());
  return kSuccess;
}

int cmd_escalate(const CLI::App& sub, const RunConfig& cfg, std::ostream& out)
{
  std::vector<std::string> names;
  for (const auto& a : cfg.attributes) {
    auto t = csv::split(a);
    for (auto& n : t)
      if (!n.empty())
        names.push_back(n);
  }
  if (names.empty())
    throw ValidationError("--attributes: no attribute names given");

  auto cat_in = read_input(cfg.catalog, "catalog");
  auto catalog = catalog_from(cat_in, cfg);
  const auto rr = catalog_relative_risks(catalog, Basis::real);
  const double x0 = situation_risk(rr, names);

  auto sim_in = read_input(cfg.sim, "sim");
  auto pairs = pairs_from(csv::parse_numeric_table(sim_in.text, sim_in.path), sim_in.path);
  const auto real_ranges = build_ranges(pairs.x, Basis::real);
  const auto worst_ranges = build_ranges(pairs.y, Basis::worst);

  EscalationQuery query;
  query.x0 = x0;
  query.window_lo = cfg.window_lo;
  query.window_hi = cfg.window_hi;
  query.threshold = cfg.threshold;
  query.min_support = cfg.min_support;
  const auto est = escalation_estimate(pairs, query, worst_ranges);
  const auto prior_level = classify(x0, real_ranges);

  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["attributes"] = names;
    j["x0"] = x0;
    j["x0_display"] = display_round(x0);
    j["real_range"] = to_string(prior_level);
    j["window"] = { x0 - cfg.window_lo, x0 + cfg.window_hi };
    j["threshold"] = cfg.threshold;
    j["conditional_quantile"] = est.value;
    j["conditional_quantile_display"] = display_round(est.value);
    j["worst_range"] = to_string(est.level);
    j["support"] = est.support;
    j["inputs"] = { { "catalog", digest_line("catalog", cat_in) }, { "sim", digest_line("sim", sim_in) } };
    os << j.dump(2) << '\n';
  } else if (cfg.format == "text") {
    std::string joined;
    for (const auto& n : names)
      joined += (joined.empty() ? "" : ", ") + n;
    os << provenance(sub, { digest_line("catalog", cat_in), digest_line("sim", sim_in) });
    os << "attributes: " << joined << '\n';
    os << "step 1  prior evidence (real outcomes):   x0 = " << fmt(display_round(x0)) << " ("
       << fmt(x0) << ")  range: " << to_string(prior_level) << '\n';
    os << "step 2  conditional quantile Q(" << fmt(cfg.threshold) << ") (worst outcomes): "
       << fmt(display_round(est.value)) << " (" << fmt(est.value) << ")  range: " << to_string(est.level) << '\n';
    os << "support: " << est.support << " simulated pairs with " << fmt(x0 - cfg.window_lo) << " < x < "
       << fmt(x0 + cfg.window_hi) << '\n';
  } else {
    throw ValidationError("unknown format '" + cfg.format + "' (expected text or json)");
  }
  emit(cfg, out, os.str());
  return kSuccess;
}

int cmd_demo_data(const CLI::App& sub, const RunConfig& cfg, std::ostream& out)
{
  if (!cfg.write_catalog.empty())
    csv::write_file(cfg.write_catalog, demo_catalog_csv());

  Input cat_in{ "<bundled table1_demo.csv>", std::string(demo_catalog_csv()) };
  if (!cfg.catalog.empty())
    cat_in = read_input(cfg.catalog, "catalog");
  auto catalog = catalog_from(cat_in, cfg);
  auto matrix = generate_demo_matrix(catalog, cfg.n_reports, cfg.seed);
  std::vector<std::string> comments;
  {
    std::istringstream prov(provenance(sub, { digest_line("catalog", cat_in) }));
    for (std::string line; std::getline(prov, line);)
      comments.push_back(line.substr(2));
  }
  comments.insert(comments.begin() + 1, "SYNTHETIC demo matrix: generated, not real injury report data");
  emit(cfg, out, serialize_report_matrix(matrix, comments));
  return kSuccess;
}

// --- config file --------------------------------------------------------------

// Reads key=value lines (optionally under [subcommand] sections) and turns the
// entries that apply to `subcommand` into --key=value arguments.
std::vector<std::string> config_arguments(const std::string& path, const std::string& subcommand)
{
  auto doc = csv::parse_document(csv::read_file(path));
  std::vector<std::string> args;
  std::string section;
  for (const auto& line : doc.lines) {
    std::string_view t = line.text;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
      t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
      t.remove_suffix(1);
    if (t.empty() || t.front() == ';')
      continue;
    if (t.front() == '[' && t.back() == ']') {
      section = std::string(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(path + ":" + std::to_string(line.number) + ": expected key=value");
    auto key = std::string(t.substr(0, eq));
    auto value = std::string(t.substr(eq + 1));
    auto strip = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    };
    strip(key);
    strip(value);
    std::replace(key.begin(), key.end(), '_', '-');
    if (section.empty() || section == subcommand)
      args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw ValidationError("--config needs a file name");
      config = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty() || rest.empty() || rest.front().starts_with("-"))
    return rest;
  // config entries first so explicit flags win
  auto extra = config_arguments(config, rest.front());
  rest.insert(rest.begin() + 1, extra.begin(), extra.end());
  return rest;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
  RunConfig cfg;
  CLI::App app{ "Attribute-based construction safety risk: relative risks, report risks, "
                "density estimation, smoothed-bootstrap simulation, risk ranges and escalation." };
  app.name("saferisk");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  auto add_catalog = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--catalog", cfg.catalog, "Attribute catalog CSV");
    if (required)
      o->required();
    s->add_option("--severity-scores", cfg.severity_scores,
                  "Five comma-separated severity scores overriding the catalog's own");
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", cfg.out, "Output file (default: stdout)"); };
  auto add_values = [&](CLI::App* s) {
    s->add_option("--values", cfg.values, "CSV file with a numeric column")->required();
    s->add_option("--column", cfg.column, "Column to read (default: picked from --basis)");
    s->add_option("--basis", cfg.basis, "real or worst")->check(CLI::IsMember({ "real", "worst" }));
  };

  auto* attributes = app.add_subcommand("attributes", "Relative risks and escalation deltas per attribute");
  add_catalog(attributes, true);
  add_out(attributes);
  attributes->add_flag("--precise", cfg.precise, "Write unrounded values");

  auto* reports = app.add_subcommand("reports", "Risk of every report (real and worst outcomes)");
  add_catalog(reports, true);
  reports->add_option("--matrix", cfg.matrix, "Report matrix CSV")->required();
  reports->add_flag("--strict", cfg.strict, "Reject reports without attributes instead of dropping them");
  add_out(reports);

  auto* simulate = app.add_subcommand("simulate", "Smoothed-bootstrap simulation of report risks");
  add_catalog(simulate, true);
  simulate->add_option("--matrix", cfg.matrix, "Report matrix CSV")->required();
  simulate->add_flag("--strict", cfg.strict, "Reject reports without attributes instead of dropping them");
  simulate->add_option("--mode", cfg.mode, "uni or biv");
  simulate->add_option("--basis", cfg.basis, "real or worst (uni mode)");
  simulate->add_option("--n-sim", cfg.n_sim, "Number of simulated values");
  simulate->add_option("--seed", cfg.seed, "Random seed");
  simulate->add_option("--streams", cfg.streams, "Parallel generator streams");
  simulate->add_option("--negatives", cfg.negatives, "reject or keep");
  simulate->add_option("--pseudo", cfg.pseudo, "normal or rank: mapping for the u,v columns (biv)");
  add_out(simulate);

  auto* density = app.add_subcommand("density", "Kernel density estimate on a grid");
  add_values(density);
  density->add_flag("--corrected", cfg.corrected, "Boundary-corrected estimate");
  density->add_option("--support", cfg.support, "nonneg or unit (corrected estimate)");
  density->add_option("--bandwidth", cfg.bandwidth, "Bandwidth (default: Silverman)");
  density->add_option("--grid-lo", cfg.grid_lo, "Grid start");
  density->add_option("--grid-hi", cfg.grid_hi, "Grid end");
  density->add_option("--grid-points", cfg.grid_points, "Grid size");
  density->add_option("--histogram", cfg.histogram_out, "Also write a histogram CSV here");
  density->add_option("--bins", cfg.bins, "Histogram bins (default: Sturges)");
  add_out(density);

  auto* ranges = app.add_subcommand("ranges", "Risk ranges (or quantiles) of a sample");
  add_values(ranges);
  ranges->add_option("--quantiles", cfg.quantiles, "Report these quantile levels instead of ranges")
    ->delimiter(',');
  add_out(ranges);

  auto* escalate = app.add_subcommand("escalate", "Risk escalation estimate for observed attributes");
  add_catalog(escalate, true);
  escalate->add_option("--sim", cfg.sim, "Simulated pairs CSV (x_sim,y_sim,...)")->required();
  escalate->add_option("--attributes", cfg.attributes, "Comma-separated attribute names")->required();
  escalate->add_option("--window-lo", cfg.window_lo, "Window below x0");
  escalate->add_option("--window-hi", cfg.window_hi, "Window above x0");
  escalate->add_option("--threshold", cfg.threshold, "Quantile level");
  escalate->add_option("--min-support", cfg.min_support, "Minimum pairs in the window");
  escalate->add_option("--format", cfg.format, "text or json");
  add_out(escalate);

  auto* demo = app.add_subcommand("demo-data", "Generate a synthetic report matrix");
  add_catalog(demo, false);
  demo->add_option("--n-reports", cfg.n_reports, "Number of reports");
  demo->add_option("--seed", cfg.seed, "Random seed");
  demo->add_option("--write-catalog", cfg.write_catalog, "Also write the bundled catalog here");
  add_out(demo);

  try {
    auto args = expand_config(raw_args);
    std::vector<std::string> storage{ "saferisk" };
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
      argv.push_back(s.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        app.exit(e, out, err);
        return kSuccess;
      }
      err << "error: " << e.what() << '\n';
      return kValidationError;
    }

    if (attributes->parsed())
      return cmd_attributes(*attributes, cfg, out);
    if (reports->parsed())
      return cmd_reports(*reports, cfg, out, err);
    if (simulate->parsed())
      return cmd_simulate(*simulate, cfg, out, err);
    if (density->parsed())
      return cmd_density(*density, cfg, out);
    if (ranges->parsed())
      return cmd_ranges(*ranges, cfg, out);
    if (escalate->parsed())
      return cmd_escalate(*escalate, cfg, out);
    if (demo->parsed())
      return cmd_demo_data(*demo, cfg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

} // namespace saferisk::cli
