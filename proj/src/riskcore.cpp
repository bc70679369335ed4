#include "saferisk/riskcore.hpp"

#include "saferisk/csv.hpp"
#include "saferisk/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace saferisk {

double RelativeRiskVector::at(std::string_view name) const
{
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      return values[i];
  throw ValidationError("unknown attribute '" + std::string(name) + "'");
}

double display_round(double value)
{
  const double tol = 1e-9 * std::max(1.0, std::abs(value));
  return std::ceil(value - tol);
}

double attribute_total_risk(const SeverityCounts& counts, const SeverityScale& scale)
{
  double total = 0.0;
  for (std::size_t s = 0; s < kSeverityLevels; ++s)
    total += static_cast<double>(counts[s]) * scale[s];
  return total;
}

double attribute_relative_risk(double total_risk, double exposure)
{
  if (!(exposure > 0.0 && exposure <= 1.0))
    throw ValidationError("exposure must be in (0, 1]");
  return total_risk / exposure;
}

RelativeRiskVector catalog_relative_risks(const AttributeCatalog& catalog, Basis basis)
{
  RelativeRiskVector rr;
  rr.basis = basis;
  rr.names.reserve(catalog.size());
  rr.values.reserve(catalog.size());
  for (const auto& rec : catalog.records()) {
    rr.names.push_back(rec.name);
    rr.values.push_back(attribute_relative_risk(
      attribute_total_risk(rec.counts(basis), catalog.scale()), rec.exposure));
  }
  return rr;
}

RiskSample report_risks(const ReportMatrix& matrix, const RelativeRiskVector& rr)
{
  if (rr.names.size() != rr.values.size())
    throw ValidationError("relative risk vector has mismatched names and values");
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < rr.names.size(); ++i)
    index.emplace(rr.names[i], i);

  auto names = matrix.column_names();
  std::vector<double> column_rr(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    auto it = index.find(names[c]);
    if (it == index.end())
      throw ValidationError("dimension mismatch: matrix column '" + names[c] +
                            "' has no relative risk");
    column_rr[c] = rr.values[it->second];
  }

  RiskSample sample;
  sample.basis = rr.basis;
  sample.values.resize(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    auto row = matrix.row(r);
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c])
        sum += column_rr[c];
    sample.values[r] = sum;
  }
  return sample;
}

double situation_risk(const RelativeRiskVector& rr, std::span<const std::string> attributes)
{
  if (attributes.empty())
    throw ValidationError("no attributes given");
  double sum = 0.0;
  std::vector<std::string> unknown;
  for (const auto& a : attributes) {
    auto it = std::find(rr.names.begin(), rr.names.end(), a);
    if (it == rr.names.end())
      unknown.push_back(a);
    else
      sum += rr.values[static_cast<std::size_t>(it - rr.names.begin())];
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown)
      list += (list.empty() ? "'" : ", '") + u + "'";
    throw ValidationError("unknown attribute(s): " + list);
  }
  return sum;
}

std::vector<EscalationDelta> escalation_deltas(const AttributeCatalog& catalog)
{
  auto real = catalog_relative_risks(catalog, Basis::real);
  auto worst = catalog_relative_risks(catalog, Basis::worst);
  std::vector<EscalationDelta> out;
  out.reserve(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i)
    out.push_back({ catalog[i].name, real.values[i], worst.values[i],
                    worst.values[i] - real.values[i] });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.delta != b.delta)
      return a.delta > b.delta;
    return a.name < b.name;
  });
  return out;
}

std::string relative_risks_csv(const AttributeCatalog& catalog, bool precise)
{
  auto real = catalog_relative_risks(catalog, Basis::real);
  auto worst = catalog_relative_risks(catalog, Basis::worst);
  auto fmt = [precise](double v) {
    return precise ? csv::format_double(v) : csv::format_double(display_round(v));
  };
  std::ostringstream os;
  os << "name,rr_real,rr_worst,delta\n";
  for (std::size_t i = 0; i < catalog.size(); ++i)
    os << csv::escape(catalog[i].name) << ',' << fmt(real.values[i]) << ','
       << fmt(worst.values[i]) << ',' << fmt(worst.values[i] - real.values[i]) << '\n';
  return os.str();
}

std::string report_risks_csv(const RiskSample& real, const RiskSample& worst)
{
  if (real.values.size() != worst.values.size())
    throw ValidationError("real and worst risk samples differ in length");
  std::ostringstream os;
  os << "report_index,risk_real,risk_worst\n";
  for (std::size_t r = 0; r < real.values.size(); ++r)
    os << r << ',' << csv::format_double(real.values[r]) << ','
       << csv::format_double(worst.values[r]) << '\n';
  return os.str();
}

} // namespace saferisk
