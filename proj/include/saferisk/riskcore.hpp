#pragma once

// Attribute-level and report-level risk.
//
// All values are unitless and kept unrounded; display_round() is applied only
// when printing.

#include "saferisk/datamodel.hpp"

#include <span>
#include <string>
#include <vector>

namespace saferisk {

/// Relative risk per attribute, aligned with the catalog order.
struct RelativeRiskVector
{
  Basis basis = Basis::real;
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Relative risk of a named attribute; throws ValidationError if unknown.
  double at(std::string_view name) const;
};

/// One risk value per report.
struct RiskSample
{
  Basis basis = Basis::real;
  std::vector<double> values;
};

/// Rounds up to the nearest integer, ignoring floating-point noise of
/// relative size below 1e-9.
double display_round(double value);

/// Severity-weighted injury count: sum over levels of count * score.
double attribute_total_risk(const SeverityCounts& counts, const SeverityScale& scale);

/// total_risk / exposure. Throws ValidationError unless exposure is in (0, 1].
double attribute_relative_risk(double total_risk, double exposure);

RelativeRiskVector catalog_relative_risks(const AttributeCatalog& catalog, Basis basis);

/// Risk of each report: the sum of the relative risks of the attributes it
/// contains. Matrix columns are matched to `rr` by name.
RiskSample report_risks(const ReportMatrix& matrix, const RelativeRiskVector& rr);

/// Risk of a situation described by attribute names. Throws ValidationError
/// listing every unknown name, or when the list is empty.
double situation_risk(const RelativeRiskVector& rr, std::span<const std::string> attributes);

struct EscalationDelta
{
  std::string name;
  double rr_real = 0;
  double rr_worst = 0;
  double delta = 0; // rr_worst - rr_real
};

/// Worst-minus-real relative risk per attribute, sorted by delta descending
/// with ties broken by name ascending.
std::vector<EscalationDelta> escalation_deltas(const AttributeCatalog& catalog);

/// `name,rr_real,rr_worst,delta` in catalog order. Values are display-rounded
/// unless `precise` is set.
std::string relative_risks_csv(const AttributeCatalog& catalog, bool precise = false);

/// `report_index,risk_real,risk_worst` at full precision.
std::string report_risks_csv(const RiskSample& real, const RiskSample& worst);

} // namespace saferisk
