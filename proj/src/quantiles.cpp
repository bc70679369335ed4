#include "saferisk/quantiles.hpp"

#include "saferisk/error.hpp"
#include "saferisk/stats.hpp"

#include <algorithm>
#include <cmath>

namespace saferisk {

double empirical_quantile(std::span<const double> sample, double p)
{
  if (sample.empty())
    throw ValidationError("quantile of an empty sample");
  return quantile_sorted(sorted_copy(sample), p);
}

double return_period_quantile(std::span<const double> sample, double period)
{
  if (!(period > 1.0) || !std::isfinite(period))
    throw ValidationError("return period must be greater than 1");
  return empirical_quantile(sample, 1.0 - 1.0 / period);
}

std::string_view to_string(RiskLevel level)
{
  switch (level) {
    case RiskLevel::low:
      return "low";
    case RiskLevel::medium:
      return "medium";
    case RiskLevel::high:
      return "high";
    case RiskLevel::very_high:
      return "very high";
    case RiskLevel::extreme:
      return "extreme";
  }
  return "?";
}

RiskRanges::RiskRanges(const std::array<double, 6>& bp, Basis b)
  : basis(b)
  , breakpoints(bp)
{
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] >= breakpoints[k - 1]))
      throw ValidationError("risk range breakpoints must be non-decreasing");
}

RiskRanges build_ranges(std::span<const double> sample, Basis basis)
{
  if (sample.empty())
    throw ValidationError("cannot build ranges from an empty sample");
  auto sorted = sorted_copy(sample);
  std::array<double, 6> bp{};
  for (std::size_t k = 0; k < bp.size(); ++k)
    bp[k] = quantile_sorted(sorted, RiskRanges::kLevels[k]);
  return RiskRanges(bp, basis);
}

RiskLevel classify(double value, const RiskRanges& ranges)
{
  // last level whose lower breakpoint is <= value
  const auto& bp = ranges.breakpoints;
  const auto it = std::upper_bound(bp.begin() + 1, bp.begin() + 5, value);
  return static_cast<RiskLevel>(it - (bp.begin() + 1));
}

void EscalationQuery::validate() const
{
  if (!(window_lo >= 0.0) || !(window_hi >= 0.0))
    throw ValidationError("escalation window widths must be non-negative");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ValidationError("escalation threshold must be in (0, 1)");
  if (!std::isfinite(x0))
    throw ValidationError("x0 must be finite");
}

EscalationEstimate escalation_estimate(const RiskPairSample& pairs,
                                       const EscalationQuery& query,
                                       const RiskRanges& worst_ranges)
{
  pairs.validate();
  query.validate();
  const double lo = query.x0 - query.window_lo;
  const double hi = query.x0 + query.window_hi;
  std::vector<double> ys;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs.x[i] > lo && pairs.x[i] < hi)
      ys.push_back(pairs.y[i]);
  if (ys.empty() || ys.size() < query.min_support)
    throw InsufficientSupport(ys.size(), std::max<std::size_t>(query.min_support, 1));
  std::sort(ys.begin(), ys.end());
  EscalationEstimate est;
  est.value = quantile_sorted(ys, query.threshold);
  est.level = classify(est.value, worst_ranges);
  est.support = ys.size();
  return est;
}

} // namespace saferisk
