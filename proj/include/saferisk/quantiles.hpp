#pragma once

// Quantiles, return periods, risk ranges and the conditional-quantile
// escalation query.

#include "saferisk/datamodel.hpp"
#include "saferisk/simgen.hpp"

#include <array>
#include <span>
#include <string>

namespace saferisk {

/// Order statistic at 1-based position (n-1)p + 1 with linear
/// interpolation; Q(0) is the minimum and Q(1) the maximum.
double empirical_quantile(std::span<const double> sample, double p);

/// Q(1 - 1/T). Throws ValidationError unless T > 1.
double return_period_quantile(std::span<const double> sample, double period);

enum class RiskLevel
{
  low,
  medium,
  high,
  very_high,
  extreme
};

std::string_view to_string(RiskLevel level);

/// Breakpoints at quantile levels 0, 0.25, 0.5, 0.75, 0.99 and 1. Level k
/// covers [breakpoint k, breakpoint k+1); extreme is unbounded above.
struct RiskRanges
{
  static constexpr std::array<double, 6> kLevels = { 0.0, 0.25, 0.50, 0.75, 0.99, 1.0 };

  Basis basis = Basis::real;
  std::array<double, 6> breakpoints{};

  RiskRanges() = default;
  /// Throws ValidationError unless breakpoints are non-decreasing.
  RiskRanges(const std::array<double, 6>& breakpoints, Basis basis);
};

RiskRanges build_ranges(std::span<const double> sample, Basis basis);

RiskLevel classify(double value, const RiskRanges& ranges);

struct EscalationQuery
{
  double x0 = 0;
  double window_lo = 5;
  double window_hi = 5;
  double threshold = 0.8;
  std::size_t min_support = 30;

  void validate() const;
};

struct EscalationEstimate
{
  double value = 0;
  RiskLevel level = RiskLevel::low;
  std::size_t support = 0;
};

/// Quantile at `threshold` of the y-values of pairs with
/// x0 - window_lo < x < x0 + window_hi, classified against `worst_ranges`.
/// Throws InsufficientSupport when fewer than min_support pairs qualify.
EscalationEstimate escalation_estimate(const RiskPairSample& pairs,
                                       const EscalationQuery& query,
                                       const RiskRanges& worst_ranges);

} // namespace saferisk
