#include "saferisk/stats.hpp"

#include "saferisk/error.hpp"

#include <algorithm>
#include <cmath>

namespace saferisk {

double mean(std::span<const double> values)
{
  if (values.empty())
    throw ValidationError("mean of an empty sample");
  // two-pass for accuracy on large samples
  double sum = 0.0;
  for (double v : values)
    sum += v;
  double m = sum / static_cast<double>(values.size());
  double corr = 0.0;
  for (double v : values)
    corr += v - m;
  return m + corr / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values)
{
  if (values.size() < 2)
    throw ValidationError("variance needs at least two values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values)
    ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

double quantile_sorted(std::span<const double> sorted, double p)
{
  if (sorted.empty())
    throw ValidationError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("quantile level must be in [0, 1]");
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size() || frac == 0.0)
    return sorted[lo];
  return std::min(sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]), sorted[lo + 1]);
}

std::vector<double> sorted_copy(std::span<const double> values)
{
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace saferisk
