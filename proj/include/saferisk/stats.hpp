#pragma once

#include <span>
#include <vector>

namespace saferisk {

double mean(std::span<const double> values);

/// Variance with the n-1 denominator. Requires at least two values.
double sample_variance(std::span<const double> values);

/// Linear-interpolation quantile of an already sorted sample: the order
/// statistic at 1-based position (n-1)p + 1, interpolated between neighbours.
double quantile_sorted(std::span<const double> sorted, double p);

std::vector<double> sorted_copy(std::span<const double> values);

} // namespace saferisk
