#pragma once

// Nonparametric copula density on the unit square and dependence diagnostics.

#include "saferisk/simgen.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace saferisk {

/// m x m copula density values at coordinates (k + 0.5) / m.
struct CopulaGrid
{
  std::size_t m = 0;
  std::vector<double> coords;
  std::vector<double> density; // row-major: density[k * m + l] = c(coords[k], coords[l])

  double at(std::size_t k, std::size_t l) const { return density[k * m + l]; }
  /// Midpoint-rule integral over the unit square (each grid point owns a
  /// 1/m x 1/m cell).
  double integral() const;
  std::string to_csv() const; // u,v,density
};

inline constexpr std::size_t kDefaultCopulaGrid = 101;

/// Rank pseudo-observations are mapped through the inverse normal CDF, a
/// product Gaussian KDE with per-coordinate Silverman bandwidths is fitted
/// there, and the estimate is divided by phi(z_u) * phi(z_v) to return to
/// the unit square. Uses ranks only, so any strictly increasing transform of
/// a margin leaves the result unchanged.
CopulaGrid empirical_copula_density(const RiskPairSample& pairs, std::size_t m = kDefaultCopulaGrid);

/// Kendall's tau-a: (concordant - discordant) / (n choose 2), ties count as
/// neither. O(n log n).
double kendall_tau(const RiskPairSample& pairs);

/// Empirical P(V > q | U > q) on rank pseudo-observations.
double tail_dependence_summary(const RiskPairSample& pairs, double q);

} // namespace saferisk
