#pragma once

// Smoothed bootstrap generators with variance correction.
//
// One draw: pick an observation i uniformly, add Gaussian noise with standard
// deviation h (the Silverman bandwidth), and shrink towards the sample mean
//
//   x_sim = mean + (x_i - mean + eps) / sqrt(1 + h^2 / var)
//
// so the synthetic sample keeps the mean and variance of the source. The
// bivariate generator draws one index per pair and perturbs both coordinates
// independently, which carries the dependence structure over.
//
// Parallel streams: with `streams = k` the requested count is split into k
// contiguous blocks; block j gets n_sim / k draws (the first n_sim % k blocks
// one extra) from a 64-bit Mersenne Twister seeded with stream_seed(seed, j).
// Output is the concatenation in block order, so results depend on
// (input, seed, streams, negatives) only.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace saferisk {

enum class NegativePolicy
{
  reject, // redraw until the value (or both pair coordinates) is >= 0
  keep
};

std::string_view to_string(NegativePolicy policy);
NegativePolicy parse_negative_policy(std::string_view text);

struct GeneratorConfig
{
  std::size_t n_sim = 100000;
  std::uint64_t seed = 1;
  NegativePolicy negatives = NegativePolicy::reject;
  std::size_t streams = 1;

  /// Throws ValidationError unless n_sim >= 1 and streams >= 1.
  void validate() const;
};

/// Consecutive rejected draws after which a generator gives up.
inline constexpr std::size_t kMaxConsecutiveRejects = 1000000;

/// SplitMix64 finaliser of seed + (stream + 1) * golden-ratio increment.
std::uint64_t stream_seed(std::uint64_t seed, std::size_t stream);

/// Paired sample of real-outcome (x) and worst-outcome (y) risk.
struct RiskPairSample
{
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  /// Throws ValidationError when the coordinate vectors differ in length.
  void validate() const;
};

/// rank(x_i) / (n + 1) with average ranks for ties.
std::vector<double> rank_transform(std::span<const double> sample);

/// Rank pseudo-observations of both margins.
RiskPairSample pseudo_rank(const RiskPairSample& pairs);

/// Standard normal CDF of each coordinate, clamped to the open unit square.
/// Values far from the origin saturate; standardise first if uniform margins
/// are wanted.
RiskPairSample pseudo_normal(const RiskPairSample& pairs);

std::vector<double> smoothed_bootstrap_uni(std::span<const double> sample, const GeneratorConfig& cfg);

RiskPairSample smoothed_bootstrap_biv(const RiskPairSample& pairs, const GeneratorConfig& cfg);

} // namespace saferisk
