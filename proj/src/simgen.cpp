#include "saferisk/simgen.hpp"

#include "saferisk/density.hpp"
#include "saferisk/error.hpp"
#include "saferisk/normal.hpp"
#include "saferisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace saferisk {

namespace {

// Location-scale parameters of one margin of the generator.
struct Margin
{
  double mean = 0;
  double bandwidth = 0;
  double shrink = 1; // 1 / sqrt(1 + h^2 / var)

  explicit Margin(std::span<const double> sample)
  {
    mean = saferisk::mean(sample);
    const double var = sample_variance(sample);
    bandwidth = silverman_bandwidth(sample);
    shrink = 1.0 / std::sqrt(1.0 + bandwidth * bandwidth / var);
  }

  double draw(double xi, std::normal_distribution<double>& normal, std::mt19937_64& rng) const
  {
    const double eps = bandwidth * normal(rng);
    return mean + (xi - mean + eps) * shrink;
  }
};

struct Block
{
  std::size_t offset;
  std::size_t count;
  std::uint64_t seed;
};

std::vector<Block> partition(const GeneratorConfig& cfg)
{
  std::vector<Block> blocks;
  const std::size_t base = cfg.n_sim / cfg.streams;
  const std::size_t extra = cfg.n_sim % cfg.streams;
  std::size_t offset = 0;
  for (std::size_t j = 0; j < cfg.streams; ++j) {
    const std::size_t count = base + (j < extra ? 1 : 0);
    blocks.push_back({ offset, count, stream_seed(cfg.seed, j) });
    offset += count;
  }
  return blocks;
}

// Runs fn(block) for every block, on its own thread when there are several.
template<typename Fn>
void run_blocks(const std::vector<Block>& blocks, Fn fn)
{
  if (blocks.size() == 1) {
    fn(blocks.front());
    return;
  }
  std::vector<std::exception_ptr> errors(blocks.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j)
      workers.emplace_back([&, j] {
        try {
          fn(blocks[j]);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

void reject_guard(std::size_t& rejects)
{
  if (++rejects > kMaxConsecutiveRejects)
    throw ValidationError("smoothed bootstrap: too many consecutive negative draws");
}

double clamp_open_unit(double p)
{
  return std::clamp(p, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

} // namespace

std::string_view to_string(NegativePolicy policy)
{
  return policy == NegativePolicy::reject ? "reject" : "keep";
}

NegativePolicy parse_negative_policy(std::string_view text)
{
  if (text == "reject")
    return NegativePolicy::reject;
  if (text == "keep")
    return NegativePolicy::keep;
  throw ValidationError("unknown negatives mode '" + std::string(text) + "' (expected reject or keep)");
}

void GeneratorConfig::validate() const
{
  if (n_sim < 1)
    throw ValidationError("n_sim must be at least 1");
  if (streams < 1)
    throw ValidationError("streams must be at least 1");
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t stream)
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(stream) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void RiskPairSample::validate() const
{
  if (x.size() != y.size())
    throw ValidationError("pair sample coordinates differ in length");
}

std::vector<double> rank_transform(std::span<const double> sample)
{
  const std::size_t n = sample.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sample[a] < sample[b]; });
  std::vector<double> out(n);
  const double denom = static_cast<double>(n) + 1.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && sample[order[j + 1]] == sample[order[i]])
      ++j;
    // 1-based ranks i+1 .. j+1 share their average
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k)
      out[order[k]] = rank / denom;
    i = j + 1;
  }
  return out;
}

RiskPairSample pseudo_rank(const RiskPairSample& pairs)
{
  pairs.validate();
  return { rank_transform(pairs.x), rank_transform(pairs.y) };
}

RiskPairSample pseudo_normal(const RiskPairSample& pairs)
{
  pairs.validate();
  RiskPairSample out;
  out.x.reserve(pairs.size());
  out.y.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.x.push_back(clamp_open_unit(normal_cdf(pairs.x[i])));
    out.y.push_back(clamp_open_unit(normal_cdf(pairs.y[i])));
  }
  return out;
}

std::vector<double> smoothed_bootstrap_uni(std::span<const double> sample, const GeneratorConfig& cfg)
{
  cfg.validate();
  const Margin margin(sample);
  const bool reject = cfg.negatives == NegativePolicy::reject;
  std::vector<double> out(cfg.n_sim);

  run_blocks(partition(cfg), [&](const Block& block) {
    std::mt19937_64 rng(block.seed);
    std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t rejects = 0;
    for (std::size_t k = 0; k < block.count;) {
      const double v = margin.draw(sample[pick(rng)], normal, rng);
      if (reject && v < 0.0) {
        reject_guard(rejects);
        continue;
      }
      rejects = 0;
      out[block.offset + k++] = v;
    }
  });
  return out;
}

RiskPairSample smoothed_bootstrap_biv(const RiskPairSample& pairs, const GeneratorConfig& cfg)
{
  cfg.validate();
  pairs.validate();
  const Margin mx(pairs.x);
  const Margin my(pairs.y);
  const bool reject = cfg.negatives == NegativePolicy::reject;
  RiskPairSample out;
  out.x.resize(cfg.n_sim);
  out.y.resize(cfg.n_sim);

  run_blocks(partition(cfg), [&](const Block& block) {
    std::mt19937_64 rng(block.seed);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t rejects = 0;
    for (std::size_t k = 0; k < block.count;) {
      // one index for both coordinates
      const std::size_t i = pick(rng);
      const double x = mx.draw(pairs.x[i], normal, rng);
      const double y = my.draw(pairs.y[i], normal, rng);
      if (reject && (x < 0.0 || y < 0.0)) {
        reject_guard(rejects);
        continue;
      }
      rejects = 0;
      out.x[block.offset + k] = x;
      out.y[block.offset + k] = y;
      ++k;
    }
  });
  return out;
}

} // namespace saferisk
