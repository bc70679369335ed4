#include "saferisk/copula.hpp"

#include "saferisk/csv.hpp"
#include "saferisk/density.hpp"
#include "saferisk/error.hpp"
#include "saferisk/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace saferisk {

double CopulaGrid::integral() const
{
  double sum = 0.0;
  for (double d : density)
    sum += d;
  return sum / static_cast<double>(m * m);
}

std::string CopulaGrid::to_csv() const
{
  std::ostringstream os;
  os << "u,v,density\n";
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l)
      os << csv::format_double(coords[k]) << ',' << csv::format_double(coords[l]) << ','
         << csv::format_double(at(k, l)) << '\n';
  return os.str();
}

CopulaGrid empirical_copula_density(const RiskPairSample& pairs, std::size_t m)
{
  pairs.validate();
  if (m < 2)
    throw ValidationError("copula grid needs m >= 2");
  if (pairs.size() < 10)
    throw ValidationError("copula density needs at least 10 pairs");

  const std::size_t n = pairs.size();
  auto pseudo = pseudo_rank(pairs);
  std::vector<double> zx(n), zy(n);
  for (std::size_t i = 0; i < n; ++i) {
    zx[i] = normal_quantile(pseudo.x[i]);
    zy[i] = normal_quantile(pseudo.y[i]);
  }
  const double hx = silverman_bandwidth(zx);
  const double hy = silverman_bandwidth(zy);

  CopulaGrid grid;
  grid.m = m;
  grid.coords.resize(m);
  std::vector<double> t(m), phi(m);
  for (std::size_t k = 0; k < m; ++k) {
    grid.coords[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    t[k] = normal_quantile(grid.coords[k]);
    phi[k] = normal_pdf(t[k]);
  }

  // kernel weights of every observation at every grid coordinate
  auto weights = [&](const std::vector<double>& z, double h) {
    std::vector<double> w(m * n);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const double d = (t[k] - z[i]) / h;
        w[k * n + i] = std::exp(-0.5 * d * d);
      }
    return w;
  };
  const auto wx = weights(zx, hx);
  const auto wy = weights(zy, hy);

  const double norm = static_cast<double>(n) * (hx * hy) * (2.0 * std::numbers::pi);
  grid.density.resize(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    const double* a = wx.data() + k * n;
    for (std::size_t l = 0; l < m; ++l) {
      const double* b = wy.data() + l * n;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        sum += a[i] * b[i];
      grid.density[k * m + l] = (sum / norm) / (phi[k] * phi[l]);
    }
  }
  return grid;
}

namespace {

// Sorts v ascending, returning the number of strict inversions.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi)
{
  if (hi - lo < 2)
    return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid)
    buf[k++] = v[i++];
  while (j < hi)
    buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::uint64_t tied_pairs(const std::vector<double>& sorted)
{
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i])
      ++j;
    const std::uint64_t t = j - i;
    total += t * (t - 1) / 2;
    i = j;
  }
  return total;
}

} // namespace

double kendall_tau(const RiskPairSample& pairs)
{
  pairs.validate();
  const std::size_t n = pairs.size();
  if (n < 2)
    throw ValidationError("Kendall's tau needs at least two pairs");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pairs.x[a] != pairs.x[b])
      return pairs.x[a] < pairs.x[b];
    return pairs.y[a] < pairs.y[b];
  });

  std::uint64_t ties_x = 0, ties_xy = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && pairs.x[order[j]] == pairs.x[order[i]])
      ++j;
    const std::uint64_t t = j - i;
    ties_x += t * (t - 1) / 2;
    for (std::size_t a = i; a < j;) {
      std::size_t b = a + 1;
      while (b < j && pairs.y[order[b]] == pairs.y[order[a]])
        ++b;
      const std::uint64_t u = b - a;
      ties_xy += u * (u - 1) / 2;
      a = b;
    }
    i = j;
  }

  std::vector<double> y(n), buf(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = pairs.y[order[i]];
  const std::uint64_t swaps = merge_count(y, buf, 0, n);
  const std::uint64_t ties_y = tied_pairs(y);

  const auto total = static_cast<std::int64_t>(static_cast<std::uint64_t>(n) * (n - 1) / 2);
  const std::int64_t numerator = total - static_cast<std::int64_t>(ties_x) -
                                 static_cast<std::int64_t>(ties_y) + static_cast<std::int64_t>(ties_xy) -
                                 2 * static_cast<std::int64_t>(swaps);
  return static_cast<double>(numerator) / static_cast<double>(total);
}

double tail_dependence_summary(const RiskPairSample& pairs, double q)
{
  pairs.validate();
  if (!(q > 0.0 && q < 1.0))
    throw ValidationError("tail level q must be in (0, 1)");
  if (static_cast<double>(pairs.size()) * (1.0 - q) < 5.0)
    throw ValidationError("tail level too extreme for the sample size (need n(1-q) >= 5)");
  auto pseudo = pseudo_rank(pairs);
  std::size_t above = 0, both = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pseudo.x[i] > q) {
      ++above;
      if (pseudo.y[i] > q)
        ++both;
    }
  }
  if (above == 0)
    throw ValidationError("no pseudo-observations above the tail level");
  return static_cast<double>(both) / static_cast<double>(above);
}

} // namespace saferisk
