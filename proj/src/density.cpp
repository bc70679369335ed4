#include "saferisk/density.hpp"

#include "saferisk/csv.hpp"
#include "saferisk/error.hpp"
#include "saferisk/normal.hpp"
#include "saferisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace saferisk {

namespace {

double to_transformed(Support support, double x)
{
  switch (support) {
    case Support::nonneg_halfline:
      return std::log(x);
    case Support::unit_interval:
      return normal_quantile(x);
    case Support::real_line:
      break;
  }
  return x;
}

double from_transformed(Support support, double t)
{
  switch (support) {
    case Support::nonneg_halfline:
      return std::exp(t);
    case Support::unit_interval:
      return normal_cdf(t);
    case Support::real_line:
      break;
  }
  return t;
}

bool inside_support(Support support, double x)
{
  switch (support) {
    case Support::nonneg_halfline:
      return x > 0.0 && std::isfinite(x);
    case Support::unit_interval:
      return x > 0.0 && x < 1.0;
    case Support::real_line:
      break;
  }
  return std::isfinite(x);
}

// |T'(x)|
double jacobian(Support support, double x, double t)
{
  switch (support) {
    case Support::nonneg_halfline:
      return 1.0 / x;
    case Support::unit_interval:
      return 1.0 / normal_pdf(t);
    case Support::real_line:
      break;
  }
  return 1.0;
}

double gaussian_sum(std::span<const double> obs, double h, double x)
{
  double sum = 0.0;
  for (double xi : obs) {
    const double z = (xi - x) / h;
    sum += std::exp(-0.5 * z * z);
  }
  return sum * kInvSqrt2Pi / (static_cast<double>(obs.size()) * h);
}

} // namespace

std::string_view to_string(Support support)
{
  switch (support) {
    case Support::nonneg_halfline:
      return "nonneg";
    case Support::unit_interval:
      return "unit";
    case Support::real_line:
      break;
  }
  return "real";
}

Support parse_support(std::string_view text)
{
  if (text == "real")
    return Support::real_line;
  if (text == "nonneg")
    return Support::nonneg_halfline;
  if (text == "unit")
    return Support::unit_interval;
  throw ValidationError("unknown support '" + std::string(text) + "' (expected real, nonneg or unit)");
}

double silverman_bandwidth(std::span<const double> sample)
{
  if (sample.size() < 2)
    throw ValidationError("bandwidth needs at least two observations");
  const double sd = std::sqrt(sample_variance(sample));
  if (!(sd > 0.0))
    throw ValidationError("zero dispersion: cannot choose a bandwidth for a constant sample");
  auto sorted = sorted_copy(sample);
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(sample.size()), -0.2);
}

KdeModel::KdeModel(std::vector<double> observations, double bandwidth, Support support)
  : observations_(std::move(observations))
  , bandwidth_(bandwidth)
  , support_(support)
  , transformed_bandwidth_(bandwidth)
{
  if (observations_.empty())
    throw ValidationError("density model needs at least one observation");
  if (!(bandwidth_ > 0.0 && std::isfinite(bandwidth_)))
    throw ValidationError("bandwidth must be positive");
  if (support_ != Support::real_line) {
    transformed_.reserve(observations_.size());
    for (double x : observations_) {
      if (!inside_support(support_, x))
        throw ValidationError("observation " + csv::format_double(x) + " lies outside the open " +
                              std::string(to_string(support_)) + " support");
      transformed_.push_back(to_transformed(support_, x));
    }
    transformed_bandwidth_ = silverman_bandwidth(transformed_);
  }
}

KdeModel KdeModel::fit(std::vector<double> observations, Support support)
{
  const double h = silverman_bandwidth(observations);
  return KdeModel(std::move(observations), h, support);
}

double kde_pdf(const KdeModel& model, double x)
{
  return gaussian_sum(model.observations(), model.bandwidth(), x);
}

CorrectedDensity kde_pdf_corrected(const KdeModel& model, double x)
{
  const auto support = model.support();
  if (support == Support::real_line)
    return { kde_pdf(model, x), false };
  if (!inside_support(support, x))
    return { 0.0, true };
  const double t = to_transformed(support, x);
  const double f = gaussian_sum(model.transformed_observations(), model.transformed_bandwidth(), t);
  return { f * jacobian(support, x, t), false };
}

std::vector<double> rescale(std::span<const double> sample)
{
  if (sample.empty())
    throw ValidationError("cannot rescale an empty sample");
  auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo))
    throw ValidationError("cannot rescale a constant sample");
  std::vector<double> out;
  out.reserve(sample.size());
  for (double x : sample)
    out.push_back((x - lo) / (hi - lo));
  return out;
}

double DensityGrid::trapezoid() const
{
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    area += 0.5 * (density[i] + density[i - 1]) * (x[i] - x[i - 1]);
  return area;
}

std::string DensityGrid::to_csv() const
{
  std::ostringstream os;
  os << "x,density\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << csv::format_double(x[i]) << ',' << csv::format_double(density[i]) << '\n';
  return os.str();
}

DensityGrid density_grid(const KdeModel& model, double lo, double hi, std::size_t n_points, bool corrected)
{
  if (n_points < 2)
    throw ValidationError("density grid needs at least 2 points");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ValidationError("density grid needs lo < hi");
  const bool bounded = corrected && model.support() != Support::real_line;
  if (bounded) {
    // keep the grid inside the open support
    const auto [a, b] = default_grid_range(model, true);
    if (lo <= 0.0)
      lo = a;
    if (model.support() == Support::unit_interval && hi >= 1.0)
      hi = b;
    if (!(lo < hi))
      throw ValidationError("density grid range lies outside the support");
  }
  DensityGrid grid;
  grid.x.resize(n_points);
  grid.density.resize(n_points);
  // bounded supports are gridded evenly in the transformed coordinate, where
  // the estimate is smooth; near the boundary the points bunch up in x
  const double t_lo = bounded ? to_transformed(model.support(), lo) : lo;
  const double t_hi = bounded ? to_transformed(model.support(), hi) : hi;
  const double step = (t_hi - t_lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    double x = lo;
    if (i + 1 == n_points)
      x = hi;
    else if (i > 0)
      x = bounded ? from_transformed(model.support(), t_lo + step * static_cast<double>(i))
                  : lo + step * static_cast<double>(i);
    grid.x[i] = x;
    grid.density[i] = corrected ? kde_pdf_corrected(model, x).value : kde_pdf(model, x);
  }
  return grid;
}

std::pair<double, double> default_grid_range(const KdeModel& model, bool corrected)
{
  if (!corrected || model.support() == Support::real_line) {
    auto [lo, hi] = std::minmax_element(model.observations().begin(), model.observations().end());
    const double pad = 3.0 * model.bandwidth();
    return { *lo - pad, *hi + pad };
  }
  auto t = model.transformed_observations();
  auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  const double pad = 3.0 * model.transformed_bandwidth();
  double a = from_transformed(model.support(), *lo - pad);
  double b = from_transformed(model.support(), *hi + pad);
  if (model.support() == Support::unit_interval)
    b = std::min(b, std::nextafter(1.0, 0.0));
  a = std::max(a, std::numeric_limits<double>::min());
  return { a, b };
}

std::vector<HistogramBin> histogram(std::span<const double> sample, std::size_t bins)
{
  if (sample.empty())
    throw ValidationError("histogram of an empty sample");
  if (bins == 0)
    bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(sample.size())))) + 1;
  auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = lo + width * static_cast<double>(b);
    out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double x : sample) {
    auto b = static_cast<std::size_t>((x - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  return out;
}

std::string histogram_csv(std::span<const HistogramBin> bins)
{
  std::ostringstream os;
  os << "bin_lo,bin_hi,count\n";
  for (const auto& b : bins)
    os << csv::format_double(b.lo) << ',' << csv::format_double(b.hi) << ',' << b.count << '\n';
  return os.str();
}

} // namespace saferisk
