#pragma once

// Gaussian kernel density estimation with Silverman's bandwidth, a
// transformation-based boundary correction, and plot-data exports.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace saferisk {

enum class Support
{
  real_line,
  nonneg_halfline, // corrected through log
  unit_interval    // corrected through the inverse normal CDF
};

std::string_view to_string(Support support);
Support parse_support(std::string_view text);

/// h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5), sd with the n-1 denominator and
/// quartiles by linear interpolation. When the IQR is zero but the sample is
/// not constant, the standard deviation alone is used.
double silverman_bandwidth(std::span<const double> sample);

struct CorrectedDensity
{
  double value = 0.0;
  bool boundary = false; // x was outside the open support
};

class KdeModel
{
public:
  /// Explicit bandwidth. For a bounded support every observation must lie in
  /// the open support; the transformed-space bandwidth is then chosen by
  /// Silverman's rule on the transformed observations.
  KdeModel(std::vector<double> observations, double bandwidth, Support support = Support::real_line);

  /// Bandwidth from Silverman's rule.
  static KdeModel fit(std::vector<double> observations, Support support = Support::real_line);

  std::span<const double> observations() const { return observations_; }
  double bandwidth() const { return bandwidth_; }
  Support support() const { return support_; }
  /// Bandwidth used in the transformed space (equals bandwidth() on the real line).
  double transformed_bandwidth() const { return transformed_bandwidth_; }
  std::span<const double> transformed_observations() const { return transformed_; }

private:
  std::vector<double> observations_;
  double bandwidth_;
  Support support_;
  std::vector<double> transformed_;
  double transformed_bandwidth_;
};

/// Plain Gaussian KDE: (1 / (n h sqrt(2 pi))) * sum_i exp(-((x_i - x) / h)^2 / 2).
double kde_pdf(const KdeModel& model, double x);

/// Boundary-corrected estimate f_T(T(x)) * |T'(x)|, where f_T is the KDE of
/// the transformed observations. On the real line this is kde_pdf.
CorrectedDensity kde_pdf_corrected(const KdeModel& model, double x);

/// (x - min) / (max - min). Throws ValidationError on a constant sample.
std::vector<double> rescale(std::span<const double> sample);

struct DensityGrid
{
  std::vector<double> x;
  std::vector<double> density;

  double trapezoid() const;
  std::string to_csv() const; // x,density
};

/// n_points values from lo to hi inclusive. Evenly spaced in x, except for a
/// corrected estimate on a bounded support: there the points are evenly spaced
/// in the transformed coordinate and the range is clipped to the open support.
DensityGrid density_grid(const KdeModel& model, double lo, double hi, std::size_t n_points, bool corrected);

/// Range covering the estimate: data range +/- 3 bandwidths for the plain
/// estimator; for the corrected estimator the open support clipped to the
/// back-transformed data range +/- 3 transformed bandwidths.
std::pair<double, double> default_grid_range(const KdeModel& model, bool corrected);

inline constexpr std::size_t kDefaultGridPoints = 512;

struct HistogramBin
{
  double lo = 0;
  double hi = 0;
  std::size_t count = 0;
};

/// Equal-width bins over [min, max]; the last bin is closed. `bins == 0`
/// selects Sturges' rule.
std::vector<HistogramBin> histogram(std::span<const double> sample, std::size_t bins = 0);
std::string histogram_csv(std::span<const HistogramBin> bins); // bin_lo,bin_hi,count

} // namespace saferisk
