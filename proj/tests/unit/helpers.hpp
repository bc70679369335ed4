#pragma once

#include "saferisk/csv.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testutil {

inline std::filesystem::path tmp_dir(const std::string& name)
{
  auto dir = std::filesystem::path(SAFERISK_TEST_TMP) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_tmp(const std::string& dir, const std::string& file, const std::string& text)
{
  auto path = tmp_dir(dir) / file;
  saferisk::csv::write_file(path, text);
  return path;
}

// Three-attribute catalog with the standard severity scale.
inline const char* kSmallCatalog =
  "name,report_count,exposure_pct,real_s1,real_s2,real_s3,real_s4,real_s5,"
  "worst_s1,worst_s2,worst_s3,worst_s4,worst_s5\n"
  "ladder,4,50,1,2,1,0,0,0,1,2,1,0\n"
  "lumber,3,25,3,0,0,0,0,1,1,1,0,0\n"
  "crane,2,10,0,1,1,0,0,0,0,1,0,1\n";

// Naive Gaussian kernel sum.
inline double naive_kde(const std::vector<double>& xs, double h, double x)
{
  double s = 0;
  for (double xi : xs) {
    const double z = (xi - x) / h;
    s += std::exp(-0.5 * z * z);
  }
  return s / (xs.size() * h * std::sqrt(2.0 * M_PI));
}

// Hand-rolled linear interpolation quantile at position (n-1)p+1.
inline double naive_quantile(std::vector<double> xs, double p)
{
  std::sort(xs.begin(), xs.end());
  const double pos = (xs.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - lo) * (xs[hi] - xs[lo]);
}

// O(n^2) Kendall tau-a.
inline double naive_tau(const std::vector<double>& x, const std::vector<double>& y)
{
  const std::size_t n = x.size();
  long long s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = (x[i] - x[j]) * (y[i] - y[j]);
      s += (a > 0) - (a < 0);
    }
  return static_cast<double>(s) / (0.5 * n * (n - 1.0));
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& f)
{
  double s = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

// Gamma(2, 1)-like right-skewed sample.
inline std::vector<double> skewed_sample(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(2.0, 1.0);
  std::vector<double> xs(n);
  for (auto& v : xs)
    v = g(rng);
  return xs;
}

} // namespace testutil
