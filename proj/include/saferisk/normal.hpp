#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace saferisk {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

inline double normal_pdf(double z)
{
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Inverse of normal_cdf on the open interval (0, 1).
inline double normal_quantile(double p)
{
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

} // namespace saferisk
