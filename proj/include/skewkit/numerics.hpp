#pragma once

#include <cstdint>

namespace skewkit {

/// Inverse of the standard normal CDF for p in (0, 1).
/// Wichura's AS241 (PPND16) rational approximation, relative error ~1e-16.
/// Throws InvalidArgument outside (0, 1).
double normal_quantile(double p);

/// Two-sided critical value for a confidence level, e.g. 0.99 -> 2.5758...
double two_sided_z(double level);

/// log(k!) without touching lgamma's global sign state.
double log_factorial(std::uint64_t k);

}  // namespace skewkit
