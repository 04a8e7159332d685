#pragma once

#include <cstddef>
#include <span>

namespace shks {

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const noexcept { return 0.5 * (high - low); }
};

/// 95% Wilson score interval for `successes` out of `trials` (trials >= 1).
Interval wilson_interval(std::size_t successes, std::size_t trials);

/// Least-squares slope of y against x; needs two distinct x values.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x); every value must be positive.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct MeanEstimate {
  double mean = 0.0;
  /// Standard error of the mean (sample standard deviation / sqrt(n)); 0 for n < 2.
  double std_error = 0.0;
};

MeanEstimate mean_with_stderr(std::span<const double> values);

}  // namespace shks
