#include "etsim/grid.hpp"

#include <cmath>
#include <string>

#include "etsim/errors.hpp"
#include "etsim/medium.hpp"

namespace etsim {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

FrequencyGrid::FrequencyGrid(std::size_t n_points, double center, double span)
    : n_(n_points), center_(center), span_(span) {
  if (!is_power_of_two(n_points) || n_points < kMinPoints) {
    throw InvalidArgument("FrequencyGrid: n_points must be a power of two >= 64, got " +
                          std::to_string(n_points));
  }
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw InvalidArgument("FrequencyGrid: span must be positive and finite");
  }
  if (!std::isfinite(center)) throw InvalidArgument("FrequencyGrid: center must be finite");
}

FrequencyGrid FrequencyGrid::sized_for(double center, double max_bandwidth, double max_width,
                                       double extra_duration) {
  if (!(max_bandwidth > 0.0) || !(max_width > 0.0) || extra_duration < 0.0) {
    throw InvalidArgument("FrequencyGrid::sized_for: bandwidth and width must be positive");
  }
  const double span = 16.0 * max_bandwidth;
  const double duration = 16.0 * max_width + extra_duration;
  const double needed = std::ceil(duration * span / (2.0 * std::numbers::pi));
  if (needed > static_cast<double>(std::size_t{1} << 26)) {
    throw AliasingError("FrequencyGrid::sized_for: required grid exceeds 2^26 points");
  }
  const auto n = next_power_of_two(std::max<std::size_t>(kMinPoints, static_cast<std::size_t>(needed)));
  return FrequencyGrid(n, center, span);
}

DispersiveMedium::DispersiveMedium(double alpha_, double beta_, double length_)
    : alpha(alpha_), beta(beta_), length(length_) {
  if (!(length_ >= 0.0) || !std::isfinite(length_)) {
    throw InvalidArgument("DispersiveMedium: length must be >= 0");
  }
  if (!std::isfinite(alpha_) || !std::isfinite(beta_)) {
    throw InvalidArgument("DispersiveMedium: coefficients must be finite");
  }
}

}  // namespace etsim
