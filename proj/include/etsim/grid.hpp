#pragma once

#include <cstddef>
#include <numbers>

namespace etsim {

/// Uniform angular-frequency grid of n_points bins, centred on `center`.
///
/// Bin k sits at center + (k - n/2) * spacing. The conjugate time grid has
/// spacing 2*pi/span and duration 2*pi/spacing, with sample j at
/// (j - n/2) * time_spacing. All quantities are dimensionless (c = 1).
class FrequencyGrid {
 public:
  static constexpr std::size_t kMinPoints = 64;

  FrequencyGrid(std::size_t n_points, double center, double span);

  /// Smallest power-of-two grid with span >= 16 * max_bandwidth and
  /// duration >= 16 * max_width + extra_duration.
  static FrequencyGrid sized_for(double center, double max_bandwidth, double max_width,
                                 double extra_duration = 0.0);

  std::size_t size() const { return n_; }
  double center() const { return center_; }
  double span() const { return span_; }
  double spacing() const { return span_ / static_cast<double>(n_); }
  double time_spacing() const { return 2.0 * std::numbers::pi / span_; }
  double duration() const { return 2.0 * std::numbers::pi / spacing(); }

  /// Offset of bin k from the centre frequency.
  double offset(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * spacing();
  }
  double frequency(std::size_t k) const { return center_ + offset(k); }
  double time(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * time_spacing();
  }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  std::size_t n_;
  double center_;
  double span_;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace etsim
