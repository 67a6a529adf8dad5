#pragma once

#include <cstddef>
#include <span>

namespace etsim {

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_samples = 0;
  /// std / sqrt(n) for i.i.d. samples; 0 for deterministic quadratures.
  double std_error = 0.0;
};

/// sqrt(sum w (v - vbar)^2 / sum w). Throws DegenerateWeightsError when the
/// weights sum to zero, InvalidArgument on length mismatch or negative weight.
double weighted_std(std::span<const double> values, std::span<const double> weights);
double weighted_mean(std::span<const double> values, std::span<const double> weights);

/// Mean, unbiased std and standard error of i.i.d. samples.
SummaryStats summarize(std::span<const double> samples);

/// Welford accumulator. merge() is order-sensitive only at the rounding level,
/// so callers combine partial results in a fixed order.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  SummaryStats summary() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Least-squares slope of y on x with its standard error.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
};

class RunningRegression {
 public:
  void add(double x, double y);
  void merge(const RunningRegression& other);
  std::size_t count() const { return n_; }
  LinearFit fit() const;

 private:
  std::size_t n_ = 0;
  double mean_x_ = 0.0, mean_y_ = 0.0;
  double sxx_ = 0.0, syy_ = 0.0, sxy_ = 0.0;
};

}  // namespace etsim
