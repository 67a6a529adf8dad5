#include "etsim/stats.hpp"

#include <cmath>

#include "etsim/errors.hpp"

namespace etsim {
namespace {

double checked_weight_sum(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw InvalidArgument("weighted statistics: values and weights differ in length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("weighted statistics: weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateWeightsError("weighted statistics: weights sum to zero");
  return total;
}

}  // namespace

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  const double total = checked_weight_sum(values, weights);
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * values[i];
  return acc / total;
}

double weighted_std(std::span<const double> values, std::span<const double> weights) {
  const double total = checked_weight_sum(values, weights);
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mean += weights[i] * values[i];
  mean /= total;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    acc += weights[i] * d * d;
  }
  return std::sqrt(acc / total);
}

SummaryStats summarize(std::span<const double> samples) {
  RunningStats s;
  for (double x : samples) s.add(x);
  return s.summary();
}

void RunningStats::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double d = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

SummaryStats RunningStats::summary() const {
  SummaryStats s;
  s.n_samples = n_;
  s.mean = mean_;
  s.std = std::sqrt(variance());
  s.std_error = n_ > 0 ? s.std / std::sqrt(static_cast<double>(n_)) : 0.0;
  return s;
}

void RunningRegression::add(double x, double y) {
  ++n_;
  const double n = static_cast<double>(n_);
  const double dx = x - mean_x_;
  const double dy = y - mean_y_;
  mean_x_ += dx / n;
  mean_y_ += dy / n;
  sxx_ += dx * (x - mean_x_);
  syy_ += dy * (y - mean_y_);
  sxy_ += dx * (y - mean_y_);
}

void RunningRegression::merge(const RunningRegression& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double dx = o.mean_x_ - mean_x_;
  const double dy = o.mean_y_ - mean_y_;
  sxx_ += o.sxx_ + dx * dx * na * nb / n;
  syy_ += o.syy_ + dy * dy * na * nb / n;
  sxy_ += o.sxy_ + dx * dy * na * nb / n;
  mean_x_ += dx * nb / n;
  mean_y_ += dy * nb / n;
  n_ += o.n_;
}

LinearFit RunningRegression::fit() const {
  LinearFit f;
  if (n_ < 3 || sxx_ <= 0.0) {
    f.intercept = mean_y_;
    return f;
  }
  f.slope = sxy_ / sxx_;
  f.intercept = mean_y_ - f.slope * mean_x_;
  const double resid = std::max(0.0, syy_ - f.slope * sxy_);
  f.slope_error = std::sqrt(resid / static_cast<double>(n_ - 2) / sxx_);
  return f;
}

}  // namespace etsim
