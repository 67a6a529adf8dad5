#include "etsim/chaotic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "etsim/errors.hpp"
#include "etsim/parallel.hpp"
#include "etsim/stats.hpp"

namespace etsim::chaotic {

void ChaoticFieldParams::validate() const {
  if (!(coherence_rate > 0.0)) throw InvalidArgument("chaotic: coherence_rate must be positive");
  if (!(mean_power > 0.0)) throw InvalidArgument("chaotic: mean_power must be positive");
  if (!(duration > 0.0)) throw InvalidArgument("chaotic: duration must be positive");
  if (duration * coherence_rate < 100.0) {
    throw InvalidArgument("chaotic: duration * coherence_rate must be >= 100 (got " +
                          std::to_string(duration * coherence_rate) + ")");
  }
  if (!is_power_of_two(n_points) || n_points < FrequencyGrid::kMinPoints) {
    throw InvalidArgument("chaotic: n_points must be a power of two >= 64");
  }
  if (n_records == 0) throw InvalidArgument("chaotic: n_records must be positive");
}

FrequencyGrid ChaoticFieldParams::grid() const {
  return FrequencyGrid(n_points, carrier, 2.0 * std::numbers::pi / time_step());
}

ComplexField generate_chaotic_field(const ChaoticFieldParams& p, RandomStream& rng) {
  p.validate();
  const double rho = std::exp(-p.coherence_rate * p.time_step());
  const double innovation = p.mean_power * (1.0 - rho * rho);
  std::vector<Complex> values(p.n_points);
  values[0] = rng.complex_normal(p.mean_power);
  for (std::size_t j = 1; j < values.size(); ++j) {
    values[j] = rho * values[j - 1] + rng.complex_normal(innovation);
  }
  return ComplexField(p.grid(), std::move(values), Domain::time);
}

std::pair<ComplexField, ComplexField> beamsplit(const ComplexField& f) {
  std::vector<Complex> out(f.values().begin(), f.values().end());
  const double amp = 1.0 / std::numbers::sqrt2;
  for (auto& v : out) v *= amp;
  ComplexField transmitted(f.grid(), out, f.domain());
  ComplexField reflected(f.grid(), std::move(out), f.domain());
  return {std::move(transmitted), std::move(reflected)};
}

G2Accumulator::G2Accumulator(const FrequencyGrid& grid, std::span<const double> taus,
                             std::size_t segments_per_record)
    : grid_(grid), segments_per_record_(segments_per_record) {
  if (taus.empty()) throw EmptyInputError("g2: empty delay grid");
  if (segments_per_record == 0 || segments_per_record > grid.size() / 4) {
    throw InvalidArgument("g2: invalid number of segments per record");
  }
  const double dt = grid.time_spacing();
  const long limit = static_cast<long>(grid.size() / segments_per_record) - 1;
  for (double tau : taus) {
    const long lag = std::lround(tau / dt);
    if (std::abs(lag) > limit) throw InvalidArgument("g2: delay exceeds the record segment length");
    lags_.push_back(lag);
    taus_.push_back(static_cast<double>(lag) * dt);
  }
}

void G2Accumulator::add(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == grid_) || !(b.grid() == grid_)) {
    throw GridMismatchError("g2: records must share the accumulator's grid");
  }
  if (a.domain() != Domain::time || b.domain() != Domain::time) {
    throw DomainMismatchError("g2: intensity correlations need time-domain records");
  }
  const auto ia = a.intensity();
  const auto ib = b.intensity();
  const std::size_t n = ia.size();
  const std::size_t seg_len = n / segments_per_record_;
  for (std::size_t s = 0; s < segments_per_record_; ++s) {
    const std::size_t begin = s * seg_len;
    const std::size_t end = s + 1 == segments_per_record_ ? n : begin + seg_len;
    double sa = 0.0, sb = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
      sa += ia[t];
      sb += ib[t];
    }
    std::vector<double> prod(lags_.size()), cnt(lags_.size());
    for (std::size_t k = 0; k < lags_.size(); ++k) {
      const long lag = lags_[k];
      // t runs over the segment; t + lag may reach into the rest of the record.
      const long lo = std::max<long>(static_cast<long>(begin), -lag);
      const long hi = std::min<long>(static_cast<long>(end), static_cast<long>(n) - lag);
      double acc = 0.0;
      for (long t = lo; t < hi; ++t) acc += ia[t] * ib[t + lag];
      prod[k] = acc;
      cnt[k] = static_cast<double>(std::max<long>(0, hi - lo));
    }
    mean_a_.push_back(sa);
    mean_b_.push_back(sb);
    count_.push_back(static_cast<double>(end - begin));
    prod_.push_back(std::move(prod));
    prod_count_.push_back(std::move(cnt));
  }
  samples_ += n;
}

void G2Accumulator::merge(const G2Accumulator& other) {
  if (!(other.grid_ == grid_) || other.lags_ != lags_) {
    throw GridMismatchError("g2: cannot merge accumulators with different grids or delays");
  }
  mean_a_.insert(mean_a_.end(), other.mean_a_.begin(), other.mean_a_.end());
  mean_b_.insert(mean_b_.end(), other.mean_b_.begin(), other.mean_b_.end());
  count_.insert(count_.end(), other.count_.begin(), other.count_.end());
  prod_.insert(prod_.end(), other.prod_.begin(), other.prod_.end());
  prod_count_.insert(prod_count_.end(), other.prod_count_.begin(), other.prod_count_.end());
  samples_ += other.samples_;
}

IntensityCorrelation G2Accumulator::finish(std::size_t resamples, std::uint64_t bootstrap_seed) const {
  const std::size_t n_seg = segments();
  if (n_seg == 0) throw EmptyInputError("g2: no records accumulated");
  const std::size_t n_lag = lags_.size();

  auto estimate = [&](const std::vector<std::size_t>& weights, std::vector<double>& out) {
    double sa = 0.0, sb = 0.0, n = 0.0;
    std::vector<double> prod(n_lag, 0.0), cnt(n_lag, 0.0);
    for (std::size_t s = 0; s < n_seg; ++s) {
      const double w = static_cast<double>(weights[s]);
      if (w == 0.0) continue;
      sa += w * mean_a_[s];
      sb += w * mean_b_[s];
      n += w * count_[s];
      for (std::size_t k = 0; k < n_lag; ++k) {
        prod[k] += w * prod_[s][k];
        cnt[k] += w * prod_count_[s][k];
      }
    }
    const double norm = (sa / n) * (sb / n);
    out.resize(n_lag);
    for (std::size_t k = 0; k < n_lag; ++k) {
      if (!(norm > 0.0)) throw DegenerateWeightsError("g2: zero mean intensity");
      out[k] = (prod[k] / cnt[k]) / norm;
    }
  };

  IntensityCorrelation result;
  result.tau = taus_;
  estimate(std::vector<std::size_t>(n_seg, 1), result.g2);

  result.std_error.assign(n_lag, 0.0);
  if (n_seg < 2 || resamples < 2) return result;
  std::vector<RunningStats> spread(n_lag);
  std::vector<std::size_t> counts(n_seg);
  std::vector<double> g2;
  for (std::size_t b = 0; b < resamples; ++b) {
    RandomStream rng(bootstrap_seed, b);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t s = 0; s < n_seg; ++s) {
      ++counts[std::min(n_seg - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n_seg)))];
    }
    estimate(counts, g2);
    for (std::size_t k = 0; k < n_lag; ++k) spread[k].add(g2[k]);
  }
  for (std::size_t k = 0; k < n_lag; ++k) result.std_error[k] = std::sqrt(spread[k].variance());
  return result;
}

IntensityCorrelation g2_cross(std::span<const ComplexField> a, std::span<const ComplexField> b,
                              std::span<const double> taus) {
  if (a.empty()) throw EmptyInputError("g2_cross: no records");
  if (a.size() != b.size()) throw GridMismatchError("g2_cross: record counts differ");
  G2Accumulator acc(a.front().grid(), taus);
  for (std::size_t r = 0; r < a.size(); ++r) acc.add(a[r], b[r]);
  return acc.finish();
}

IntensityCorrelation g2_cross(const ComplexField& a, const ComplexField& b, std::span<const double> taus) {
  G2Accumulator acc(a.grid(), taus, 16);
  acc.add(a, b);
  return acc.finish();
}

std::vector<double> default_taus(const ChaoticFieldParams& p, double max_tau, std::size_t n_each_side) {
  if (n_each_side == 0 || !(max_tau > 0.0)) throw InvalidArgument("default_taus: need a positive range");
  const double dt = p.time_step();
  const long max_lag = std::max<long>(1, std::lround(max_tau / dt));
  const long stride = std::max<long>(1, max_lag / static_cast<long>(n_each_side));
  std::vector<double> taus;
  for (long lag = -stride * static_cast<long>(n_each_side); lag <= stride * static_cast<long>(n_each_side);
       lag += stride) {
    taus.push_back(static_cast<double>(lag) * dt);
  }
  return taus;
}

namespace {

double normalized_distance(const std::vector<double>& x, const std::vector<double>& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - ref[i]) * (x[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

double proportionality_error(const std::vector<double>& a, const std::vector<double>& b) {
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] / sa - b[i] / sb));
  return worst;
}

struct RecordBlock {
  G2Accumulator without;
  G2Accumulator with;
};

}  // namespace

IdenticalDispersionReport identical_dispersion_experiment(const ChaoticFieldParams& p,
                                                          const DispersiveMedium& m,
                                                          std::span<const double> taus,
                                                          const MonteCarloOptions& opts) {
  p.validate();
  // Components out to ~10 Gamma are delayed by up to 2|beta| L * 10 Gamma; keep
  // that well inside the record so the periodic transform does not wrap them.
  const double delay_reach = 20.0 * std::abs(m.beta) * m.length * p.coherence_rate;
  if (delay_reach > p.duration / 4.0) {
    throw AliasingError("identical_dispersion_experiment: dispersive delay spread " +
                        std::to_string(delay_reach) + " exceeds a quarter of the record duration " +
                        std::to_string(p.duration) + "; lengthen the record");
  }
  const FrequencyGrid grid = p.grid();

  IdenticalDispersionReport report;
  {
    RandomStream rng(opts.seed, 0);
    const auto [a, b] = beamsplit(generate_chaotic_field(p, rng));
    const ComplexField ad = propagate(a, m);
    const ComplexField bd = propagate(b, m);
    report.trace_time.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) report.trace_time[j] = grid.time(j);
    report.trace_a = a.intensity();
    report.trace_b = b.intensity();
    report.trace_a_dispersed = ad.intensity();
    report.trace_b_dispersed = bd.intensity();
    report.dissimilarity = normalized_distance(report.trace_a_dispersed, report.trace_a);
    report.proportionality_error = proportionality_error(report.trace_a_dispersed, report.trace_b_dispersed);
  }

  auto blocks = run_blocks(
      p.n_records, opts.threads,
      [&](std::size_t begin, std::size_t end) {
        RecordBlock blk{G2Accumulator(grid, taus), G2Accumulator(grid, taus)};
        for (std::size_t r = begin; r < end; ++r) {
          RandomStream rng(opts.seed, r);
          const auto [a, b] = beamsplit(generate_chaotic_field(p, rng));
          blk.without.add(a, b);
          blk.with.add(propagate(a, m), propagate(b, m));
        }
        return blk;
      },
      16);

  G2Accumulator without(grid, taus), with(grid, taus);
  for (const auto& blk : blocks) {
    without.merge(blk.without);
    with.merge(blk.with);
  }
  report.without_medium = without.finish();
  report.with_medium = with.finish();
  report.total_samples = without.samples();
  report.beta_L_gamma2 = m.beta * m.length * p.coherence_rate * p.coherence_rate;
  for (std::size_t k = 0; k < report.without_medium.g2.size(); ++k) {
    const double diff = std::abs(report.with_medium.g2[k] - report.without_medium.g2[k]);
    const double err = std::hypot(report.with_medium.std_error[k], report.without_medium.std_error[k]);
    report.max_abs_difference = std::max(report.max_abs_difference, diff);
    if (err > 0.0) report.max_difference_sigma = std::max(report.max_difference_sigma, diff / err);
  }
  return report;
}

}  // namespace etsim::chaotic
