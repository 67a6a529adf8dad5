#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "etsim/field.hpp"
#include "etsim/random.hpp"

/// Chaotic (thermal) light split on a 50/50 beam splitter and sent through
/// identical dispersive media: intensity correlations survive because both
/// beams disperse identically, not because anything cancels.
namespace etsim::chaotic {

struct ChaoticFieldParams {
  double coherence_rate = 1.0;   // Gamma: field autocorrelation exp(-Gamma |tau|)
  double mean_power = 1.0;
  double duration = 409.6;       // record length
  std::size_t n_points = 8192;   // samples per record
  std::size_t n_records = 1;
  double carrier = 0.0;          // grid centre; dispersion is applied about it

  /// duration * Gamma >= 100 and n_points a power of two >= 64.
  void validate() const;
  FrequencyGrid grid() const;
  double time_step() const { return duration / static_cast<double>(n_points); }
};

/// One record of stationary complex Gaussian noise from the exact discrete
/// Ornstein-Uhlenbeck update, started from the stationary distribution.
ComplexField generate_chaotic_field(const ChaoticFieldParams& p, RandomStream& rng);

/// 50/50 splitter: both outputs carry f / sqrt(2).
std::pair<ComplexField, ComplexField> beamsplit(const ComplexField& f);

struct IntensityCorrelation {
  std::vector<double> tau;
  std::vector<double> g2;
  std::vector<double> std_error;
};

inline constexpr std::uint64_t kBootstrapSeed = 0x6732b007u;

/// Accumulates <I_a(t) I_b(t + tau)> over records (or record segments), so
/// ensembles never have to be held in memory. Delays are rounded to whole
/// samples; the rounded values are reported back.
class G2Accumulator {
 public:
  G2Accumulator(const FrequencyGrid& grid, std::span<const double> taus, std::size_t segments_per_record = 1);

  void add(const ComplexField& a, const ComplexField& b);
  void merge(const G2Accumulator& other);

  std::size_t segments() const { return mean_a_.size(); }
  std::size_t samples() const { return samples_; }

  /// g2(tau) = <I_a I_b(tau)> / (<I_a><I_b>) with bootstrap errors over segments.
  IntensityCorrelation finish(std::size_t resamples = 200,
                              std::uint64_t bootstrap_seed = kBootstrapSeed) const;

 private:
  FrequencyGrid grid_;
  std::vector<long> lags_;
  std::vector<double> taus_;
  std::size_t segments_per_record_;
  std::size_t samples_ = 0;
  // Per segment: sums of I_a, I_b, sample count, then lag products and counts.
  std::vector<double> mean_a_, mean_b_, count_;
  std::vector<std::vector<double>> prod_, prod_count_;
};

/// Ensemble- and time-averaged cross-correlation of paired records.
IntensityCorrelation g2_cross(std::span<const ComplexField> a, std::span<const ComplexField> b,
                              std::span<const double> taus);
/// Single record pair; errors come from 16 record segments.
IntensityCorrelation g2_cross(const ComplexField& a, const ComplexField& b, std::span<const double> taus);

struct IdenticalDispersionReport {
  IntensityCorrelation without_medium;
  IntensityCorrelation with_medium;
  double max_abs_difference = 0.0;   // max_tau |g2_with - g2_without|
  double max_difference_sigma = 0.0; // same, in combined standard errors
  double dissimilarity = 0.0;        // ||I_disp - I_0|| / ||I_0|| for record 0, arm a
  double proportionality_error = 0.0;// max |Ia/sum Ia - Ib/sum Ib| after the media
  double beta_L_gamma2 = 0.0;
  std::size_t total_samples = 0;
  // Record 0 traces: time, undispersed and dispersed intensities.
  std::vector<double> trace_time;
  std::vector<double> trace_a, trace_b, trace_a_dispersed, trace_b_dispersed;
};

/// Runs the split-and-correlate pipeline with and without the medium in both
/// arms over p.n_records records. Record r uses stream (opts.seed, r).
IdenticalDispersionReport identical_dispersion_experiment(const ChaoticFieldParams& p,
                                                          const DispersiveMedium& m,
                                                          std::span<const double> taus,
                                                          const MonteCarloOptions& opts);

/// Evenly spaced delays -max_tau..max_tau in whole samples of p's grid.
std::vector<double> default_taus(const ChaoticFieldParams& p, double max_tau, std::size_t n_each_side);

}  // namespace etsim::chaotic
