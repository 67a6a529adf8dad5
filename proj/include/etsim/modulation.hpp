#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "etsim/dispersion.hpp"
#include "etsim/random.hpp"
#include "etsim/stats.hpp"

/// Distant phase modulators acting on frequency-anticorrelated beams.
///
/// Classical narrow-line pulses are handled as discrete sideband ladders, so
/// the variance of w1 + w2 is exact combinatorics; the entangled pair is
/// modulated multiplicatively in the joint time domain.
namespace etsim::modulation {

/// phi(t) = sign * depth * sin(omega_mod * t + phase_offset).
struct PhaseModulator {
  double omega_mod = 1.0;
  double depth = 0.0;
  double phase_offset = 0.0;
  int sign = +1;

  void validate() const;
  double phase(double t) const;
};

/// The modulator that undoes `m` (same depth and offset, opposite sign).
PhaseModulator inverse(const PhaseModulator& m);

/// Single modulator equivalent to applying all of `parts` in sequence.
/// Sinusoids at one frequency add as phasors; parts must share omega_mod.
PhaseModulator combine(std::span<const PhaseModulator> parts);

struct SidebandSpectrum {
  int n_max = 0;
  double omega_mod = 1.0;
  std::vector<double> f;  // f[n + n_max]

  double weight(int n) const;
  /// sum_n n^2 f_n (in units of omega_mod^2).
  double second_moment() const;
};

/// f_n = J_n(m)^2 for |n| <= n_max, normalized. Throws TruncationError if
/// the discarded tail exceeds 1e-10.
SidebandSpectrum sideband_coefficients(double depth, int n_max, double omega_mod = 1.0);
/// Sideband order that always passes the truncation check.
int default_sideband_order(double depth);

/// One narrow-line pulse pair: beam 1 at omega (weight a), beam 2 at
/// 2 omega_bar - omega (weight b), emitted with probability `probability`.
struct SourcePulse {
  double a = 1.0;
  double b = 1.0;
  double omega = 0.0;
  double probability = 1.0;
};

struct ClassicalAnticorrelatedSource {
  double omega_bar = 0.0;
  std::vector<SourcePulse> pulses{SourcePulse{}};
  double linewidth = 0.0;  // Gaussian std of each line
  std::optional<std::pair<PhaseModulator, PhaseModulator>> internal_precompensation;

  void validate() const;
};

/// Variance of w1 + w2 for narrow lines through the two modulators. The
/// sideband ladders are independent of the pulse, so pulses only set the
/// normalization: Omega^2 (m1^2 + m2^2) / 2 + 2 linewidth^2.
double delta_squared_classical(const PhaseModulator& mod1, const PhaseModulator& mod2,
                               const ClassicalAnticorrelatedSource& source);

/// Sampled estimate of <(w1 + w2 - 2 omega_bar)^2>. Internal precompensation,
/// if present, is applied in front of the external modulators.
SummaryStats delta_squared_monte_carlo(const PhaseModulator& mod1, const PhaseModulator& mod2,
                                       const ClassicalAnticorrelatedSource& source,
                                       std::size_t trials, const MonteCarloOptions& opts);

struct QuantumModulationResult {
  double delta2 = 0.0;    // variance of w1 + w2 after the modulators
  double baseline = 0.0;  // same, modulators removed
  dispersion::SpectralMoments moments;
  dispersion::JointSpectralAmplitude joint_spectrum;
};

/// Pair state whose grids hold the sidebands both modulators can add to the
/// sum frequency and span at least 32 modulation periods.
dispersion::BiphotonState modulation_state(double sigma_F, double sigma_pump, const PhaseModulator& mod1,
                                           const PhaseModulator& mod2, double omega0 = 0.0);

/// Multiplies the joint temporal amplitude by exp(i phi1(t1)) exp(i phi2(t2))
/// and returns the variance of w1 + w2 from the resulting joint spectrum.
QuantumModulationResult quantum_modulation(const dispersion::BiphotonState& s, const PhaseModulator& mod1,
                                           const PhaseModulator& mod2);

struct CompensatedSourceReport {
  SummaryStats on;            // external modulators running
  SummaryStats off;           // external modulators switched off
  double on_closed_form = 0.0;
  double off_closed_form = 0.0;
  std::optional<double> quantum_on;
  std::optional<double> quantum_off;
  std::optional<double> quantum_baseline;
};

/// A classical source that pre-applies -phi1, -phi2 keeps w1 + w2 sharp while
/// the external modulators run, and loses it when they are switched off.
/// With `quantum` given, the entangled pair is run through the same two
/// situations for reference.
CompensatedSourceReport compensated_source_demo(const PhaseModulator& mod1, const PhaseModulator& mod2,
                                                const ClassicalAnticorrelatedSource& source,
                                                std::size_t trials, const MonteCarloOptions& opts,
                                                const std::optional<dispersion::BiphotonState>& quantum = {});

}  // namespace etsim::modulation
