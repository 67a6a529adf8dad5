#include <cmath>
#include <sstream>

#include "etsim/diagnostics.hpp"
#include "etsim/errors.hpp"
#include "etsim/modulation.hpp"
#include "etsim/parallel.hpp"

namespace etsim::modulation {

void ClassicalAnticorrelatedSource::validate() const {
  if (pulses.empty()) throw EmptyInputError("ClassicalAnticorrelatedSource: empty pulse table");
  double total = 0.0;
  for (const auto& p : pulses) {
    if (!(p.a > 0.0) || !(p.b > 0.0)) throw InvalidArgument("ClassicalAnticorrelatedSource: a_i, b_i must be > 0");
    if (!(p.probability >= 0.0)) throw InvalidArgument("ClassicalAnticorrelatedSource: P_i must be >= 0");
    if (!std::isfinite(p.omega)) throw InvalidArgument("ClassicalAnticorrelatedSource: omega_i must be finite");
    total += p.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("ClassicalAnticorrelatedSource: probabilities sum to " + std::to_string(total) +
                          ", expected 1");
  }
  if (!std::isfinite(omega_bar)) throw InvalidArgument("ClassicalAnticorrelatedSource: omega_bar must be finite");
  if (!(linewidth >= 0.0) || !std::isfinite(linewidth)) {
    throw InvalidArgument("ClassicalAnticorrelatedSource: linewidth must be >= 0");
  }
  if (internal_precompensation) {
    internal_precompensation->first.validate();
    internal_precompensation->second.validate();
  }
}

namespace {

/// Coincidence weight of each pulse, P_i a_i b_i, normalized.
std::vector<double> pulse_weights(const ClassicalAnticorrelatedSource& source) {
  std::vector<double> w;
  double total = 0.0;
  for (const auto& p : source.pulses) {
    w.push_back(p.probability * p.a * p.b);
    total += w.back();
  }
  if (!(total > 0.0)) throw DegenerateWeightsError("ClassicalAnticorrelatedSource: all pulse weights are zero");
  for (auto& x : w) x /= total;
  return w;
}

void check_overlap(const PhaseModulator& mod, double linewidth) {
  if (mod.depth > 0.0 && linewidth >= mod.omega_mod / 4.0) {
    std::ostringstream msg;
    msg << "modulation: linewidth " << linewidth << " >= omega_mod/4 = " << mod.omega_mod / 4.0
        << "; sidebands overlap and the discrete-sideband result is approximate";
    warn(msg.str());
  }
}

/// Net modulator seen by one beam.
PhaseModulator beam_modulator(const PhaseModulator& external, const std::optional<PhaseModulator>& internal) {
  if (!internal) return external;
  const PhaseModulator parts[] = {*internal, external};
  return combine(parts);
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> cdf(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) cdf[i] = acc += w[i];
  for (auto& c : cdf) c /= acc;
  cdf.back() = 1.0;
  return cdf;
}

double ladder_variance(const SidebandSpectrum& s1, const SidebandSpectrum& s2) {
  double acc = 0.0;
  for (int n = -s1.n_max; n <= s1.n_max; ++n) {
    const double f = s1.weight(n);
    if (f == 0.0) continue;
    for (int k = -s2.n_max; k <= s2.n_max; ++k) {
      const double dev = n * s1.omega_mod + k * s2.omega_mod;
      acc += f * s2.weight(k) * dev * dev;
    }
  }
  return acc;
}

}  // namespace

double delta_squared_classical(const PhaseModulator& mod1, const PhaseModulator& mod2,
                               const ClassicalAnticorrelatedSource& source) {
  mod1.validate();
  mod2.validate();
  source.validate();
  if (source.internal_precompensation) {
    throw UnsupportedConfigurationError(
        "delta_squared_classical: source carries internal modulators; use compensated_source_demo");
  }
  check_overlap(mod1, source.linewidth);
  check_overlap(mod2, source.linewidth);
  const auto s1 = sideband_coefficients(mod1.depth, default_sideband_order(mod1.depth), mod1.omega_mod);
  const auto s2 = sideband_coefficients(mod2.depth, default_sideband_order(mod2.depth), mod2.omega_mod);
  const double per_pulse = ladder_variance(s1, s2) + 2.0 * source.linewidth * source.linewidth;
  double delta2 = 0.0;
  for (double w : pulse_weights(source)) delta2 += w * per_pulse;
  return delta2;
}

SummaryStats delta_squared_monte_carlo(const PhaseModulator& mod1, const PhaseModulator& mod2,
                                       const ClassicalAnticorrelatedSource& source,
                                       std::size_t trials, const MonteCarloOptions& opts) {
  mod1.validate();
  mod2.validate();
  source.validate();
  if (trials == 0) throw InvalidArgument("delta_squared_monte_carlo: trials must be positive");
  std::optional<PhaseModulator> pre1, pre2;
  if (source.internal_precompensation) {
    pre1 = source.internal_precompensation->first;
    pre2 = source.internal_precompensation->second;
  }
  const PhaseModulator net1 = beam_modulator(mod1, pre1);
  const PhaseModulator net2 = beam_modulator(mod2, pre2);
  check_overlap(net1, source.linewidth);
  check_overlap(net2, source.linewidth);

  const auto s1 = sideband_coefficients(net1.depth, default_sideband_order(net1.depth), net1.omega_mod);
  const auto s2 = sideband_coefficients(net2.depth, default_sideband_order(net2.depth), net2.omega_mod);
  const auto cdf1 = cumulative(s1.f);
  const auto cdf2 = cumulative(s2.f);
  const auto pulse_cdf = cumulative(pulse_weights(source));

  auto blocks = run_blocks(trials, opts.threads, [&](std::size_t begin, std::size_t end) {
    RunningStats acc;
    for (std::size_t t = begin; t < end; ++t) {
      RandomStream rng(opts.seed, t);
      const SourcePulse& p = source.pulses[rng.from_cdf(pulse_cdf)];
      const int n1 = static_cast<int>(rng.from_cdf(cdf1)) - s1.n_max;
      const int n2 = static_cast<int>(rng.from_cdf(cdf2)) - s2.n_max;
      double noise1 = 0.0, noise2 = 0.0;
      if (source.linewidth > 0.0) {
        noise1 = rng.normal(0.0, source.linewidth);
        noise2 = rng.normal(0.0, source.linewidth);
      }
      // Beam 1 sits at omega_i, beam 2 at 2 omega_bar - omega_i; deviations
      // from omega_bar are exact negatives, so unmodulated trials give 0.
      const double dev1 = (p.omega - source.omega_bar) + n1 * s1.omega_mod + noise1;
      const double dev2 = (source.omega_bar - p.omega) + n2 * s2.omega_mod + noise2;
      const double sum = dev1 + dev2;
      acc.add(sum * sum);
    }
    return acc;
  });
  RunningStats total;
  for (const auto& b : blocks) total.merge(b);
  return total.summary();
}

CompensatedSourceReport compensated_source_demo(const PhaseModulator& mod1, const PhaseModulator& mod2,
                                                const ClassicalAnticorrelatedSource& source,
                                                std::size_t trials, const MonteCarloOptions& opts,
                                                const std::optional<dispersion::BiphotonState>& quantum) {
  source.validate();
  if (!source.internal_precompensation) {
    throw InvalidArgument("compensated_source_demo: source has no internal modulators");
  }
  auto negates = [](const PhaseModulator& internal, const PhaseModulator& external) {
    return internal.omega_mod == external.omega_mod && internal.depth == external.depth &&
           internal.phase_offset == external.phase_offset && internal.sign == -external.sign;
  };
  const auto& [pre1, pre2] = *source.internal_precompensation;
  if (!negates(pre1, mod1) || !negates(pre2, mod2)) {
    throw InvalidArgument("compensated_source_demo: internal modulators must exactly negate the external ones");
  }

  PhaseModulator off1 = mod1, off2 = mod2;
  off1.depth = 0.0;
  off2.depth = 0.0;

  CompensatedSourceReport report;
  report.on = delta_squared_monte_carlo(mod1, mod2, source, trials, opts);
  report.off = delta_squared_monte_carlo(off1, off2, source, trials, opts);

  ClassicalAnticorrelatedSource bare = source;
  bare.internal_precompensation.reset();
  const PhaseModulator on_parts1[] = {pre1, mod1};
  const PhaseModulator on_parts2[] = {pre2, mod2};
  report.on_closed_form = delta_squared_classical(combine(on_parts1), combine(on_parts2), bare);
  report.off_closed_form = delta_squared_classical(pre1, pre2, bare);

  if (quantum) {
    const auto on = quantum_modulation(*quantum, mod1, mod2);
    report.quantum_on = on.delta2;
    report.quantum_baseline = on.baseline;
    report.quantum_off = quantum_modulation(*quantum, off1, off2).delta2;
  }
  return report;
}

}  // namespace etsim::modulation
