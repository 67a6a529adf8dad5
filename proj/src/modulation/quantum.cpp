#include <algorithm>
#include <cmath>
#include <numbers>

#include "etsim/errors.hpp"
#include "etsim/modulation.hpp"

namespace etsim::modulation {

using dispersion::BiphotonState;
using dispersion::JointSpectralAmplitude;

BiphotonState modulation_state(double sigma_F, double sigma_pump, const PhaseModulator& mod1,
                               const PhaseModulator& mod2, double omega0) {
  mod1.validate();
  mod2.validate();
  if (!(sigma_pump > 0.0)) {
    throw UnsupportedConfigurationError("modulation_state: a modulated pair needs sigma_pump > 0");
  }
  const double omega_fast = std::max(mod1.omega_mod, mod2.omega_mod);
  const double omega_slow = std::min(mod1.omega_mod, mod2.omega_mod);
  // J_n(M) is below 1e-6 for n > M + 12 at the depths of interest.
  const double reach = (mod1.depth + mod2.depth + 12.0) * omega_fast + 6.0 * sigma_pump;
  const double periods = 32.0 * 2.0 * std::numbers::pi / omega_slow;
  return BiphotonState::with_auto_grids(omega0, sigma_F, sigma_pump, 0.0, 1.1 * reach, periods);
}

QuantumModulationResult quantum_modulation(const BiphotonState& s, const PhaseModulator& mod1,
                                           const PhaseModulator& mod2) {
  mod1.validate();
  mod2.validate();
  if (s.sum_grid.size() < FrequencyGrid::kMinPoints || !(s.sigma_pump > 0.0)) {
    throw UnsupportedConfigurationError("quantum_modulation: the sum-frequency axis is not resolved; "
                                        "build the state with modulation_state");
  }
  const JointSpectralAmplitude jsa = dispersion::make_biphoton(s);
  const auto unmodulated = dispersion::spectral_moments(jsa);
  if (mod1.depth == 0.0 && mod2.depth == 0.0) {
    return QuantumModulationResult{unmodulated.var_sum, unmodulated.var_sum, unmodulated, jsa};
  }
  const double baseline = unmodulated.var_sum;

  const JointSpectralAmplitude jta = dispersion::to_joint_time(jsa);
  std::vector<Complex> values(jta.values().begin(), jta.values().end());
  const std::size_t cols = jta.cols();
  for (std::size_t r = 0; r < jta.rows(); ++r) {
    const double mean_t = s.sum_grid.time(r);
    for (std::size_t c = 0; c < cols; ++c) {
      const double tau = s.diff_grid.time(c);
      const double phi = mod1.phase(mean_t + 0.5 * tau) + mod2.phase(mean_t - 0.5 * tau);
      values[r * cols + c] *= std::polar(1.0, phi);
    }
  }
  JointSpectralAmplitude modulated =
      dispersion::to_joint_spectrum(JointSpectralAmplitude(s, std::move(values), Domain::time));
  dispersion::check_joint_edges(modulated, "modulated biphoton spectrum");

  QuantumModulationResult result{0.0, baseline, dispersion::spectral_moments(modulated), std::move(modulated)};
  result.delta2 = result.moments.var_sum;
  return result;
}

}  // namespace etsim::modulation
