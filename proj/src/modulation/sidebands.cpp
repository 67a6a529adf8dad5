#include <cmath>
#include <complex>
#include <string>

#include "etsim/errors.hpp"
#include "etsim/modulation.hpp"

namespace etsim::modulation {

void PhaseModulator::validate() const {
  if (!(omega_mod > 0.0) || !std::isfinite(omega_mod)) {
    throw InvalidArgument("PhaseModulator: omega_mod must be positive");
  }
  if (!(depth >= 0.0) || !std::isfinite(depth)) throw InvalidArgument("PhaseModulator: depth must be >= 0");
  if (!std::isfinite(phase_offset)) throw InvalidArgument("PhaseModulator: phase_offset must be finite");
  if (sign != 1 && sign != -1) throw InvalidArgument("PhaseModulator: sign must be +1 or -1");
}

double PhaseModulator::phase(double t) const {
  return sign * depth * std::sin(omega_mod * t + phase_offset);
}

PhaseModulator inverse(const PhaseModulator& m) {
  PhaseModulator inv = m;
  inv.sign = -m.sign;
  return inv;
}

PhaseModulator combine(std::span<const PhaseModulator> parts) {
  if (parts.empty()) throw EmptyInputError("combine: no modulators");
  std::complex<double> phasor{0.0, 0.0};
  for (const auto& p : parts) {
    p.validate();
    if (p.omega_mod != parts.front().omega_mod) {
      throw UnsupportedConfigurationError("combine: modulators run at different frequencies");
    }
    phasor += static_cast<double>(p.sign) * std::polar(p.depth, p.phase_offset);
  }
  PhaseModulator net;
  net.omega_mod = parts.front().omega_mod;
  net.depth = std::abs(phasor);
  net.phase_offset = net.depth > 0.0 ? std::arg(phasor) : 0.0;
  return net;
}

double SidebandSpectrum::weight(int n) const {
  if (n < -n_max || n > n_max) return 0.0;
  return f[static_cast<std::size_t>(n + n_max)];
}

double SidebandSpectrum::second_moment() const {
  double acc = 0.0;
  for (int n = -n_max; n <= n_max; ++n) acc += static_cast<double>(n) * n * weight(n);
  return acc;
}

int default_sideband_order(double depth) {
  return static_cast<int>(std::ceil(depth)) + 20;
}

SidebandSpectrum sideband_coefficients(double depth, int n_max, double omega_mod) {
  if (!(depth >= 0.0) || !std::isfinite(depth)) throw InvalidArgument("sideband_coefficients: depth must be >= 0");
  if (n_max < 0) throw InvalidArgument("sideband_coefficients: n_max must be >= 0");
  if (!(omega_mod > 0.0)) throw InvalidArgument("sideband_coefficients: omega_mod must be positive");
  SidebandSpectrum s;
  s.n_max = n_max;
  s.omega_mod = omega_mod;
  s.f.resize(static_cast<std::size_t>(2 * n_max + 1));
  double total = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double j = depth == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::cyl_bessel_j(static_cast<double>(n), depth);
    const double w = j * j;
    s.f[static_cast<std::size_t>(n_max + n)] = w;
    s.f[static_cast<std::size_t>(n_max - n)] = w;
    total += n == 0 ? w : 2.0 * w;
  }
  // sum_n J_n(m)^2 = 1, so whatever is missing lives beyond n_max.
  const double tail = 1.0 - total;
  if (tail > 1e-10) {
    throw TruncationError("sideband_coefficients: n_max = " + std::to_string(n_max) + " drops " +
                          std::to_string(tail) + " of the sideband power at depth " + std::to_string(depth) +
                          "; use n_max >= depth + 20");
  }
  for (auto& w : s.f) w /= total;
  return s;
}

}  // namespace etsim::modulation
