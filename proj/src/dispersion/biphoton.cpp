#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "etsim/diagnostics.hpp"
#include "etsim/dispersion.hpp"
#include "etsim/errors.hpp"
#include "etsim/fft.hpp"

namespace etsim::dispersion {
namespace {

constexpr double kEdgeThreshold = 1e-6;

FrequencyGrid sum_axis(double omega0, double sigma_F, double sigma_pump, double sum_bandwidth,
                       double sum_duration) {
  if (sigma_pump == 0.0 && sum_bandwidth == 0.0) {
    return FrequencyGrid(FrequencyGrid::kMinPoints, 2.0 * omega0, 16.0 * sigma_F);
  }
  const double span = std::max(16.0 * sigma_pump, 2.0 * sum_bandwidth);
  double duration = sum_duration;
  if (sigma_pump > 0.0) duration = std::max(duration, 16.0 / sigma_pump);
  duration = std::max(duration, 2.0 * std::numbers::pi * FrequencyGrid::kMinPoints / span);
  const double needed = std::ceil(duration * span / (2.0 * std::numbers::pi));
  return FrequencyGrid(next_power_of_two(static_cast<std::size_t>(needed)), 2.0 * omega0, span);
}

}  // namespace

BiphotonState::BiphotonState(double omega0_, double sigma_F_, double sigma_pump_,
                             FrequencyGrid sum_grid_, FrequencyGrid diff_grid_)
    : omega0(omega0_), sigma_F(sigma_F_), sigma_pump(sigma_pump_), sum_grid(sum_grid_),
      diff_grid(diff_grid_) {
  if (!(sigma_F > 0.0) || !std::isfinite(sigma_F)) {
    throw InvalidArgument("BiphotonState: sigma_F must be positive");
  }
  if (!(sigma_pump >= 0.0) || !std::isfinite(sigma_pump)) {
    throw InvalidArgument("BiphotonState: sigma_pump must be >= 0");
  }
  if (sigma_pump > sigma_F / 10.0) {
    std::ostringstream msg;
    msg << "BiphotonState: sigma_pump = " << sigma_pump << " exceeds sigma_F/10 = " << sigma_F / 10.0
        << "; the pair is no longer in the narrow-pump regime";
    warn(msg.str());
  }
}

BiphotonState BiphotonState::with_auto_grids(double omega0, double sigma_F, double sigma_pump,
                                             double max_time_spread, double sum_bandwidth,
                                             double sum_duration) {
  if (!(sigma_F > 0.0)) throw InvalidArgument("BiphotonState: sigma_F must be positive");
  if (sigma_pump < 0.0 || max_time_spread < 0.0 || sum_bandwidth < 0.0 || sum_duration < 0.0) {
    throw InvalidArgument("BiphotonState: negative grid-sizing parameter");
  }
  const FrequencyGrid sum = sum_axis(omega0, sigma_F, sigma_pump, sum_bandwidth, sum_duration);
  // w1 - w0 = D + S/2, so the D axis must also absorb half the sum span.
  const double diff_bandwidth = sigma_F + (sigma_pump > 0.0 || sum_bandwidth > 0.0 ? sum.span() / 16.0 : 0.0);
  const FrequencyGrid diff =
      FrequencyGrid::sized_for(0.0, diff_bandwidth, std::max(1.0 / sigma_F, max_time_spread));
  return BiphotonState(omega0, sigma_F, sigma_pump, sum, diff);
}

JointSpectralAmplitude::JointSpectralAmplitude(BiphotonState state, std::vector<Complex> values,
                                               Domain domain)
    : state_(std::move(state)), values_(std::move(values)), domain_(domain) {
  if (values_.size() != rows() * cols()) {
    throw InvalidArgument("JointSpectralAmplitude: value count does not match the grids");
  }
}

double JointSpectralAmplitude::offset1(std::size_t row, std::size_t col) const {
  return state_.diff_grid.offset(col) + 0.5 * state_.sum_grid.offset(row);
}

double JointSpectralAmplitude::offset2(std::size_t row, std::size_t col) const {
  return -state_.diff_grid.offset(col) + 0.5 * state_.sum_grid.offset(row);
}

double JointSpectralAmplitude::cell_area() const {
  return domain_ == Domain::frequency
             ? state_.sum_grid.spacing() * state_.diff_grid.spacing()
             : state_.sum_grid.time_spacing() * state_.diff_grid.time_spacing();
}

double JointSpectralAmplitude::norm() const {
  double acc = 0.0;
  for (const auto& v : values_) acc += std::norm(v);
  return acc * cell_area();
}

namespace {

std::vector<Complex> column_profile(const JointSpectralAmplitude& a) {
  std::vector<Complex> out(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[c] += std::norm(a.at(r, c));
  }
  for (auto& v : out) v = std::sqrt(v.real());
  return out;
}

std::vector<Complex> row_profile(const JointSpectralAmplitude& a) {
  std::vector<Complex> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += std::norm(a.at(r, c));
    out[r] = std::sqrt(acc);
  }
  return out;
}

}  // namespace

void check_joint_edges(const JointSpectralAmplitude& a, const char* what) {
  check_edges(column_profile(a), kEdgeThreshold, what);
  if (a.rows() > 1) check_edges(row_profile(a), kEdgeThreshold, what);
}

JointSpectralAmplitude make_biphoton(const BiphotonState& s) {
  const std::size_t rows = s.sum_grid.size();
  const std::size_t cols = s.diff_grid.size();
  std::vector<Complex> values(rows * cols);
  const double inv_f2 = 1.0 / (s.sigma_F * s.sigma_F);
  for (std::size_t r = 0; r < rows; ++r) {
    const double sum = s.sum_grid.offset(r);
    double pump = 0.0;
    if (s.sigma_pump > 0.0) {
      pump = std::exp(-sum * sum / (2.0 * s.sigma_pump * s.sigma_pump));
    } else if (r == rows / 2) {
      pump = 1.0;
    }
    if (pump == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      const double e1 = s.diff_grid.offset(c) + 0.5 * sum;
      values[r * cols + c] = pump * std::exp(-e1 * e1 * inv_f2);
    }
  }
  JointSpectralAmplitude raw(s, std::move(values), Domain::frequency);
  check_edges(column_profile(raw), kEdgeThreshold, "biphoton difference-frequency grid");
  if (s.sigma_pump > 0.0) check_edges(row_profile(raw), kEdgeThreshold, "biphoton sum-frequency grid");

  const double scale = 1.0 / std::sqrt(raw.norm());
  std::vector<Complex> normalized(raw.values().begin(), raw.values().end());
  for (auto& v : normalized) v *= scale;
  return JointSpectralAmplitude(s, std::move(normalized), Domain::frequency);
}

JointSpectralAmplitude propagate_biphoton(const JointSpectralAmplitude& jsa,
                                          const DispersiveMedium& m1, const DispersiveMedium& m2) {
  if (jsa.domain() != Domain::frequency) {
    throw DomainMismatchError("propagate_biphoton: expected the joint spectral amplitude");
  }
  if (m1.is_identity() && m2.is_identity()) return jsa;
  std::vector<Complex> values(jsa.values().begin(), jsa.values().end());
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t c = 0; c < jsa.cols(); ++c) {
      // Arm 2 uses the mirrored branch in terms of photon 1's offset, e = -(w2 - w0).
      const double phase = m1.phase(jsa.offset1(r, c), +1) + m2.phase(-jsa.offset2(r, c), -1);
      values[r * jsa.cols() + c] *= std::polar(1.0, phase);
    }
  }
  return JointSpectralAmplitude(jsa.state(), std::move(values), Domain::frequency);
}

namespace {

JointSpectralAmplitude transform(const JointSpectralAmplitude& a, Domain target) {
  if (a.domain() == target) {
    throw DomainMismatchError(std::string("joint amplitude is already in the ") +
                              to_string(target) + " domain");
  }
  std::vector<Complex> data(a.values().begin(), a.values().end());
  const auto sign = target == Domain::time ? detail::FftSign::minus : detail::FftSign::plus;
  detail::centered_dft_2d(data, a.rows(), a.cols(), sign);
  const double scale = a.cell_area() / (2.0 * std::numbers::pi);
  for (auto& v : data) v *= scale;
  return JointSpectralAmplitude(a.state(), std::move(data), target);
}

}  // namespace

JointSpectralAmplitude to_joint_time(const JointSpectralAmplitude& jsa) {
  return transform(jsa, Domain::time);
}

JointSpectralAmplitude to_joint_spectrum(const JointSpectralAmplitude& jta) {
  return transform(jta, Domain::frequency);
}

SpectralMoments spectral_moments(const JointSpectralAmplitude& jsa) {
  if (jsa.domain() != Domain::frequency) {
    throw DomainMismatchError("spectral_moments: expected the joint spectral amplitude");
  }
  double w = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t c = 0; c < jsa.cols(); ++c) {
      const double p = std::norm(jsa.at(r, c));
      w += p;
      s1 += p * jsa.offset1(r, c);
      s2 += p * jsa.offset2(r, c);
    }
  }
  if (!(w > 0.0)) throw DegenerateWeightsError("spectral_moments: zero joint amplitude");
  SpectralMoments m;
  m.mean1 = s1 / w;
  m.mean2 = s2 / w;
  double v1 = 0.0, v2 = 0.0, c12 = 0.0;
  for (std::size_t r = 0; r < jsa.rows(); ++r) {
    for (std::size_t c = 0; c < jsa.cols(); ++c) {
      const double p = std::norm(jsa.at(r, c));
      const double d1 = jsa.offset1(r, c) - m.mean1;
      const double d2 = jsa.offset2(r, c) - m.mean2;
      v1 += p * d1 * d1;
      v2 += p * d2 * d2;
      c12 += p * d1 * d2;
    }
  }
  m.var1 = v1 / w;
  m.var2 = v2 / w;
  m.cov12 = c12 / w;
  m.var_sum = m.var1 + m.var2 + 2.0 * m.cov12;
  return m;
}

std::vector<double> time_difference_density(const JointSpectralAmplitude& jsa) {
  const JointSpectralAmplitude jta = jsa.domain() == Domain::time ? jsa : to_joint_time(jsa);
  const auto profile = column_profile(jta);
  check_edges(profile, kEdgeThreshold, "biphoton t1 - t2 window");
  std::vector<double> density(profile.size());
  const double dT = jta.state().sum_grid.time_spacing();
  for (std::size_t c = 0; c < profile.size(); ++c) density[c] = std::norm(profile[c]) * dT;
  return density;
}

SummaryStats timing_difference_quantum(const JointSpectralAmplitude& jsa) {
  const auto density = time_difference_density(jsa);
  std::vector<double> tau(density.size());
  for (std::size_t c = 0; c < tau.size(); ++c) tau[c] = jsa.state().diff_grid.time(c);
  SummaryStats s;
  s.mean = weighted_mean(tau, density);
  s.std = weighted_std(tau, density);
  s.n_samples = tau.size();
  s.std_error = 0.0;
  return s;
}

}  // namespace etsim::dispersion
