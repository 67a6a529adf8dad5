#include <cmath>

#include "etsim/errors.hpp"
#include "etsim/interferometer.hpp"

namespace etsim::interferometer {

CoincidenceProfile::CoincidenceProfile(double tau_c)
    : tau_c_(tau_c),
      pair_([&] {
        if (!(tau_c > 0.0) || !std::isfinite(tau_c)) {
          throw InvalidArgument("coincidence profile: tau_c must be positive");
        }
        return dispersion::make_biphoton(dispersion::BiphotonState::with_auto_grids(0.0, 1.0 / tau_c, 0.0));
      }()) {
  // With a monochromatic pump the pair lives on the single centre row of the
  // sum axis; its difference-frequency amplitude is conjugate to t1 - t2.
  const std::size_t row = pair_.rows() / 2;
  for (std::size_t c = 0; c < pair_.cols(); ++c) {
    const double a = pair_.at(row, c).real();
    if (a == 0.0) continue;
    offsets_.push_back(pair_.state().diff_grid.offset(c));
    amplitude_.push_back(a);
  }
  double sum = 0.0;
  for (double a : amplitude_) sum += a;
  norm_ = sum * sum;
}

double CoincidenceProfile::operator()(double dt) const {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < offsets_.size(); ++j) {
    re += amplitude_[j] * std::cos(offsets_[j] * dt);
    im -= amplitude_[j] * std::sin(offsets_[j] * dt);
  }
  return (re * re + im * im) / norm_;
}

double CoincidenceProfile::width() const {
  const std::size_t n = 4001;
  const double reach = 12.0 * tau_c_;
  const double step = 2.0 * reach / static_cast<double>(n - 1);
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dt = -reach + step * static_cast<double>(k);
    const double r = (*this)(dt);
    w += r;
    m1 += r * dt;
    m2 += r * dt * dt;
  }
  const double mean = m1 / w;
  return std::sqrt(m2 / w - mean * mean);
}

CoincidenceProfile coincidence_profile_no_interferometers(double tau_c) { return CoincidenceProfile(tau_c); }

double classical_visibility_bound(const CoincidenceProfile& profile, double dt) {
  const double r0 = profile(0.0);
  const double r = profile(dt);
  return r / (r0 + r);
}

ViolationReport violation_report(double nu_observed, double bound) {
  if (!std::isfinite(nu_observed) || nu_observed < 0.0) {
    throw InvalidArgument("violation_report: visibility must be a finite, nonnegative number");
  }
  return ViolationReport{nu_observed, bound, nu_observed > bound};
}

InequalityReport inequality_report(const InterferometerSetup& setup, double nu_quantum, double nu_classical) {
  setup.validate();
  const CoincidenceProfile profile(setup.tau_c);
  InequalityReport r;
  r.delta_t_over_tau = setup.delta_T / setup.tau_c;
  r.bound = classical_visibility_bound(profile, setup.delta_T);
  r.nu_quantum = nu_quantum;
  r.nu_classical = nu_classical;
  r.violated = violation_report(nu_quantum, r.bound).violated;
  return r;
}

}  // namespace etsim::interferometer
