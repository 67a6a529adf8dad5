#include <cmath>

#include "etsim/dispersion.hpp"
#include "etsim/errors.hpp"

namespace etsim::dispersion {
namespace {

double common_length(const DispersiveMedium& m1, const DispersiveMedium& m2, const char* what) {
  const double tol = 1e-12 * std::max({1.0, m1.length, m2.length});
  if (std::abs(m1.length - m2.length) > tol) {
    throw UnsupportedConfigurationError(std::string(what) +
                                        ": closed form requires equal medium lengths; "
                                        "use the numeric propagation for unequal arms");
  }
  return m1.length;
}

void require_bandwidth(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("bandwidth must be positive");
}

}  // namespace

double sigma_T_closed_form(double sigma_F, const DispersiveMedium& m1, const DispersiveMedium& m2) {
  require_bandwidth(sigma_F);
  const double L = common_length(m1, m2, "sigma_T_closed_form");
  const double b = (m1.beta + m2.beta) * L;
  const double f2 = sigma_F * sigma_F;
  return std::sqrt(1.0 / f2 + b * b * f2);
}

double sigma_T_closed_form(const BiphotonState& s, const DispersiveMedium& m1,
                           const DispersiveMedium& m2) {
  return sigma_T_closed_form(s.sigma_F, m1, m2);
}

double sigma_C_closed_form(double sigma_F, const DispersiveMedium& m1, const DispersiveMedium& m2) {
  require_bandwidth(sigma_F);
  const double L = common_length(m1, m2, "sigma_C_closed_form");
  const double f2 = sigma_F * sigma_F;
  return std::sqrt(1.0 / (2.0 * f2) + (m1.beta * m1.beta + m2.beta * m2.beta) * L * L * f2);
}

double sigma_C_gaussian_pulses(double sigma_p, const DispersiveMedium& m1, const DispersiveMedium& m2) {
  require_bandwidth(sigma_p);
  const double p2 = sigma_p * sigma_p;
  const double b1 = m1.beta * m1.length;
  const double b2 = m2.beta * m2.length;
  return std::sqrt(2.0 / p2 + (b1 * b1 + b2 * b2) * p2);
}

}  // namespace etsim::dispersion
