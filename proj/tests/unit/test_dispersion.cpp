#include "doctest.h"

#include <cmath>
#include <vector>

#include "etsim/dispersion.hpp"
#include "etsim/errors.hpp"

using namespace etsim;
using namespace etsim::dispersion;

namespace {

// Joint spectral intensity exp(-2 e1^2 / sF^2) with e2 = -e1 (narrow pump):
// each marginal has variance sF^2 / 4 and t1 - t2 has variance
// 1/sF^2 + (b1 + b2)^2 L^2 sF^2.
double sigma_T_oracle(double sF, double b1, double b2, double L) {
  return std::sqrt(1.0 / (sF * sF) + (b1 + b2) * (b1 + b2) * L * L * sF * sF);
}

double quantum_width(double sF, const DispersiveMedium& m1, const DispersiveMedium& m2) {
  const double spread = sigma_T_closed_form(sF, m1, m2) + std::abs(m1.alpha * m1.length - m2.alpha * m2.length);
  const auto s = BiphotonState::with_auto_grids(0.0, sF, 0.0, spread);
  return timing_difference_quantum(propagate_biphoton(make_biphoton(s), m1, m2)).std;
}

}  // namespace

TEST_CASE("closed forms") {
  const DispersiveMedium a(0.0, 1.0, 1.0), b(0.0, -1.0, 1.0), c(0.0, 1.0, 1.0);
  CHECK(sigma_T_closed_form(1.0, a, b) == doctest::Approx(1.0));
  CHECK(sigma_T_closed_form(1.0, a, c) == doctest::Approx(std::sqrt(5.0)));
  CHECK(sigma_T_closed_form(2.0, DispersiveMedium{}, DispersiveMedium{}) == doctest::Approx(0.5));
  CHECK(sigma_C_closed_form(1.0, a, b) == doctest::Approx(std::sqrt(0.5 + 2.0)));
  CHECK(sigma_C_gaussian_pulses(1.0, a, b) == doctest::Approx(2.0));
  CHECK_THROWS_AS(sigma_T_closed_form(1.0, DispersiveMedium(0.0, 1.0, 1.0), DispersiveMedium(0.0, 1.0, 2.0)),
                  UnsupportedConfigurationError);
  CHECK_THROWS_AS(sigma_C_closed_form(1.0, DispersiveMedium(0.0, 1.0, 1.0), DispersiveMedium(0.0, 1.0, 2.0)),
                  UnsupportedConfigurationError);
}

TEST_CASE("biphoton spectral moments with a monochromatic pump") {
  const double sF = 2.0;
  const auto jsa = make_biphoton(BiphotonState::with_auto_grids(10.0, sF, 0.0));
  CHECK(jsa.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jsa.rows() == 64);
  const auto m = spectral_moments(jsa);
  CHECK(std::abs(m.mean1) < 1e-12);
  CHECK(m.var1 == doctest::Approx(sF * sF / 4.0).epsilon(1e-9));
  CHECK(m.var2 == doctest::Approx(sF * sF / 4.0).epsilon(1e-9));
  CHECK(m.cov12 == doctest::Approx(-sF * sF / 4.0).epsilon(1e-9));
  CHECK(std::abs(m.var_sum) < 1e-12);
}

TEST_CASE("finite pump width sets the sum-frequency variance") {
  const double sp = 0.05;
  const auto jsa = make_biphoton(BiphotonState::with_auto_grids(0.0, 1.0, sp));
  const auto m = spectral_moments(jsa);
  // |exp(-S^2 / (2 sp^2))|^2 has variance sp^2 / 2.
  CHECK(m.var_sum == doctest::Approx(sp * sp / 2.0).epsilon(1e-6));
}

TEST_CASE("joint time transform is unitary") {
  const auto jsa = make_biphoton(BiphotonState::with_auto_grids(0.0, 1.0, 0.05));
  const auto jta = to_joint_time(jsa);
  CHECK(jta.domain() == Domain::time);
  CHECK(jta.norm() == doctest::Approx(1.0).epsilon(1e-10));
  const auto back = to_joint_spectrum(jta);
  double worst = 0.0;
  for (std::size_t i = 0; i < back.values().size(); ++i) {
    worst = std::max(worst, std::abs(back.values()[i] - jsa.values()[i]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("timing width follows the two-photon closed form") {
  const double cases[][4] = {{1.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0},  {1.0, 1.0, -1.0, 2.0},
                             {2.0, 0.5, 0.0, 1.0}, {0.5, -2.0, 1.0, 2.0}, {1.0, 2.0, 2.0, 2.0}};
  for (const auto& c : cases) {
    const DispersiveMedium m1(0.0, c[1], c[3]), m2(0.0, c[2], c[3]);
    CHECK(quantum_width(c[0], m1, m2) == doctest::Approx(sigma_T_oracle(c[0], c[1], c[2], c[3])).epsilon(1e-3));
  }
}

TEST_CASE("opposite dispersion cancels for any length") {
  for (double L : {0.5, 3.0, 10.0}) {
    CHECK(quantum_width(1.0, DispersiveMedium(0.0, 1.5, L), DispersiveMedium(0.0, -1.5, L)) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("group delays shift but do not broaden the pair") {
  const DispersiveMedium m1(1.0, 0.0, 4.0), m2(0.0, 0.0, 4.0);
  const auto s = BiphotonState::with_auto_grids(0.0, 1.0, 0.0, 8.0);
  const auto st = timing_difference_quantum(propagate_biphoton(make_biphoton(s), m1, m2));
  CHECK(std::abs(st.mean) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(st.std == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("a too-small time window raises an aliasing error") {
  const auto s = BiphotonState::with_auto_grids(0.0, 1.0, 0.0);
  const auto jsa = propagate_biphoton(make_biphoton(s), DispersiveMedium(0.0, 5.0, 4.0), DispersiveMedium(0.0, 5.0, 4.0));
  CHECK_THROWS_AS(timing_difference_quantum(jsa), AliasingError);
}

TEST_CASE("invalid pair parameters are rejected") {
  CHECK_THROWS_AS(BiphotonState::with_auto_grids(0.0, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(BiphotonState::with_auto_grids(0.0, 1.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(DispersiveMedium(0.0, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("pulse train without jitter matches independent Gaussian pulses") {
  PulseTrainModel model;
  model.sigma_p = 1.0;
  model.n_pulses = 4000;
  const DispersiveMedium m1(0.0, 1.0, 1.0), m2(0.0, -0.5, 1.0);
  const auto r = simulate_pulse_train(model, m1, m2, 4, {123, 1});
  const double oracle = sigma_C_gaussian_pulses(1.0, m1, m2);
  CHECK(std::abs(r.time_difference.std - oracle) < 3.0 * r.std_error_of_std);
  CHECK(r.width1 == doctest::Approx(std::sqrt(1.0 + 1.0)).epsilon(1e-6));
  CHECK(r.width2 == doctest::Approx(std::sqrt(1.0 + 0.25)).epsilon(1e-6));
  // Never narrower than the textbook classical expression allows.
  CHECK(r.time_difference.std > sigma_C_closed_form(1.0, m1, m2) - 3.0 * r.std_error_of_std);
}

TEST_CASE("frequency jitter moves pulses by 2 L (beta1 + beta2) dw") {
  PulseTrainModel model;
  model.sigma_p = 1.0;
  model.sigma_D = 3.0;
  model.n_pulses = 3000;
  {
    const DispersiveMedium m1(0.0, 1.0, 1.0), m2(0.0, 0.5, 1.0);
    const auto r = simulate_pulse_train(model, m1, m2, 1, {5, 1});
    CHECK(std::abs(r.delay_vs_jitter.slope - 3.0) < 4.0 * r.delay_vs_jitter.slope_error);
  }
  {
    const DispersiveMedium m1(0.0, 1.0, 1.0), m2(0.0, -1.0, 1.0);
    const auto r = simulate_pulse_train(model, m1, m2, 1, {5, 1});
    CHECK(std::abs(r.delay_vs_jitter.slope) < 4.0 * r.delay_vs_jitter.slope_error);
    CHECK(std::abs(r.time_difference.std - sigma_C_gaussian_pulses(1.0, m1, m2)) < 3.0 * r.std_error_of_std);
  }
}

TEST_CASE("pulse train runs are thread-count independent") {
  PulseTrainModel model;
  model.sigma_D = 0.5;
  model.n_pulses = 3000;
  const DispersiveMedium m1(0.0, 1.0, 1.0), m2(0.0, -1.0, 1.0);
  const auto a = simulate_pulse_train(model, m1, m2, 2, {9, 1});
  const auto b = simulate_pulse_train(model, m1, m2, 2, {9, 3});
  CHECK(a.time_difference.mean == b.time_difference.mean);
  CHECK(a.time_difference.std == b.time_difference.std);
  CHECK(a.delay_vs_jitter.slope == b.delay_vs_jitter.slope);
}

TEST_CASE("correlation width comparison at equal total bandwidth") {
  PulseTrainModel model;
  model.sigma_p = 1.0;
  model.sigma_D = 0.0;
  model.n_pulses = 4000;
  const DispersiveMedium none;
  const auto s = BiphotonState::with_auto_grids(0.0, 1.0, 0.0);
  const auto r = correlation_width_comparison(1.0, model, s, none, none, {1, 1});
  CHECK(r.quantum_width == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  const auto wrong = BiphotonState::with_auto_grids(0.0, 2.0, 0.0);
  CHECK_THROWS_AS(correlation_width_comparison(1.0, model, wrong, none, none, {1, 1}), InvalidArgument);
}
