#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "etsim/chaotic.hpp"
#include "etsim/errors.hpp"

using namespace etsim;
using namespace etsim::chaotic;

namespace {

ChaoticFieldParams small_params(std::size_t records) {
  ChaoticFieldParams p;
  p.coherence_rate = 1.0;
  p.duration = 204.8;
  p.n_points = 4096;
  p.n_records = records;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  auto p = small_params(1);
  p.duration = 50.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = small_params(1);
  p.n_points = 1000;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = small_params(0);
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("field autocorrelation decays as exp(-Gamma tau)") {
  const auto p = small_params(40);
  const std::size_t lag = 20;  // tau = 1 / Gamma at dt = 0.05
  double power = 0.0, corr_re = 0.0, corr_im = 0.0;
  std::size_t n = 0, m = 0;
  for (std::size_t r = 0; r < p.n_records; ++r) {
    RandomStream rng(3, r);
    const auto f = generate_chaotic_field(p, rng);
    const auto v = f.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
      power += std::norm(v[j]);
      ++n;
      if (j + lag < v.size()) {
        const auto c = std::conj(v[j]) * v[j + lag];
        corr_re += c.real();
        corr_im += c.imag();
        ++m;
      }
    }
  }
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.03));
  CHECK(corr_re / m == doctest::Approx(std::exp(-1.0)).epsilon(0.06));
  CHECK(std::abs(corr_im / m) < 0.03);
}

TEST_CASE("intensity is exponentially distributed") {
  // Kolmogorov-Smirnov against 1 - exp(-I / P) on points 10 coherence times apart.
  const auto p = small_params(60);
  std::vector<double> samples;
  for (std::size_t r = 0; r < p.n_records; ++r) {
    RandomStream rng(8, r);
    const auto i = generate_chaotic_field(p, rng).intensity();
    for (std::size_t j = 0; j < i.size(); j += 200) samples.push_back(i[j]);
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double cdf = 1.0 - std::exp(-samples[k]);
    d = std::max({d, std::abs(cdf - k / n), std::abs(cdf - (k + 1) / n)});
  }
  CHECK(d < 1.63 / std::sqrt(n));  // 1% critical value
}

TEST_CASE("beam splitter halves the field in both ports") {
  auto p = small_params(1);
  RandomStream rng(1, 1);
  const auto f = generate_chaotic_field(p, rng);
  const auto [a, b] = beamsplit(f);
  CHECK(a.power() == doctest::Approx(0.5 * f.power()).epsilon(1e-12));
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST_CASE("cross-correlation obeys the Siegert relation") {
  auto p = small_params(200);
  const std::vector<double> taus{-2.0, -0.5, 0.0, 0.25, 1.0, 3.0};
  const auto rep = identical_dispersion_experiment(p, DispersiveMedium{}, taus, {21, 1});
  const auto& g = rep.without_medium;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const double oracle = 1.0 + std::exp(-2.0 * std::abs(g.tau[k]));
    CHECK(std::abs(g.g2[k] - oracle) < 4.0 * g.std_error[k] + 1e-3);
    CHECK(g.std_error[k] > 0.0);
  }
}

TEST_CASE("no medium gives bit-identical correlations") {
  auto p = small_params(8);
  const std::vector<double> taus{0.0, 0.5};
  const auto rep = identical_dispersion_experiment(p, DispersiveMedium(0.0, 1.0, 0.0), taus, {2, 1});
  CHECK(rep.with_medium.g2 == rep.without_medium.g2);
  CHECK(rep.dissimilarity == 0.0);
}

TEST_CASE("identical media change the trace but not the correlation") {
  auto p = small_params(60);
  const std::vector<double> taus{-1.0, 0.0, 0.5, 2.0};
  const auto rep = identical_dispersion_experiment(p, DispersiveMedium(0.0, 1.0, 1.0), taus, {4, 1});
  CHECK(rep.dissimilarity > 0.1);
  CHECK(rep.proportionality_error < 1e-12);
  CHECK(rep.max_difference_sigma < 3.0);
  CHECK(rep.beta_L_gamma2 == 1.0);
  CHECK(rep.total_samples == 60 * 4096);
}

TEST_CASE("dispersion too strong for the record is refused") {
  auto p = small_params(1);
  const std::vector<double> taus{0.0};
  CHECK_THROWS_AS(identical_dispersion_experiment(p, DispersiveMedium(0.0, 5.0, 1.0), taus, {}), AliasingError);
}

TEST_CASE("g2 accumulator input checks") {
  auto p = small_params(1);
  const std::vector<double> none;
  CHECK_THROWS_AS(G2Accumulator(p.grid(), none), EmptyInputError);
  const std::vector<double> too_far{500.0};
  CHECK_THROWS_AS(G2Accumulator(p.grid(), too_far), InvalidArgument);
  RandomStream rng(1, 0);
  const auto f = generate_chaotic_field(p, rng);
  const std::vector<double> taus{0.0};
  G2Accumulator acc(p.grid(), taus);
  CHECK_THROWS_AS(acc.add(to_freq_domain(f), f), DomainMismatchError);
  // Single record: errors come from segments.
  const auto g = g2_cross(f, f, taus);
  CHECK(g.std_error[0] > 0.0);
}

TEST_CASE("record-parallel runs are thread-count independent") {
  auto p = small_params(40);
  const std::vector<double> taus{0.0, 1.0};
  const DispersiveMedium m(0.0, 1.0, 1.0);
  const auto a = identical_dispersion_experiment(p, m, taus, {17, 1});
  const auto b = identical_dispersion_experiment(p, m, taus, {17, 4});
  CHECK(a.with_medium.g2 == b.with_medium.g2);
  CHECK(a.with_medium.std_error == b.with_medium.std_error);
}
