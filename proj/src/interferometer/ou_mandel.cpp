#include <cmath>
#include <numbers>

#include "etsim/errors.hpp"
#include "etsim/interferometer.hpp"
#include "etsim/parallel.hpp"

namespace etsim::interferometer {
namespace {

constexpr std::size_t kBatches = 16;

// Output intensity of one interferometer fed by a unit-intensity laser whose
// detuning from the reference frequency is dw (the reference phase w0 dT is
// absorbed into phi). The laser's absolute phase drops out.
double output(double phi, double dw, double delta_T) {
  return 0.5 * (1.0 + std::cos(phi + dw * delta_T));
}

}  // namespace

OuMandelModel::OuMandelModel(const InterferometerSetup& setup, std::size_t trials, const MonteCarloOptions& opts,
                             double bandwidth)
    : setup_(setup), bandwidth_(bandwidth > 0.0 ? bandwidth : 1.0 / setup.tau_c) {
  setup.validate();
  if (trials < kBatches) throw InvalidArgument("OuMandelModel: need at least 16 trials");
  auto blocks = run_blocks(trials, opts.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> out;
    out.reserve(end - begin);
    for (std::size_t t = begin; t < end; ++t) {
      RandomStream rng(opts.seed, t);
      out.push_back(rng.normal(0.0, bandwidth_));
    }
    return out;
  });
  auto detuning = std::make_shared<std::vector<double>>();
  detuning->reserve(trials);
  for (const auto& b : blocks) detuning->insert(detuning->end(), b.begin(), b.end());
  detuning_ = std::move(detuning);
}

double OuMandelModel::rate_over(double phi1, double phi2, std::size_t begin, std::size_t end) const {
  const auto& dw = *detuning_;
  double acc = 0.0;
  for (std::size_t t = begin; t < end; ++t) {
    // Laser 1 at w0 + dw, laser 2 at w0 - dw.
    acc += output(phi1, dw[t], setup_.delta_T) * output(phi2, -dw[t], setup_.delta_T);
  }
  return acc / static_cast<double>(end - begin);
}

SummaryStats OuMandelModel::rate(double phi1, double phi2) const {
  const auto& dw = *detuning_;
  RunningStats acc;
  for (double d : dw) acc.add(output(phi1, d, setup_.delta_T) * output(phi2, -d, setup_.delta_T));
  return acc.summary();
}

SummaryStats OuMandelModel::marginal(double phi1) const {
  RunningStats acc;
  for (double d : *detuning_) acc.add(output(phi1, d, setup_.delta_T));
  return acc.summary();
}

double OuMandelModel::correlation(double phi1, double phi2) const {
  const double r = rate_over(phi1, phi2, 0, trials());
  const double r_flip = rate_over(phi1, phi2 + std::numbers::pi, 0, trials());
  return (r - r_flip) / (r + r_flip);
}

OuMandelModel OuMandelModel::subset(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > trials()) throw InvalidArgument("OuMandelModel::subset: bad trial range");
  OuMandelModel out = *this;
  out.detuning_ = std::make_shared<const std::vector<double>>(detuning_->begin() + static_cast<std::ptrdiff_t>(begin),
                                                              detuning_->begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

CorrelationFunction OuMandelModel::correlation_function() const {
  auto self = *this;
  return CorrelationFunction([self](double a, double b) { return self.correlation(a, b); },
                             Provenance::classical_model);
}

std::pair<ChshReport, double> OuMandelModel::chsh_with_error(const ChshSettings& settings) const {
  const ChshReport full = chsh(correlation_function(), settings);
  const std::size_t n = trials();
  RunningStats spread;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const std::size_t begin = b * n / kBatches;
    const std::size_t end = (b + 1) * n / kBatches;
    auto e = [&](double p1, double p2) {
      const double r = rate_over(p1, p2, begin, end);
      const double r_flip = rate_over(p1, p2 + std::numbers::pi, begin, end);
      return (r - r_flip) / (r + r_flip);
    };
    spread.add(std::abs(e(settings.a, settings.b) + e(settings.a, settings.b_prime) +
                        e(settings.a_prime, settings.b) - e(settings.a_prime, settings.b_prime)));
  }
  return {full, std::sqrt(spread.variance() / static_cast<double>(kBatches))};
}

double OuMandelModel::expected_rate(double phi1, double phi2) const {
  const double x = 0.5 * bandwidth_ * bandwidth_ * setup_.delta_T * setup_.delta_T;
  const double damp = std::exp(-x);
  return 0.25 * (1.0 + damp * std::cos(phi1) + damp * std::cos(phi2) + 0.5 * std::cos(phi1 + phi2) +
                 0.5 * std::exp(-4.0 * x) * std::cos(phi1 - phi2));
}

double fitted_visibility(std::span<const double> rates) {
  const std::size_t n = rates.size();
  if (n < 3) throw InvalidArgument("fitted_visibility: need at least 3 evenly spaced phases");
  const auto phases = phase_scan(n);
  double a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    a += rates[k];
    b += rates[k] * std::cos(phases[k]);
    c += rates[k] * std::sin(phases[k]);
  }
  a /= static_cast<double>(n);
  b *= 2.0 / static_cast<double>(n);
  c *= 2.0 / static_cast<double>(n);
  if (!(a > 0.0)) throw DegenerateWeightsError("fitted_visibility: mean rate is not positive");
  return std::hypot(b, c) / a;
}

OuMandelResult ou_mandel_simulate(const InterferometerSetup& setup, std::size_t trials, std::size_t n_phases,
                                  const MonteCarloOptions& opts) {
  if (trials < 10000) throw InvalidArgument("ou_mandel_simulate: trials must be >= 10^4");
  if (n_phases < 3) throw InvalidArgument("ou_mandel_simulate: need at least 3 phase settings");
  const OuMandelModel model(setup, trials, opts);
  const auto phases = phase_scan(n_phases);

  OuMandelResult result;
  std::vector<double> rates, marginals;
  for (double p : phases) {
    // Scan phi1 so that phi1 + phi2 runs over the scan.
    const double phi1 = p - setup.phi2;
    const SummaryStats r = model.rate(phi1, setup.phi2);
    result.fringe.push_back({p, r.mean, r.std_error});
    rates.push_back(r.mean);
    marginals.push_back(model.marginal(p).mean);
  }
  result.visibility = fitted_visibility(rates);
  result.marginal_visibility = fitted_visibility(marginals);

  RunningStats vis_spread, marg_spread;
  for (std::size_t b = 0; b < kBatches; ++b) {
    const OuMandelModel batch = model.subset(b * trials / kBatches, (b + 1) * trials / kBatches);
    std::vector<double> br, bm;
    for (double p : phases) {
      br.push_back(batch.rate(p - setup.phi2, setup.phi2).mean);
      bm.push_back(batch.marginal(p).mean);
    }
    vis_spread.add(fitted_visibility(br));
    marg_spread.add(fitted_visibility(bm));
  }
  result.visibility_error = std::sqrt(vis_spread.variance() / static_cast<double>(kBatches));
  result.marginal_visibility_error = std::sqrt(marg_spread.variance() / static_cast<double>(kBatches));
  return result;
}

}  // namespace etsim::interferometer
