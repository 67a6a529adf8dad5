#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "etsim/errors.hpp"
#include "etsim/interferometer.hpp"
#include "etsim/parallel.hpp"

namespace etsim::interferometer {

void InterferometerSetup::validate() const {
  if (!(tau_c > 0.0) || !std::isfinite(tau_c)) throw InvalidArgument("InterferometerSetup: tau_c must be positive");
  if (!(window > 0.0)) throw InvalidArgument("InterferometerSetup: window must be positive");
  if (!(delta_T > 3.0 * tau_c)) {
    throw InvalidArgument("InterferometerSetup: delta_T must exceed 3 tau_c (got delta_T = " + std::to_string(delta_T) +
                          ", tau_c = " + std::to_string(tau_c) + ")");
  }
  if (!(window < delta_T / 2.0)) throw InvalidArgument("InterferometerSetup: window must be below delta_T / 2");
  if (!std::isfinite(phi1) || !std::isfinite(phi2)) throw InvalidArgument("InterferometerSetup: phases must be finite");
}

CoincidenceRates quantum_coincidence_rate(const InterferometerSetup& setup) {
  setup.validate();
  CoincidenceRates r;
  r.coincident = (1.0 + std::cos(setup.phi1 + setup.phi2)) / 8.0;
  r.ls = 1.0 / 16.0;
  r.sl = 1.0 / 16.0;
  return r;
}

std::vector<double> phase_scan(std::size_t n) {
  if (n == 0) throw InvalidArgument("phase_scan: need at least one phase");
  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k) {
    phases[k] = std::numbers::pi * (2.0 * static_cast<double>(k) / static_cast<double>(n));
  }
  return phases;
}

double fringe_visibility(std::span<const double> rates) {
  if (rates.empty()) throw EmptyInputError("fringe_visibility: no rates");
  const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
  if (!(*hi + *lo > 0.0)) throw DegenerateWeightsError("fringe_visibility: all rates are zero");
  return (*hi - *lo) / (*hi + *lo);
}

double quantum_visibility(const InterferometerSetup& setup) {
  InterferometerSetup peak = setup;
  peak.phi1 = 0.0;
  peak.phi2 = 0.0;
  InterferometerSetup trough = peak;
  trough.phi1 = std::numbers::pi;
  const double rates[] = {quantum_coincidence_rate(peak).coincident, quantum_coincidence_rate(trough).coincident};
  return fringe_visibility(rates);
}

const char* to_string(Path p) { return p == Path::L ? "L" : "S"; }

std::vector<EventRecord> sample_quantum_events(const InterferometerSetup& setup, std::size_t n_pairs,
                                               const MonteCarloOptions& opts) {
  const CoincidenceRates rates = quantum_coincidence_rate(setup);
  // Conditional on a detection pair: LL and SS share the interfering rate.
  const double total = rates.coincident + rates.ls + rates.sl;
  const double cdf[] = {0.5 * rates.coincident / total, rates.coincident / total,
                        (rates.coincident + rates.ls) / total, 1.0};
  const double jitter = setup.tau_c / std::numbers::sqrt2;
  // Strictly inside (delta_T - window) / 2, so a mixed pair can never land in the window.
  const double cut = 0.5 * (setup.delta_T - setup.window) * (1.0 - 1e-9);

  auto blocks = run_blocks(n_pairs, opts.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<EventRecord> out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng(opts.seed, i);
      EventRecord ev;
      switch (rng.from_cdf(cdf)) {
        case 0: ev.path1 = Path::L; ev.path2 = Path::L; break;
        case 1: ev.path1 = Path::S; ev.path2 = Path::S; break;
        case 2: ev.path1 = Path::L; ev.path2 = Path::S; break;
        default: ev.path1 = Path::S; ev.path2 = Path::L; break;
      }
      auto draw = [&] {
        for (;;) {
          const double j = rng.normal(0.0, jitter);
          if (std::abs(j) < cut) return j;
        }
      };
      ev.t1 = (ev.path1 == Path::L ? setup.delta_T : 0.0) + draw();
      ev.t2 = (ev.path2 == Path::L ? setup.delta_T : 0.0) + draw();
      out.push_back(ev);
    }
    return out;
  });
  std::vector<EventRecord> events;
  events.reserve(n_pairs);
  for (auto& b : blocks) events.insert(events.end(), b.begin(), b.end());
  return events;
}

PostSelection post_select(std::span<const EventRecord> events, double window) {
  if (events.empty()) throw EmptyInputError("post_select: empty event stream");
  if (!(window > 0.0)) throw InvalidArgument("post_select: window must be positive");
  PostSelection out;
  for (const auto& ev : events) {
    if (std::abs(ev.t1 - ev.t2) <= window) {
      EventRecord kept = ev;
      kept.accepted = true;
      out.accepted.push_back(kept);
    }
  }
  out.fraction = static_cast<double>(out.accepted.size()) / static_cast<double>(events.size());
  return out;
}

CorrelationFunction::CorrelationFunction(std::function<double(double, double)> e, Provenance provenance)
    : e_(std::move(e)), provenance_(provenance) {
  if (!e_) throw InvalidArgument("CorrelationFunction: empty callable");
}

double CorrelationFunction::operator()(double phi1, double phi2) const {
  const double v = e_(phi1, phi2);
  if (!(std::abs(v) <= 1.0 + 1e-12)) {
    throw InvalidArgument("CorrelationFunction: |E| = " + std::to_string(std::abs(v)) + " exceeds 1");
  }
  return v;
}

CorrelationFunction quantum_correlation(const InterferometerSetup& setup) {
  setup.validate();
  return CorrelationFunction(
      [setup](double phi1, double phi2) {
        InterferometerSetup s = setup;
        s.phi1 = phi1;
        s.phi2 = phi2;
        const double r = quantum_coincidence_rate(s).coincident;
        s.phi2 = phi2 + std::numbers::pi;
        const double r_flip = quantum_coincidence_rate(s).coincident;
        return (r - r_flip) / (r + r_flip);
      },
      Provenance::quantum);
}

ChshReport chsh(const CorrelationFunction& e, const ChshSettings& settings) {
  ChshReport r;
  r.settings = settings;
  r.e_ab = e(settings.a, settings.b);
  r.e_ab_prime = e(settings.a, settings.b_prime);
  r.e_a_prime_b = e(settings.a_prime, settings.b);
  r.e_a_prime_b_prime = e(settings.a_prime, settings.b_prime);
  r.S = std::abs(r.e_ab + r.e_ab_prime + r.e_a_prime_b - r.e_a_prime_b_prime);
  return r;
}

}  // namespace etsim::interferometer
