#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "etsim/dispersion.hpp"
#include "etsim/random.hpp"
#include "etsim/stats.hpp"

/// Two unbalanced interferometers, one per photon, with phase shifts on the
/// long arms. Rates are probabilities per emitted pair at one monitored
/// output port per interferometer.
namespace etsim::interferometer {

struct InterferometerSetup {
  double delta_T = 5.0;  // long minus short path delay
  double phi1 = 0.0;
  double phi2 = 0.0;
  double tau_c = 1.0;    // two-photon correlation time, 1 / sigma_F
  double window = 1.0;   // coincidence window

  /// delta_T > 3 tau_c and window < delta_T / 2.
  void validate() const;
};

struct CoincidenceRates {
  double coincident = 0.0;  // LL + SS, post-selected
  double ls = 0.0;
  double sl = 0.0;

  /// Coincident rate relative to its maximum 1/4: (1 + cos(phi1 + phi2)) / 2.
  double fringe() const { return 4.0 * coincident; }
};

/// LL and SS amplitudes are 1/4 each and interfere:
/// coincident = (1 + cos(phi1 + phi2)) / 8, LS = SL = 1/16.
CoincidenceRates quantum_coincidence_rate(const InterferometerSetup& setup);

/// Phases 2 pi k / n, k = 0..n-1; k = n/2 is pi exactly for even n.
std::vector<double> phase_scan(std::size_t n);

/// (max - min) / (max + min) of a scanned fringe.
double fringe_visibility(std::span<const double> rates);

/// Closed-form quantum visibility from the rates at phi1 + phi2 = 0 and pi.
double quantum_visibility(const InterferometerSetup& setup);

enum class Path { S, L };
const char* to_string(Path p);

struct EventRecord {
  double t1 = 0.0;
  double t2 = 0.0;
  Path path1 = Path::S;
  Path path2 = Path::S;
  bool accepted = false;
};

/// Detection events drawn from the amplitude model: path pair by its rate,
/// arrival offset 0 or delta_T, and per-photon jitter of std tau_c / sqrt(2)
/// truncated at +-(delta_T - window) / 2. `accepted` is left false.
std::vector<EventRecord> sample_quantum_events(const InterferometerSetup& setup, std::size_t n_pairs,
                                               const MonteCarloOptions& opts);

struct PostSelection {
  std::vector<EventRecord> accepted;
  double fraction = 0.0;
};

/// Keeps events with |t1 - t2| <= window. Throws EmptyInputError on an empty stream.
PostSelection post_select(std::span<const EventRecord> events, double window);

enum class Provenance { quantum, classical_model };

/// Bell correlator E(phi1, phi2) = (R(phi1, phi2) - R(phi1, phi2 + pi)) / (sum).
class CorrelationFunction {
 public:
  CorrelationFunction(std::function<double(double, double)> e, Provenance provenance);
  /// Throws InvalidArgument if the underlying value leaves [-1, 1].
  double operator()(double phi1, double phi2) const;
  Provenance provenance() const { return provenance_; }

 private:
  std::function<double(double, double)> e_;
  Provenance provenance_;
};

CorrelationFunction quantum_correlation(const InterferometerSetup& setup);

struct ChshSettings {
  double a = 0.0;
  double a_prime = -0.5 * std::numbers::pi;
  double b = 0.25 * std::numbers::pi;
  double b_prime = -0.25 * std::numbers::pi;
};

struct ChshReport {
  ChshSettings settings;
  double e_ab = 0.0, e_ab_prime = 0.0, e_a_prime_b = 0.0, e_a_prime_b_prime = 0.0;
  double S = 0.0;
};

/// S = |E(a,b) + E(a,b') + E(a',b) - E(a',b')|.
ChshReport chsh(const CorrelationFunction& e, const ChshSettings& settings = {});

/// Classical model of two lasers with anti-correlated frequencies w0 +- dw,
/// dw ~ N(0, bandwidth^2), each feeding one interferometer. The coincidence
/// proxy is the product of the two output intensities, which for
/// monochromatic trials is constant over the coincidence window.
class OuMandelModel {
 public:
  /// `bandwidth` <= 0 selects 1 / tau_c.
  OuMandelModel(const InterferometerSetup& setup, std::size_t trials, const MonteCarloOptions& opts,
                double bandwidth = 0.0);

  std::size_t trials() const { return detuning_->size(); }
  const InterferometerSetup& setup() const { return setup_; }

  /// Mean intensity product <I1 I2> with its standard error.
  SummaryStats rate(double phi1, double phi2) const;
  /// Mean output intensity of interferometer 1 alone.
  SummaryStats marginal(double phi1) const;
  double correlation(double phi1, double phi2) const;
  CorrelationFunction correlation_function() const;
  /// S and its standard error from 16 batches of trials.
  std::pair<ChshReport, double> chsh_with_error(const ChshSettings& settings = {}) const;

  /// The same model restricted to trials [begin, end).
  OuMandelModel subset(std::size_t begin, std::size_t end) const;

  /// Analytic <I1 I2> for Gaussian detuning, used as a cross-check.
  double expected_rate(double phi1, double phi2) const;

 private:
  double rate_over(double phi1, double phi2, std::size_t begin, std::size_t end) const;

  InterferometerSetup setup_;
  double bandwidth_;
  std::shared_ptr<const std::vector<double>> detuning_;
};

struct FringePoint {
  double phi_sum = 0.0;
  double rate = 0.0;
  double std_error = 0.0;
};

struct OuMandelResult {
  std::vector<FringePoint> fringe;           // phi1 scanned, phi2 = setup.phi2
  double visibility = 0.0;                   // fit of A + B cos + C sin
  double visibility_error = 0.0;
  double marginal_visibility = 0.0;          // same fit of <I1> vs phi1
  double marginal_visibility_error = 0.0;
};

/// Scans phi1 over n_phases evenly spaced values (n_phases >= 3).
/// Requires trials >= 10^4.
OuMandelResult ou_mandel_simulate(const InterferometerSetup& setup, std::size_t trials, std::size_t n_phases,
                                  const MonteCarloOptions& opts);

/// Fitted visibility sqrt(B^2 + C^2) / A of rates on an evenly spaced full-period scan.
double fitted_visibility(std::span<const double> rates);

/// Coincidence rate against detector time offset with no interferometers in
/// place, normalized to 1 at zero offset. Built from the entangled pair at
/// L = 0 by summing its difference-frequency amplitude directly, so the
/// far tail is not limited by a time grid.
class CoincidenceProfile {
 public:
  explicit CoincidenceProfile(double tau_c);

  double tau_c() const { return tau_c_; }
  double operator()(double dt) const;
  /// Std of the profile as a density in dt, by quadrature.
  double width() const;
  const dispersion::JointSpectralAmplitude& pair() const { return pair_; }

 private:
  double tau_c_;
  dispersion::JointSpectralAmplitude pair_;
  std::vector<double> offsets_;
  std::vector<double> amplitude_;
  double norm_ = 0.0;
};

CoincidenceProfile coincidence_profile_no_interferometers(double tau_c);

/// Largest visibility a classical field can show at offset dt:
/// R(dt) / (R(0) + R(dt)).
double classical_visibility_bound(const CoincidenceProfile& profile, double dt);

struct ViolationReport {
  double nu = 0.0;
  double bound = 0.0;
  bool violated = false;  // nu > bound
};
ViolationReport violation_report(double nu_observed, double bound);

struct InequalityReport {
  double delta_t_over_tau = 0.0;
  double bound = 0.0;
  double nu_quantum = 0.0;
  double nu_classical = 0.0;
  bool violated = false;  // nu_quantum > bound
};

/// Bound at dt = setup.delta_T for a pair with correlation time tau_c,
/// against the quantum visibility. nu_classical is carried for display; the
/// Ou-Mandel lasers are monochromatic, so their own no-interferometer
/// profile is flat and their bound is 1/2.
InequalityReport inequality_report(const InterferometerSetup& setup, double nu_quantum, double nu_classical);

}  // namespace etsim::interferometer
