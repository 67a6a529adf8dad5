#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "etsim/chaotic.hpp"
#include "etsim/dispersion.hpp"
#include "etsim/errors.hpp"
#include "etsim/interferometer.hpp"
#include "etsim/modulation.hpp"
#include "runner.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

using etsim::DispersiveMedium;
using etsim::MonteCarloOptions;
namespace disp = etsim::dispersion;
namespace mod = etsim::modulation;
namespace ifm = etsim::interferometer;

py::dict stats_dict(const etsim::SummaryStats& s) {
  return py::dict("mean"_a = s.mean, "std"_a = s.std, "n_samples"_a = s.n_samples, "std_error"_a = s.std_error);
}

double quantum_timing_width(double sigma_F, const DispersiveMedium& m1, const DispersiveMedium& m2) {
  const double spread =
      disp::sigma_T_closed_form(sigma_F, m1, m2) + std::abs(m1.alpha * m1.length - m2.alpha * m2.length);
  const auto s = disp::BiphotonState::with_auto_grids(0.0, sigma_F, 0.0, spread);
  return disp::timing_difference_quantum(disp::propagate_biphoton(disp::make_biphoton(s), m1, m2)).std;
}

py::dict pulse_train(double sigma_p, double sigma_D, const DispersiveMedium& m1, const DispersiveMedium& m2,
                     std::size_t n_pulses, std::size_t detections, std::uint64_t seed, int threads) {
  disp::PulseTrainModel model;
  model.sigma_p = sigma_p;
  model.sigma_D = sigma_D;
  model.n_pulses = n_pulses;
  disp::PulseTrainResult r;
  {
    py::gil_scoped_release release;
    r = disp::simulate_pulse_train(model, m1, m2, detections, {seed, threads});
  }
  return py::dict("time_difference"_a = stats_dict(r.time_difference), "std_error_of_std"_a = r.std_error_of_std,
                  "delay_slope"_a = r.delay_vs_jitter.slope, "delay_slope_error"_a = r.delay_vs_jitter.slope_error,
                  "width1"_a = r.width1, "width2"_a = r.width2);
}

py::dict quantum_modulation(double sigma_F, double sigma_pump, const mod::PhaseModulator& m1,
                            const mod::PhaseModulator& m2) {
  const auto state = mod::modulation_state(sigma_F, sigma_pump, m1, m2);
  const auto r = mod::quantum_modulation(state, m1, m2);
  return py::dict("delta2"_a = r.delta2, "baseline"_a = r.baseline);
}

mod::ClassicalAnticorrelatedSource narrow_source(double linewidth) {
  mod::ClassicalAnticorrelatedSource src;
  src.linewidth = linewidth;
  return src;
}

py::dict chsh_dict(const ifm::ChshReport& r) {
  return py::dict("S"_a = r.S, "E_ab"_a = r.e_ab, "E_ab_prime"_a = r.e_ab_prime, "E_a_prime_b"_a = r.e_a_prime_b,
                  "E_a_prime_b_prime"_a = r.e_a_prime_b_prime);
}

py::dict ou_mandel(const ifm::InterferometerSetup& setup, std::size_t trials, std::size_t n_phases, std::uint64_t seed,
                   int threads) {
  ifm::OuMandelResult r;
  std::pair<ifm::ChshReport, double> chsh;
  {
    py::gil_scoped_release release;
    r = ifm::ou_mandel_simulate(setup, trials, n_phases, {seed, threads});
    chsh = ifm::OuMandelModel(setup, trials, {seed, threads}).chsh_with_error();
  }
  std::vector<double> phi, rate, err;
  for (const auto& p : r.fringe) {
    phi.push_back(p.phi_sum);
    rate.push_back(p.rate);
    err.push_back(p.std_error);
  }
  auto c = chsh_dict(chsh.first);
  c["S_error"] = chsh.second;
  return py::dict("phi_sum"_a = phi, "rate"_a = rate, "rate_error"_a = err, "visibility"_a = r.visibility,
                  "visibility_error"_a = r.visibility_error, "chsh"_a = c);
}

py::dict chaotic_experiment(double coherence_rate, double mean_power, double duration, std::size_t n_points,
                            std::size_t n_records, const DispersiveMedium& medium, std::vector<double> taus,
                            std::uint64_t seed, int threads) {
  etsim::chaotic::ChaoticFieldParams p;
  p.coherence_rate = coherence_rate;
  p.mean_power = mean_power;
  p.duration = duration;
  p.n_points = n_points;
  p.n_records = n_records;
  if (taus.empty()) taus = etsim::chaotic::default_taus(p, 4.0 / coherence_rate, 20);
  etsim::chaotic::IdenticalDispersionReport r;
  {
    py::gil_scoped_release release;
    r = etsim::chaotic::identical_dispersion_experiment(p, medium, taus, {seed, threads});
  }
  return py::dict("tau"_a = r.without_medium.tau, "g2_without"_a = r.without_medium.g2,
                  "g2_without_error"_a = r.without_medium.std_error, "g2_with"_a = r.with_medium.g2,
                  "g2_with_error"_a = r.with_medium.std_error, "max_difference_sigma"_a = r.max_difference_sigma,
                  "dissimilarity"_a = r.dissimilarity, "total_samples"_a = r.total_samples);
}

py::tuple run(const std::string& experiment, const std::string& parameters_json, std::uint64_t seed,
              std::optional<std::size_t> trials, int threads, const std::string& format) {
  etsim::cli::RunConfig c;
  c.experiment = experiment;
  c.parameters = etsim::cli::Json::parse(parameters_json);
  c.seed = seed;
  c.trials = trials;
  c.threads = threads;
  c.format = format;
  etsim::cli::RunOutput out;
  {
    py::gil_scoped_release release;
    out = etsim::cli::run(c);
  }
  return py::make_tuple(out.data, out.sidecars, out.summary);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-time entangled pairs versus classical light: compiled core";

  auto base = py::register_exception<etsim::Error>(m, "EtsimError", PyExc_RuntimeError);
  py::register_exception<etsim::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<etsim::NumericalGuardError>(m, "NumericalGuardError", base.ptr());

  py::class_<DispersiveMedium>(m, "DispersiveMedium")
      .def(py::init<double, double, double>(), "alpha"_a = 0.0, "beta"_a = 0.0, "length"_a = 0.0)
      .def_readwrite("alpha", &DispersiveMedium::alpha)
      .def_readwrite("beta", &DispersiveMedium::beta)
      .def_readwrite("length", &DispersiveMedium::length);

  py::class_<mod::PhaseModulator>(m, "PhaseModulator")
      .def(py::init([](double omega_mod, double depth, double phase_offset, int sign) {
             mod::PhaseModulator p{omega_mod, depth, phase_offset, sign};
             p.validate();
             return p;
           }),
           "omega_mod"_a = 1.0, "depth"_a = 0.0, "phase_offset"_a = 0.0, "sign"_a = 1)
      .def_readonly("omega_mod", &mod::PhaseModulator::omega_mod)
      .def_readonly("depth", &mod::PhaseModulator::depth)
      .def_readonly("phase_offset", &mod::PhaseModulator::phase_offset)
      .def_readonly("sign", &mod::PhaseModulator::sign)
      .def("phase", &mod::PhaseModulator::phase, "t"_a);

  py::class_<ifm::InterferometerSetup>(m, "InterferometerSetup")
      .def(py::init([](double delta_T, double phi1, double phi2, double tau_c, double window) {
             ifm::InterferometerSetup s{delta_T, phi1, phi2, tau_c, window};
             s.validate();
             return s;
           }),
           "delta_T"_a = 5.0, "phi1"_a = 0.0, "phi2"_a = 0.0, "tau_c"_a = 1.0, "window"_a = 1.0)
      .def_readonly("delta_T", &ifm::InterferometerSetup::delta_T)
      .def_readonly("phi1", &ifm::InterferometerSetup::phi1)
      .def_readonly("phi2", &ifm::InterferometerSetup::phi2)
      .def_readonly("tau_c", &ifm::InterferometerSetup::tau_c)
      .def_readonly("window", &ifm::InterferometerSetup::window);

  m.def("sigma_T_closed_form", py::overload_cast<double, const DispersiveMedium&, const DispersiveMedium&>(
                                   &disp::sigma_T_closed_form),
        "sigma_F"_a, "m1"_a, "m2"_a);
  m.def("sigma_C_closed_form", &disp::sigma_C_closed_form, "sigma_F"_a, "m1"_a, "m2"_a);
  m.def("sigma_C_gaussian_pulses", &disp::sigma_C_gaussian_pulses, "sigma_p"_a, "m1"_a, "m2"_a);
  m.def("quantum_timing_width", &quantum_timing_width, "sigma_F"_a, "m1"_a, "m2"_a,
        "Std of t1 - t2 for the entangled pair, from the propagated joint amplitude.");
  m.def("simulate_pulse_train", &pulse_train, "sigma_p"_a, "sigma_D"_a, "m1"_a, "m2"_a, "n_pulses"_a = 10000,
        "detections"_a = 1, "seed"_a = 1, "threads"_a = 1);

  m.def(
      "delta_squared_classical",
      [](const mod::PhaseModulator& a, const mod::PhaseModulator& b, double linewidth) {
        return mod::delta_squared_classical(a, b, narrow_source(linewidth));
      },
      "mod1"_a, "mod2"_a, "linewidth"_a = 0.0);
  m.def(
      "delta_squared_monte_carlo",
      [](const mod::PhaseModulator& a, const mod::PhaseModulator& b, double linewidth, std::size_t trials,
         std::uint64_t seed, int threads) {
        return stats_dict(mod::delta_squared_monte_carlo(a, b, narrow_source(linewidth), trials, {seed, threads}));
      },
      "mod1"_a, "mod2"_a, "linewidth"_a = 0.0, "trials"_a = 100000, "seed"_a = 1, "threads"_a = 1);
  m.def("quantum_modulation", &quantum_modulation, "sigma_F"_a, "sigma_pump"_a, "mod1"_a, "mod2"_a);

  m.def(
      "quantum_coincidence_rate",
      [](const ifm::InterferometerSetup& s) {
        const auto r = ifm::quantum_coincidence_rate(s);
        return py::dict("coincident"_a = r.coincident, "ls"_a = r.ls, "sl"_a = r.sl);
      },
      "setup"_a);
  m.def("quantum_visibility", &ifm::quantum_visibility, "setup"_a);
  m.def(
      "quantum_chsh",
      [](const ifm::InterferometerSetup& s) { return chsh_dict(ifm::chsh(ifm::quantum_correlation(s))); },
      "setup"_a);
  m.def(
      "classical_visibility_bound",
      [](double delta_t, double tau_c) {
        return ifm::classical_visibility_bound(ifm::coincidence_profile_no_interferometers(tau_c), delta_t);
      },
      "delta_t"_a, "tau_c"_a = 1.0);
  m.def("ou_mandel_simulate", &ou_mandel, "setup"_a, "trials"_a = 100000, "n_phases"_a = 32, "seed"_a = 1,
        "threads"_a = 1);

  m.def("identical_dispersion_experiment", &chaotic_experiment, "coherence_rate"_a = 1.0, "mean_power"_a = 1.0,
        "duration"_a = 409.6, "n_points"_a = 8192, "n_records"_a = 50, "medium"_a = DispersiveMedium(0.0, 1.0, 1.0),
        "taus"_a = std::vector<double>{}, "seed"_a = 1, "threads"_a = 1);

  m.def("_run", &run, "experiment"_a, "parameters_json"_a, "seed"_a, "trials"_a, "threads"_a, "format"_a);
}
