#include "runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "etsim/chaotic.hpp"
#include "etsim/dispersion.hpp"
#include "etsim/errors.hpp"
#include "etsim/interferometer.hpp"
#include "etsim/modulation.hpp"

namespace etsim::cli {
namespace {

constexpr int kSchemaVersion = 1;

ParamSpec real(std::string name, double def, std::string help) {
  return {std::move(name), ParamKind::real, def, std::move(help)};
}
ParamSpec integer(std::string name, long long def, std::string help) {
  return {std::move(name), ParamKind::integer, def, std::move(help)};
}
ParamSpec boolean(std::string name, bool def, std::string help) {
  return {std::move(name), ParamKind::boolean, def, std::move(help)};
}

const std::map<std::string, std::vector<ParamSpec>>& spec_table() {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"dispersion",
       {real("beta1", 1.0, "dispersion of medium 1"), real("beta2", -1.0, "dispersion of medium 2"),
        real("length", 1.0, "length of both media"), real("alpha1", 0.0, "inverse group velocity, medium 1"),
        real("alpha2", 0.0, "inverse group velocity, medium 2"),
        real("sigma_f", 1.0, "pair bandwidth (1/e amplitude half-width)"),
        real("sigma_p", 0.0, "classical pulse bandwidth; 0 means sigma_f"),
        real("sigma_d", 0.0, "classical frequency jitter std"),
        boolean("sweep", false, "sweep beta1, beta2 over -2..2 and L over 0, 1, 2")}},
      {"pulse-train",
       {real("sigma_p", 1.0, "pulse bandwidth (1/e amplitude half-width)"),
        real("sigma_d", 0.0, "pulse-to-pulse frequency jitter std"), real("beta1", 1.0, "dispersion of medium 1"),
        real("beta2", -1.0, "dispersion of medium 2"), real("length", 1.0, "length of both media"),
        real("alpha1", 0.0, "inverse group velocity, medium 1"),
        real("alpha2", 0.0, "inverse group velocity, medium 2"),
        integer("detections", 1, "detection pairs drawn per pulse")}},
      {"chaotic",
       {real("coherence_rate", 1.0, "Gamma, field correlation decay rate"), real("mean_power", 1.0, "mean intensity"),
        real("duration", 409.6, "record duration"), integer("n_points", 8192, "samples per record"),
        real("beta", 1.0, "dispersion of both media"), real("length", 1.0, "length of both media"),
        real("max_tau", 4.0, "largest delay in the g2 table"), integer("n_tau", 20, "delays on each side of zero")}},
      {"modulation",
       {real("depth1", 1.0, "modulation index of modulator 1"), real("depth2", 1.0, "modulation index of modulator 2"),
        real("omega", 1.0, "modulation frequency"), real("theta1", 0.0, "phase offset of modulator 1"),
        real("theta2", 0.0, "phase offset of modulator 2"), integer("sign1", 1, "sign of modulator 1 (+1 or -1)"),
        integer("sign2", -1, "sign of modulator 2 (+1 or -1), used by compare"),
        real("linewidth", 0.0, "classical line width"), real("sigma_f", 200.0, "pair bandwidth"),
        real("sigma_pump", 0.1, "pump bandwidth")}},
      {"interferometer",
       {real("delta_t", 5.0, "long minus short path delay"), real("tau_c", 1.0, "two-photon correlation time"),
        real("window", 1.0, "coincidence window"), real("phi2", 0.0, "phase setting of interferometer 2"),
        integer("scan_phases", 32, "phase settings in the fringe scan")}},
  };
  return table;
}

std::string param_error(const std::string& experiment, const std::string& key, const std::string& what) {
  return experiment + ": parameter '" + key + "' " + what;
}

Json coerce(const std::string& experiment, const ParamSpec& spec, const Json& v) {
  switch (spec.kind) {
    case ParamKind::real:
      if (!v.is_number()) throw InvalidArgument(param_error(experiment, spec.name, "must be a number"));
      if (!std::isfinite(v.get<double>())) throw InvalidArgument(param_error(experiment, spec.name, "must be finite"));
      return v.get<double>();
    case ParamKind::integer:
      if (v.is_number_integer()) return v.get<long long>();
      if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
        return static_cast<long long>(v.get<double>());
      }
      throw InvalidArgument(param_error(experiment, spec.name, "must be an integer"));
    case ParamKind::boolean:
      if (!v.is_boolean()) throw InvalidArgument(param_error(experiment, spec.name, "must be true or false"));
      return v.get<bool>();
  }
  return v;
}

// ---- output assembly ------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

std::string cell(const Json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string to_csv(const Table& t, const std::vector<std::pair<std::string, std::string>>& comments) {
  std::ostringstream out;
  for (const auto& [k, v] : comments) out << "# " << k << ": " << v << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell(row[c]);
    out << '\n';
  }
  return out.str();
}

Json records(const Table& t) {
  Json arr = Json::array();
  for (const auto& row : t.rows) {
    Json rec = Json::object();
    for (std::size_t c = 0; c < row.size(); ++c) rec[t.columns[c]] = row[c];
    arr.push_back(std::move(rec));
  }
  return arr;
}

std::string schema_name(const std::string& experiment) {
  return "etsim." + experiment + "/" + std::to_string(kSchemaVersion);
}

/// Main table plus named extras. CSV puts extras in sidecar files, JSON
/// embeds them in the document.
RunOutput assemble(const RunConfig& cfg, const Table& table, const std::map<std::string, Json>& extras,
                   const std::map<std::string, Table>& extra_tables, std::string summary) {
  RunOutput out;
  out.summary = std::move(summary);
  const Json config = to_json(cfg);
  if (cfg.format == "json") {
    Json doc = Json::object();
    doc["schema"] = schema_name(cfg.experiment);
    doc["config"] = config;
    doc["records"] = records(table);
    for (const auto& [k, v] : extras) doc[k] = v;
    for (const auto& [k, t] : extra_tables) doc[k] = records(t);
    out.data = doc.dump(2) + "\n";
    return out;
  }
  out.data = to_csv(table, {{"schema", schema_name(cfg.experiment)}, {"config", config.dump()}});
  for (const auto& [k, v] : extras) {
    Json doc = Json::object();
    doc["schema"] = schema_name(cfg.experiment) + "/" + k;
    doc["config"] = config;
    doc[k] = v;
    out.sidecars["." + k + ".json"] = doc.dump(2) + "\n";
  }
  for (const auto& [k, t] : extra_tables) {
    out.sidecars["." + k + ".csv"] =
        to_csv(t, {{"schema", schema_name(cfg.experiment) + "/" + k}, {"config", config.dump()}});
  }
  return out;
}

std::string line(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return std::string(buf) + "\n";
}

double P(const RunConfig& c, const char* key) { return c.parameters.at(key).get<double>(); }
long long I(const RunConfig& c, const char* key) { return c.parameters.at(key).get<long long>(); }
bool B(const RunConfig& c, const char* key) { return c.parameters.at(key).get<bool>(); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

MonteCarloOptions mc(const RunConfig& c, std::uint64_t index = 0) {
  return {index == 0 ? c.seed : derive_seed(c.seed, index), c.threads};
}

int sign_param(const RunConfig& c, const char* key) {
  const long long s = I(c, key);
  if (s != 1 && s != -1) throw InvalidArgument(c.experiment + ": parameter '" + key + "' must be +1 or -1");
  return static_cast<int>(s);
}

// ---- dispersion -----------------------------------------------------------

struct DispersionRow {
  double beta1, beta2, L, sigma_T_theory, sigma_T_numeric, sigma_C_theory, sigma_C_gaussian, sigma_C_mc, mc_error;
};

double quantum_timing_width(double sigma_F, const DispersiveMedium& m1, const DispersiveMedium& m2) {
  const double spread = dispersion::sigma_T_closed_form(sigma_F, m1, m2) +
                        std::abs(m1.alpha * m1.length - m2.alpha * m2.length);
  const auto s = dispersion::BiphotonState::with_auto_grids(0.0, sigma_F, 0.0, spread);
  return dispersion::timing_difference_quantum(dispersion::propagate_biphoton(dispersion::make_biphoton(s), m1, m2))
      .std;
}

DispersionRow dispersion_row(const RunConfig& c, double b1, double b2, double L, std::uint64_t index) {
  const double sF = P(c, "sigma_f");
  if (!(sF > 0.0)) throw InvalidArgument("dispersion: parameter 'sigma_f' must be positive");
  if (P(c, "sigma_p") < 0.0) throw InvalidArgument("dispersion: parameter 'sigma_p' must be >= 0");
  const double sp = P(c, "sigma_p") > 0.0 ? P(c, "sigma_p") : sF;
  const DispersiveMedium m1(P(c, "alpha1"), b1, L), m2(P(c, "alpha2"), b2, L);
  dispersion::PulseTrainModel model;
  model.sigma_p = sp;
  model.sigma_D = P(c, "sigma_d");
  model.n_pulses = *c.trials;
  const auto mcr = dispersion::simulate_pulse_train(model, m1, m2, 1, mc(c, index));
  return {b1,
          b2,
          L,
          dispersion::sigma_T_closed_form(sF, m1, m2),
          quantum_timing_width(sF, m1, m2),
          dispersion::sigma_C_closed_form(sF, m1, m2),
          dispersion::sigma_C_gaussian_pulses(sp, m1, m2),
          mcr.time_difference.std,
          mcr.std_error_of_std};
}

RunOutput run_dispersion(const RunConfig& c) {
  std::vector<DispersionRow> rows;
  if (B(c, "sweep")) {
    std::uint64_t index = 0;
    for (double L : {0.0, 1.0, 2.0}) {
      for (double b1 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double b2 : {-2.0, -1.0, 0.0, 1.0, 2.0}) rows.push_back(dispersion_row(c, b1, b2, L, index++));
      }
    }
  } else {
    rows.push_back(dispersion_row(c, P(c, "beta1"), P(c, "beta2"), P(c, "length"), 0));
  }
  Table t{{"beta1", "beta2", "L", "sigma_F", "sigma_T_theory", "sigma_T_numeric", "sigma_C_theory",
           "sigma_C_gaussian", "sigma_C_mc", "mc_error"},
          {}};
  double worst = 0.0;
  for (const auto& r : rows) {
    t.rows.push_back({r.beta1, r.beta2, r.L, P(c, "sigma_f"), r.sigma_T_theory, r.sigma_T_numeric, r.sigma_C_theory,
                      r.sigma_C_gaussian, r.sigma_C_mc, r.mc_error});
    worst = std::max(worst, std::abs(r.sigma_T_numeric / r.sigma_T_theory - 1.0));
  }
  std::string s = "dispersion: timing correlation width of t1 - t2 (units 1/sigma)\n";
  if (rows.size() == 1) {
    const auto& r = rows[0];
    s += line("  entangled pair : sigma_T numeric %.6f   closed form sqrt(1/sF^2 + (b1+b2)^2 L^2 sF^2) = %.6f",
              r.sigma_T_numeric, r.sigma_T_theory);
    s += line("  classical pulses: sigma_C Monte Carlo %.6f +- %.6f   exact Gaussian pulses %.6f", r.sigma_C_mc,
              r.mc_error, r.sigma_C_gaussian);
    s += line("                    textbook sqrt(1/(2 sF^2) + (b1^2+b2^2) L^2 sF^2) = %.6f", r.sigma_C_theory);
  } else {
    s += line("  %zu configurations; max relative deviation of sigma_T numeric from closed form %.2e", rows.size(),
              worst);
  }
  return assemble(c, t, {}, {}, s);
}

// ---- pulse train ----------------------------------------------------------

RunOutput run_pulse_train(const RunConfig& c) {
  dispersion::PulseTrainModel model;
  model.sigma_p = P(c, "sigma_p");
  model.sigma_D = P(c, "sigma_d");
  model.n_pulses = *c.trials;
  const DispersiveMedium m1(P(c, "alpha1"), P(c, "beta1"), P(c, "length"));
  const DispersiveMedium m2(P(c, "alpha2"), P(c, "beta2"), P(c, "length"));
  if (I(c, "detections") < 1) throw InvalidArgument("pulse-train: parameter 'detections' must be >= 1");
  const auto r = dispersion::simulate_pulse_train(model, m1, m2, static_cast<std::size_t>(I(c, "detections")), mc(c));
  const double total = std::hypot(model.sigma_D, model.sigma_p);
  const double quantum = quantum_timing_width(total, m1, m2);
  Table t{{"sigma_p", "sigma_D", "beta1", "beta2", "L", "pulses", "std_t", "std_t_err", "mean_t", "delay_slope",
           "delay_slope_err", "width1", "width2", "sigma_C_gaussian", "quantum_width_equal_bandwidth", "width_ratio"},
          {}};
  t.rows.push_back({model.sigma_p, model.sigma_D, m1.beta, m2.beta, m1.length, static_cast<long long>(model.n_pulses),
                    r.time_difference.std, r.std_error_of_std, r.time_difference.mean, r.delay_vs_jitter.slope,
                    r.delay_vs_jitter.slope_error, r.width1, r.width2,
                    dispersion::sigma_C_gaussian_pulses(model.sigma_p, m1, m2), quantum,
                    r.time_difference.std / quantum});
  std::string s = "pulse-train: classical anti-correlated pulses through dispersive media\n";
  s += line("  std(t1 - t2) = %.6f +- %.6f over %zu pulses (exact for independent Gaussian pulses: %.6f)",
            r.time_difference.std, r.std_error_of_std, model.n_pulses,
            dispersion::sigma_C_gaussian_pulses(model.sigma_p, m1, m2));
  s += line("  delay vs jitter slope %.4f +- %.4f (2 L (beta1 + beta2) = %.4f)", r.delay_vs_jitter.slope,
            r.delay_vs_jitter.slope_error, 2.0 * m1.length * (m1.beta + m2.beta));
  s += line("  entangled pair with the same total bandwidth %.4f: width %.6f, ratio classical/quantum %.2f", total,
            quantum, r.time_difference.std / quantum);
  return assemble(c, t, {}, {}, s);
}

// ---- chaotic --------------------------------------------------------------

RunOutput run_chaotic(const RunConfig& c) {
  chaotic::ChaoticFieldParams p;
  p.coherence_rate = P(c, "coherence_rate");
  p.mean_power = P(c, "mean_power");
  p.duration = P(c, "duration");
  if (I(c, "n_points") < 1 || I(c, "n_tau") < 1) throw InvalidArgument("chaotic: n_points and n_tau must be positive");
  p.n_points = static_cast<std::size_t>(I(c, "n_points"));
  p.n_records = *c.trials;
  p.validate();
  const DispersiveMedium m(0.0, P(c, "beta"), P(c, "length"));
  const auto taus = chaotic::default_taus(p, P(c, "max_tau"), static_cast<std::size_t>(I(c, "n_tau")));
  const auto r = chaotic::identical_dispersion_experiment(p, m, taus, mc(c));

  Table t{{"tau", "g2_no_medium", "g2_with_medium", "err"}, {}};
  for (std::size_t k = 0; k < taus.size(); ++k) {
    t.rows.push_back({r.without_medium.tau[k], r.without_medium.g2[k], r.with_medium.g2[k],
                      std::hypot(r.without_medium.std_error[k], r.with_medium.std_error[k])});
  }
  Table trace{{"t", "I_a", "I_b", "I_a_dispersed", "I_b_dispersed"}, {}};
  for (std::size_t j = 0; j < r.trace_time.size(); ++j) {
    trace.rows.push_back({r.trace_time[j], r.trace_a[j], r.trace_b[j], r.trace_a_dispersed[j], r.trace_b_dispersed[j]});
  }
  const auto zero = static_cast<std::size_t>(std::find(taus.begin(), taus.end(), 0.0) - taus.begin());
  std::string s = "chaotic: split thermal light, identical media in both beams\n";
  s += line("  %zu records, %zu samples; beta L Gamma^2 = %.3f", p.n_records, r.total_samples, r.beta_L_gamma2);
  if (zero < taus.size()) {
    s += line("  g2(0) without media %.4f, with media %.4f (thermal light: 2)", r.without_medium.g2[zero],
              r.with_medium.g2[zero]);
  }
  s += line("  max |g2 with - g2 without| = %.2f combined standard errors", r.max_difference_sigma);
  s += line("  record 0: dispersed intensity differs from undispersed by %.3f (normalized L2)", r.dissimilarity);
  return assemble(c, t, {}, {{"trace", trace}}, s);
}

// ---- modulation -----------------------------------------------------------

modulation::PhaseModulator modulator(double depth, double omega, double theta, int sign) {
  modulation::PhaseModulator m;
  m.depth = depth;
  m.omega_mod = omega;
  m.phase_offset = theta;
  m.sign = sign;
  m.validate();
  return m;
}

struct ModulationNumbers {
  double classical, mc, mc_err;
  double q_opposite, q_same, baseline;
  double comp_on, comp_on_err, comp_off, comp_off_err;
};

ModulationNumbers modulation_numbers(const RunConfig& c) {
  const double omega = P(c, "omega");
  const int s1 = sign_param(c, "sign1");
  const int s2 = sign_param(c, "sign2");
  const auto m1 = modulator(P(c, "depth1"), omega, P(c, "theta1"), s1);
  const auto m2_opp = modulator(P(c, "depth2"), omega, P(c, "theta2"), -s1);
  const auto m2_same = modulator(P(c, "depth2"), omega, P(c, "theta2"), s1);
  const auto m2_cfg = modulator(P(c, "depth2"), omega, P(c, "theta2"), s2);

  modulation::ClassicalAnticorrelatedSource src;
  src.linewidth = P(c, "linewidth");
  ModulationNumbers n{};
  n.classical = modulation::delta_squared_classical(m1, m2_cfg, src);
  const auto est = modulation::delta_squared_monte_carlo(m1, m2_cfg, src, *c.trials, mc(c));
  n.mc = est.mean;
  n.mc_err = est.std_error;

  const auto state = modulation::modulation_state(P(c, "sigma_f"), P(c, "sigma_pump"), m1, m2_same);
  const auto opp = modulation::quantum_modulation(state, m1, m2_opp);
  n.q_opposite = opp.delta2;
  n.baseline = opp.baseline;
  n.q_same = modulation::quantum_modulation(state, m1, m2_same).delta2;

  auto comp_src = src;
  comp_src.internal_precompensation = std::pair{modulation::inverse(m1), modulation::inverse(m2_cfg)};
  const auto comp = modulation::compensated_source_demo(m1, m2_cfg, comp_src, *c.trials, mc(c, 1));
  n.comp_on = comp.on.mean;
  n.comp_on_err = comp.on.std_error;
  n.comp_off = comp.off.mean;
  n.comp_off_err = comp.off.std_error;
  return n;
}

RunOutput run_modulation(const RunConfig& c) {
  const auto n = modulation_numbers(c);
  Table t{{"depth1", "depth2", "omega_mod", "delta2_classical", "delta2_mc", "mc_err", "delta2_quantum_opposite",
           "delta2_quantum_same", "delta2_baseline", "delta2_compensated_on", "delta2_compensated_on_err",
           "delta2_compensated_off", "delta2_compensated_off_err"},
          {}};
  t.rows.push_back({P(c, "depth1"), P(c, "depth2"), P(c, "omega"), n.classical, n.mc, n.mc_err, n.q_opposite, n.q_same,
                    n.baseline, n.comp_on, n.comp_on_err, n.comp_off, n.comp_off_err});
  std::string s = "modulation: variance of w1 + w2 behind two distant phase modulators\n";
  s += line("  classical narrow lines: closed form %.6f (Omega^2 (m1^2 + m2^2)/2 + 2 dw^2 = %.6f),"
            " Monte Carlo %.6f +- %.6f",
            n.classical,
            P(c, "omega") * P(c, "omega") * (P(c, "depth1") * P(c, "depth1") + P(c, "depth2") * P(c, "depth2")) / 2.0 +
                2.0 * P(c, "linewidth") * P(c, "linewidth"),
            n.mc, n.mc_err);
  s += line("  entangled pair: baseline %.6g, opposite modulators %.6g, same-sign modulators %.6g", n.baseline,
            n.q_opposite, n.q_same);
  s += line("  pre-compensated classical source: modulators on %.6g +- %.2g, off %.6f +- %.6f", n.comp_on,
            n.comp_on_err, n.comp_off, n.comp_off_err);
  return assemble(c, t, {}, {}, s);
}

// ---- interferometer ------------------------------------------------------

interferometer::InterferometerSetup interferometer_setup(const RunConfig& c) {
  interferometer::InterferometerSetup s;
  s.delta_T = P(c, "delta_t");
  s.tau_c = P(c, "tau_c");
  s.window = P(c, "window");
  s.phi2 = P(c, "phi2");
  s.validate();
  return s;
}

Json chsh_json(const interferometer::ChshReport& r, double err) {
  return Json{{"settings", {{"a", r.settings.a}, {"a_prime", r.settings.a_prime}, {"b", r.settings.b},
                            {"b_prime", r.settings.b_prime}}},
              {"E", {{"a_b", r.e_ab}, {"a_bprime", r.e_ab_prime}, {"aprime_b", r.e_a_prime_b},
                     {"aprime_bprime", r.e_a_prime_b_prime}}},
              {"S", r.S},
              {"S_err", err}};
}

struct InterferometerNumbers {
  interferometer::OuMandelResult om;
  std::vector<double> quantum_rates;
  double nu_quantum = 0.0;
  interferometer::ChshReport chsh_quantum, chsh_classical;
  double chsh_classical_err = 0.0;
  interferometer::InequalityReport inequality;
};

InterferometerNumbers interferometer_numbers(const RunConfig& c) {
  const auto setup = interferometer_setup(c);
  if (I(c, "scan_phases") < 3) throw InvalidArgument("interferometer: parameter 'scan_phases' must be >= 3");
  const auto n_phases = static_cast<std::size_t>(I(c, "scan_phases"));
  InterferometerNumbers n;
  n.om = interferometer::ou_mandel_simulate(setup, *c.trials, n_phases, mc(c));
  for (const auto& pt : n.om.fringe) {
    auto s = setup;
    s.phi1 = pt.phi_sum - setup.phi2;
    n.quantum_rates.push_back(interferometer::quantum_coincidence_rate(s).coincident);
  }
  n.nu_quantum = interferometer::fringe_visibility(n.quantum_rates);
  n.chsh_quantum = interferometer::chsh(interferometer::quantum_correlation(setup));
  const interferometer::OuMandelModel model(setup, *c.trials, mc(c));
  std::tie(n.chsh_classical, n.chsh_classical_err) = model.chsh_with_error();
  n.inequality = interferometer::inequality_report(setup, n.nu_quantum, n.om.visibility);
  return n;
}

RunOutput run_interferometer(const RunConfig& c) {
  const auto n = interferometer_numbers(c);
  Table t{{"phi_sum", "rate_quantum", "rate_ou_mandel", "err"}, {}};
  for (std::size_t k = 0; k < n.om.fringe.size(); ++k) {
    t.rows.push_back({n.om.fringe[k].phi_sum, n.quantum_rates[k], n.om.fringe[k].rate, n.om.fringe[k].std_error});
  }
  const Json chsh{{"quantum", chsh_json(n.chsh_quantum, 0.0)},
                  {"ou_mandel", chsh_json(n.chsh_classical, n.chsh_classical_err)}};
  const Json inequality{{"delta_t_over_tau", n.inequality.delta_t_over_tau},
                        {"bound", n.inequality.bound},
                        {"nu_quantum", n.inequality.nu_quantum},
                        {"nu_classical", n.inequality.nu_classical},
                        {"nu_classical_err", n.om.visibility_error},
                        {"violated", n.inequality.violated}};
  std::string s = "interferometer: two-photon interferometry, entangled pair vs Ou-Mandel classical lasers\n";
  s += line("  visibility: quantum %.6f, Ou-Mandel %.4f +- %.4f (classical maximum 0.5)", n.nu_quantum, n.om.visibility,
            n.om.visibility_error);
  s += line("  CHSH S: quantum %.6f (2 sqrt 2 = %.6f), Ou-Mandel %.4f +- %.4f (local bound 2)", n.chsh_quantum.S,
            2.0 * std::numbers::sqrt2, n.chsh_classical.S, n.chsh_classical_err);
  s += line("  classical-field bound R(dt)/(R(0)+R(dt)) at dt = %.2f tau_c: %.4g; quantum visibility %s it",
            n.inequality.delta_t_over_tau, n.inequality.bound, n.inequality.violated ? "violates" : "does not violate");
  return assemble(c, t, {{"chsh", chsh}, {"inequality", inequality}}, {}, s);
}

// ---- compare --------------------------------------------------------------

struct Metric {
  double value = 0.0;
  double error = 0.0;
};
using Metrics = std::vector<std::pair<std::string, Metric>>;

Metrics family_metrics(const RunConfig& c) {
  const bool quantum = c.model == "quantum";
  if (c.experiment == "dispersion") {
    const double sF = P(c, "sigma_f");
    const DispersiveMedium m1(P(c, "alpha1"), P(c, "beta1"), P(c, "length"));
    const DispersiveMedium m2(P(c, "alpha2"), P(c, "beta2"), P(c, "length"));
    if (quantum) {
      return {{"correlation_width", {quantum_timing_width(sF, m1, m2), 0.0}},
              {"single_photon_bandwidth", {sF / 2.0, 0.0}}};
    }
    dispersion::PulseTrainModel model;
    model.sigma_p = P(c, "sigma_p") > 0.0 ? P(c, "sigma_p") : sF;
    model.sigma_D = P(c, "sigma_d");
    model.n_pulses = *c.trials;
    const auto r = dispersion::simulate_pulse_train(model, m1, m2, 1, mc(c));
    return {{"correlation_width", {r.time_difference.std, r.std_error_of_std}},
            {"single_photon_bandwidth",
             {std::sqrt(model.sigma_p * model.sigma_p / 4.0 + model.sigma_D * model.sigma_D), 0.0}}};
  }
  if (c.experiment == "modulation") {
    const double omega = P(c, "omega");
    const auto m1 = modulator(P(c, "depth1"), omega, P(c, "theta1"), sign_param(c, "sign1"));
    const auto m2 = modulator(P(c, "depth2"), omega, P(c, "theta2"), sign_param(c, "sign2"));
    if (quantum) {
      const auto state = modulation::modulation_state(P(c, "sigma_f"), P(c, "sigma_pump"), m1, m2);
      const auto r = modulation::quantum_modulation(state, m1, m2);
      return {{"delta2", {r.delta2, 0.0}}, {"delta2_above_unmodulated", {r.delta2 - r.baseline, 0.0}}};
    }
    modulation::ClassicalAnticorrelatedSource src;
    src.linewidth = P(c, "linewidth");
    const auto est = modulation::delta_squared_monte_carlo(m1, m2, src, *c.trials, mc(c));
    const double unmodulated = 2.0 * src.linewidth * src.linewidth;
    return {{"delta2", {est.mean, est.std_error}},
            {"delta2_above_unmodulated", {est.mean - unmodulated, est.std_error}}};
  }
  if (c.experiment == "interferometer") {
    const auto setup = interferometer_setup(c);
    if (quantum) {
      return {{"visibility", {interferometer::quantum_visibility(setup), 0.0}},
              {"chsh_S", {interferometer::chsh(interferometer::quantum_correlation(setup)).S, 0.0}}};
    }
    const auto om = interferometer::ou_mandel_simulate(setup, *c.trials, static_cast<std::size_t>(I(c, "scan_phases")),
                                                       mc(c));
    const interferometer::OuMandelModel model(setup, *c.trials, mc(c));
    const auto [chsh, err] = model.chsh_with_error();
    return {{"visibility", {om.visibility, om.visibility_error}}, {"chsh_S", {chsh.S, err}}};
  }
  throw UnsupportedConfigurationError("compare: experiment '" + c.experiment +
                                      "' has no quantum/classical pair; use dispersion, modulation or interferometer");
}

}  // namespace

// ---- public ---------------------------------------------------------------

const std::vector<std::string>& experiments() {
  static const std::vector<std::string> names = {"dispersion", "pulse-train", "chaotic", "modulation",
                                                 "interferometer"};
  return names;
}

const std::vector<ParamSpec>& parameter_specs(const std::string& experiment) {
  const auto& table = spec_table();
  const auto it = table.find(experiment);
  if (it == table.end()) throw InvalidArgument("unknown experiment '" + experiment + "'");
  return it->second;
}

std::size_t default_trials(const std::string& experiment) {
  if (experiment == "chaotic") return 200;
  if (experiment == "dispersion" || experiment == "pulse-train") return 10000;
  return 100000;
}

RunConfig resolve(const RunConfig& config) {
  const auto& specs = parameter_specs(config.experiment);
  if (!config.parameters.is_object()) throw InvalidArgument(config.experiment + ": parameters must be an object");
  for (const auto& [key, value] : config.parameters.items()) {
    const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == key; });
    if (!known) throw InvalidArgument(param_error(config.experiment, key, "is not recognised"));
  }
  RunConfig out = config;
  out.parameters = Json::object();
  for (const auto& spec : specs) {
    const auto it = config.parameters.find(spec.name);
    const Json& given = it == config.parameters.end() ? spec.default_value : *it;
    out.parameters[spec.name] = coerce(config.experiment, spec, given);
  }
  if (!out.trials) out.trials = default_trials(config.experiment);
  if (*out.trials == 0) throw InvalidArgument(config.experiment + ": trials must be positive");
  if (out.threads < 1) throw InvalidArgument("threads must be >= 1");
  if (out.format != "csv" && out.format != "json") throw InvalidArgument("format must be csv or json");
  if (!out.model.empty() && out.model != "quantum" && out.model != "classical") {
    throw InvalidArgument("model must be quantum or classical");
  }
  return out;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config: top level must be an object");
  static const std::vector<std::string> allowed = {"experiment", "seed", "trials", "parameters", "model", "format",
                                                   "schema"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("config: key '" + key + "' is not recognised");
    }
  }
  RunConfig c;
  try {
    if (j.contains("experiment")) c.experiment = j.at("experiment").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("parameters")) c.parameters = j.at("parameters");
    if (j.contains("model")) c.model = j.at("model").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

Json to_json(const RunConfig& c) {
  Json j = Json::object();
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["trials"] = c.trials ? Json(*c.trials) : Json(nullptr);
  j["parameters"] = c.parameters;
  if (!c.model.empty()) j["model"] = c.model;
  return j;
}

RunOutput run(const RunConfig& config) {
  const RunConfig c = resolve(config);
  if (c.experiment == "dispersion") return run_dispersion(c);
  if (c.experiment == "pulse-train") return run_pulse_train(c);
  if (c.experiment == "chaotic") return run_chaotic(c);
  if (c.experiment == "modulation") return run_modulation(c);
  return run_interferometer(c);
}

RunOutput compare(const RunConfig& a_in, const RunConfig& b_in, const std::string& format) {
  RunConfig a = resolve(a_in), b = resolve(b_in);
  if (a.experiment != b.experiment) {
    throw InvalidArgument("compare: configs name different experiments ('" + a.experiment + "' vs '" + b.experiment +
                          "')");
  }
  if (a.model.empty()) a.model = "quantum";
  if (b.model.empty()) b.model = "classical";
  const Metrics ma = family_metrics(a);
  const Metrics mb = family_metrics(b);

  Table t{{"metric", "model_a", "value_a", "error_a", "model_b", "value_b", "error_b", "classical_reproduces_quantum"},
          {}};
  std::string s = "compare (" + a.experiment + "): " + a.model + " vs " + b.model + "\n";
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const auto& [name, x] = ma[i];
    const auto& y = mb[i].second;
    const double scale = std::max({std::abs(x.value), std::abs(y.value), 1.0});
    const double tol = std::max(3.0 * std::hypot(x.error, y.error), 1e-9 * scale);
    const bool agree = std::abs(x.value - y.value) <= tol;
    t.rows.push_back({name, a.model, x.value, x.error, b.model, y.value, y.error, agree ? "yes" : "no"});
    s += line("  %-26s %s %.6g +- %.2g | %s %.6g +- %.2g | reproduces: %s", name.c_str(), a.model.c_str(), x.value,
              x.error, b.model.c_str(), y.value, y.error, agree ? "yes" : "no");
  }

  RunOutput out;
  out.summary = s;
  const std::string schema = "etsim.compare/" + std::to_string(kSchemaVersion);
  if (format == "json") {
    Json doc{{"schema", schema}, {"config_a", to_json(a)}, {"config_b", to_json(b)}, {"records", records(t)}};
    out.data = doc.dump(2) + "\n";
  } else if (format == "csv") {
    out.data = to_csv(t, {{"schema", schema}, {"config_a", to_json(a).dump()}, {"config_b", to_json(b).dump()}});
  } else {
    throw InvalidArgument("format must be csv or json");
  }
  return out;
}

void write_output(const RunOutput& out, const std::string& path) {
  if (path.empty()) {
    std::cout << out.data;
    return;
  }
  auto write = [](const std::string& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open output file '" + p + "'");
    f << content;
  };
  write(path, out.data);
  // Sidecars replace the data file's extension: run.csv -> run.chsh.json.
  std::string stem = path;
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos && stem.find('/', dot) == std::string::npos) {
    stem.erase(dot);
  }
  for (const auto& [suffix, content] : out.sidecars) write(stem + suffix, content);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalGuardError*>(&e)) return 3;
  if (dynamic_cast<const InvalidArgument*>(&e)) return 2;
  return 1;
}

std::string format_number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace etsim::cli
