#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "etsim/errors.hpp"
#include "runner.hpp"

namespace {

using etsim::cli::Json;

constexpr const char* kUnits =
    "Units are dimensionless: frequencies in units of a reference bandwidth sigma, times in 1/sigma,\n"
    "lengths in units of the medium length scale. Bandwidths are 1/e spectral amplitude half-widths.\n"
    "Exit codes: 0 success, 2 invalid configuration, 3 numerical guard (aliasing or truncation).";

struct Globals {
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::size_t trials = 0;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  std::string config;
  bool quiet = false;
};

Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw etsim::InvalidArgument("cannot read config file '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw etsim::InvalidArgument("config file '" + path + "': " + e.what());
  }
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (auto& ch : s) {
    if (ch == '_') ch = '-';
  }
  return "--" + s;
}

// Values given on the command line, kept as text until the parameter table types them.
struct ExperimentFlags {
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
};

void add_parameter_options(CLI::App* sub, const std::string& experiment, ExperimentFlags& store) {
  for (const auto& spec : etsim::cli::parameter_specs(experiment)) {
    const std::string help = spec.help + " (default " + spec.default_value.dump() + ")";
    if (spec.kind == etsim::cli::ParamKind::boolean) {
      sub->add_flag(flag_name(spec.name), store.flags[spec.name], help);
    } else {
      sub->add_option(flag_name(spec.name), store.text[spec.name], help);
    }
  }
}

Json parse_value(const std::string& experiment, const etsim::cli::ParamSpec& spec, const std::string& text) {
  try {
    std::size_t used = 0;
    if (spec.kind == etsim::cli::ParamKind::integer) {
      const long long v = std::stoll(text, &used);
      if (used == text.size()) return v;
    } else {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw etsim::InvalidArgument(experiment + ": " + flag_name(spec.name) + " expects a number, got '" + text + "'");
}

etsim::cli::RunConfig build_config(const std::string& experiment, const Globals& g, const CLI::App* sub,
                                   const CLI::App& app, const ExperimentFlags& store) {
  etsim::cli::RunConfig c;
  if (!g.config.empty()) {
    c = etsim::cli::config_from_json(load_json(g.config));
    if (!c.experiment.empty() && c.experiment != experiment) {
      throw etsim::InvalidArgument("config file is for '" + c.experiment + "', not '" + experiment + "'");
    }
  }
  c.experiment = experiment;
  for (const auto& spec : etsim::cli::parameter_specs(experiment)) {
    const std::string flag = flag_name(spec.name);
    if (sub->count(flag) == 0) continue;
    if (spec.kind == etsim::cli::ParamKind::boolean) {
      c.parameters[spec.name] = store.flags.at(spec.name);
    } else {
      c.parameters[spec.name] = parse_value(experiment, spec, store.text.at(spec.name));
    }
  }
  if (app.count("--seed")) c.seed = g.seed;
  if (app.count("--trials")) c.trials = g.trials;
  if (app.count("--format")) c.format = g.format;
  c.threads = g.threads;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"etsim: energy-time entangled photon pairs versus classical light\n\n" + std::string(kUnits)};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "master seed; results depend only on the seed and the configuration");
  app.add_option("--trials", g.trials, "Monte Carlo trials (pulses, records or draws, per experiment)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "worker threads; never changes results")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (stdout when omitted); sidecars are written next to it");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "JSON run config; flags on the command line override it");
  app.add_flag("--quiet", g.quiet, "do not print the summary to stderr");

  std::map<std::string, ExperimentFlags> stores;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> descriptions = {
      {"dispersion", "timing correlation width behind two dispersive media, entangled pair vs classical pulses"},
      {"pulse-train", "classical frequency anti-correlated pulse train through two dispersive media"},
      {"chaotic", "intensity correlation of split chaotic light with identical media in both beams"},
      {"modulation", "sum-frequency variance behind two distant phase modulators"},
      {"interferometer", "two-photon fringes, CHSH and the classical visibility bound"},
  };
  for (const auto& name : etsim::cli::experiments()) {
    subs[name] = app.add_subcommand(name, descriptions.at(name));
    add_parameter_options(subs[name], name, stores[name]);
  }

  std::string config_a, config_b;
  auto* cmp = app.add_subcommand("compare", "merge a quantum and a classical run of the same experiment family");
  cmp->add_option("config_a", config_a, "JSON run config, model defaults to quantum")->required();
  cmp->add_option("config_b", config_b, "JSON run config, model defaults to classical")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every malformed command line is a configuration error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    etsim::cli::RunOutput out;
    if (cmp->parsed()) {
      auto a = etsim::cli::config_from_json(load_json(config_a));
      auto b = etsim::cli::config_from_json(load_json(config_b));
      for (auto* c : {&a, &b}) {
        c->threads = g.threads;
        if (app.count("--seed")) c->seed = g.seed;
        if (app.count("--trials")) c->trials = g.trials;
      }
      out = etsim::cli::compare(a, b, g.format);
    } else {
      for (const auto& [name, sub] : subs) {
        if (sub->parsed()) out = etsim::cli::run(build_config(name, g, sub, app, stores[name]));
      }
    }
    etsim::cli::write_output(out, g.out);
    if (!g.quiet) std::cerr << out.summary;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "etsim: error: " << e.what() << '\n';
    return etsim::cli::exit_code_for(e);
  }
}
