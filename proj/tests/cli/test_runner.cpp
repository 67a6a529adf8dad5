#include "doctest.h"

#include <cstdlib>
#include <limits>
#include <string>

#include "etsim/errors.hpp"
#include "runner.hpp"

using namespace etsim;
using cli::Json;
using cli::RunConfig;

namespace {

RunConfig config(const std::string& experiment, Json parameters, std::size_t trials) {
  RunConfig c;
  c.experiment = experiment;
  c.parameters = std::move(parameters);
  c.trials = trials;
  return c;
}

}  // namespace

TEST_CASE("format_number round-trips doubles") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0, 0.0}) {
    const std::string s = cli::format_number(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(cli::format_number(2.0) == "2");
}

TEST_CASE("resolve fills defaults and rejects unknown keys and bad types") {
  const auto r = cli::resolve(config("interferometer", Json::object(), 10));
  CHECK(r.parameters.at("delta_t").get<double>() == 5.0);
  CHECK(r.parameters.at("scan_phases").get<long long>() == 32);

  CHECK_THROWS_AS(cli::resolve(config("interferometer", Json{{"delta_T", 5.0}}, 10)), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve(config("interferometer", Json{{"delta_t", "five"}}, 10)), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve(config("interferometer", Json{{"scan_phases", 2.5}}, 10)), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve(config("warp", Json::object(), 10)), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve(config("interferometer", Json::object(), 0)), InvalidArgument);

  auto bad_format = config("interferometer", Json::object(), 10);
  bad_format.format = "xml";
  CHECK_THROWS_AS(cli::resolve(bad_format), InvalidArgument);
}

TEST_CASE("config_from_json reads the run block and rejects stray keys") {
  const auto c = cli::config_from_json(
      Json{{"experiment", "modulation"}, {"seed", 7}, {"trials", 100}, {"parameters", {{"depth1", 2.0}}}});
  CHECK(c.experiment == "modulation");
  CHECK(c.seed == 7);
  CHECK(*c.trials == 100);
  CHECK_THROWS_AS(cli::config_from_json(Json{{"experment", "interferometer"}}), InvalidArgument);
  CHECK_THROWS_AS(cli::config_from_json(Json{{"seed", "x"}}), InvalidArgument);
}

TEST_CASE("output starts with schema and config lines and does not depend on threads") {
  auto c = config("pulse-train", Json{{"sigma_d", 1.0}}, 3000);
  c.seed = 42;
  const auto one = cli::run(c);
  c.threads = 3;
  const auto three = cli::run(c);
  CHECK(one.data == three.data);
  CHECK(one.data.rfind("# schema: etsim.pulse-train/1\n# config: ", 0) == 0);

  c.seed = 43;
  CHECK(cli::run(c).data != one.data);
}

TEST_CASE("interferometer output carries CHSH and inequality sidecars in csv, embedded in json") {
  auto c = config("interferometer", Json::object(), 20000);
  const auto csv = cli::run(c);
  CHECK(csv.sidecars.count(".chsh.json") == 1);
  CHECK(csv.sidecars.count(".inequality.json") == 1);

  c.format = "json";
  const auto doc = Json::parse(cli::run(c).data);
  CHECK(doc.at("schema") == "etsim.interferometer/1");
  CHECK(doc.at("records").size() == 32);
  CHECK(doc.at("inequality").at("violated").get<bool>());
  CHECK(doc.at("chsh").at("quantum").at("S").get<double>() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("compare reports whether classical light reproduces the quantum result") {
  auto q = config("interferometer", Json::object(), 20000);
  q.model = "quantum";
  auto cl = q;
  cl.model = "classical";
  const auto out = cli::compare(q, cl, "json");
  const auto doc = Json::parse(out.data);
  for (const auto& rec : doc.at("records")) CHECK(rec.at("classical_reproduces_quantum") == "no");

  // Identical quantum runs agree with themselves.
  auto self = Json::parse(cli::compare(q, q, "json").data);
  for (const auto& rec : self.at("records")) CHECK(rec.at("classical_reproduces_quantum") == "yes");

  CHECK_THROWS_AS(cli::compare(q, config("dispersion", Json::object(), 10), "csv"), InvalidArgument);
  CHECK_THROWS_AS(cli::compare(config("chaotic", Json::object(), 2), config("chaotic", Json::object(), 2), "csv"),
                  UnsupportedConfigurationError);
}

TEST_CASE("exit codes separate configuration errors from numerical guards") {
  CHECK(cli::exit_code_for(InvalidArgument("x")) == 2);
  CHECK(cli::exit_code_for(UnsupportedConfigurationError("x")) == 2);
  CHECK(cli::exit_code_for(AliasingError("x")) == 3);
  CHECK(cli::exit_code_for(TruncationError("x")) == 3);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == 1);

  auto c = config("chaotic", Json{{"beta", 100.0}}, 2);
  try {
    cli::run(c);
    FAIL("expected an aliasing guard");
  } catch (const std::exception& e) {
    CHECK(cli::exit_code_for(e) == 3);
  }
}
