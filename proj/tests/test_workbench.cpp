#include <doctest.h>

#include "cbundle/workbench.hpp"

using namespace cbundle;

namespace {

std::string ce_config_text() {
  return R"({
    "factor1": {"series": "A", "rank": 1, "omega": [1]},
    "factor2": {"series": "A", "rank": 1, "omega": [1]},
    "lambda": {"semisimple": ["1", "1", "i", "i"], "unipotent": [], "mode": "specific"},
    "experiment": {"seed": 3, "samples": 12, "freeness_pairs": 10},
    "commands": ["check-standard", "check-hyperbolic", "spectrum", "vanishing",
                 "picard", "kahler", "solve-eq9", "trdeg", "simulate-orbits", "hilbert"]
  })";
}

const nlohmann::ordered_json& command_result(const RunResult& r, const std::string& name) {
  for (const auto& entry : r.report.at("commands"))
    if (entry.at("command") == name) return entry.at("result");
  throw std::runtime_error("command " + name + " not in report");
}

}  // namespace

TEST_CASE("config parsing, normalization and round trip") {
  RunConfig cfg = parse_config(ce_config_text());
  CHECK(cfg.factor1.rank == 1);
  CHECK(cfg.semisimple.size() == 4);
  CHECK(cfg.semisimple[2] == GaussianRational::i());
  CHECK(cfg.experiment.seed == 3);
  CHECK(cfg.commands.size() == 10);

  std::string canon = emit_config(cfg);
  RunConfig again = parse_config(canon);
  CHECK(emit_config(again) == canon);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_WITH_AS(parse_config("{"), doctest::Contains("config parse error"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"factor1": {"series": "A", "rank": 1, "omega": [1]},
                       "factor2": {"series": "A", "rank": 1, "omega": [1]},
                       "lambda": {"semisimple": ["1","1","i","i"]},
                       "commands": [], "bogus": 1})"),
      doctest::Contains("unknown key \"bogus\""), std::invalid_argument);
  // floats in gaussian-rational position get the fraction hint
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"factor1": {"series": "A", "rank": 1, "omega": [1]},
                       "factor2": {"series": "A", "rank": 1, "omega": [1]},
                       "lambda": {"semisimple": ["1.5","1","i","i"]},
                       "commands": []})"),
      doctest::Contains("3/2"), std::invalid_argument);
  // wrong lambda length
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"factor1": {"series": "A", "rank": 1, "omega": [1]},
                       "factor2": {"series": "A", "rank": 1, "omega": [1]},
                       "lambda": {"semisimple": ["1","i"]},
                       "commands": []})"),
      doctest::Contains("length 4"), std::invalid_argument);
  // unipotent root must exist in the declared root system
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"factor1": {"series": "A", "rank": 1, "omega": [1]},
                       "factor2": {"series": "A", "rank": 1, "omega": [1]},
                       "lambda": {"semisimple": ["1","1","i","i"],
                                  "unipotent": [{"block": 1, "root": [2], "coeff": "1"}]},
                       "commands": []})"),
      doctest::Contains("not a positive root"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"factor1": {"series": "A", "rank": 1, "omega": [1]},
                       "factor2": {"series": "A", "rank": 1, "omega": [1]},
                       "lambda": {"semisimple": ["1","1","i","i"]},
                       "commands": ["fly-to-the-moon"]})"),
                  std::invalid_argument);
}

TEST_CASE("empty command list gives an empty successful report") {
  RunConfig cfg = parse_config(R"({
    "factor1": {"series": "A", "rank": 1, "omega": [1]},
    "factor2": {"series": "A", "rank": 1, "omega": [1]},
    "lambda": {"semisimple": ["1", "1", "i", "i"]},
    "commands": []
  })");
  RunResult res = run(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.report.at("commands").empty());
}

TEST_CASE("calabi-eckmann run: full report") {
  RunResult res = run(parse_config(ce_config_text()));
  REQUIRE(res.exit_code == 0);

  const auto& std1 = command_result(res, "check-standard").at("factor1");
  CHECK(std1.at("d") == 6);
  CHECK(std1.at("report").at("is_d_standard") == true);

  CHECK(command_result(res, "check-hyperbolic").at("holds") == true);

  const auto& spec = command_result(res, "spectrum");
  CHECK(spec.at("r1") == 2);
  CHECK(spec.at("induced_report").at("holds") == true);

  const auto& van = command_result(res, "vanishing");
  CHECK(van.at("allowed_q_L") == nlohmann::ordered_json::array({0, 1, 2}));

  const auto& pic = command_result(res, "picard");
  CHECK(pic.at("pic0") == "C");
  CHECK(pic.at("pic") == "C");

  CHECK(command_result(res, "kahler").at("obstructed") == true);
  CHECK(command_result(res, "solve-eq9").at("residual_zero") == true);

  const auto& trdeg = command_result(res, "trdeg");
  CHECK(trdeg.at("transcendence_degree") == 2);
  CHECK(trdeg.at("scalar_type_identity") == true);
  CHECK(trdeg.at("purely_transcendental") == true);

  const auto& orbits = command_result(res, "simulate-orbits");
  CHECK(orbits.at("orbit").at("converged") == 12);
  CHECK(orbits.at("orbit").at("unique") == 12);
  CHECK(orbits.at("orbit").at("transversal") == 12);
  CHECK(orbits.at("freeness").at("ok") == true);
  CHECK(orbits.at("divergence").at("all_diverged") == true);
  CHECK_FALSE(res.csv.empty());

  const auto& hil = command_result(res, "hilbert");
  CHECK(hil.at("factors")[0].at("dims") ==
        nlohmann::ordered_json::array({1, 2, 3, 4, 5, 6, 7, 8, 9}));

  // hypothesis hygiene: every command carries its trace
  for (const auto& entry : res.report.at("commands")) {
    REQUIRE(entry.contains("hypotheses"));
    CHECK(entry.at("hypotheses").contains("verified"));
    CHECK(entry.at("hypotheses").at("violated").empty());
  }
}

TEST_CASE("determinism: identical config and seed give identical artifacts") {
  RunConfig cfg = parse_config(ce_config_text());
  RunResult a = run(cfg);
  RunResult b = run(cfg);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(a.csv == b.csv);
  cfg.experiment.seed = 4;
  RunResult c = run(cfg);
  CHECK(a.csv != c.csv);
}

TEST_CASE("non-hyperbolic lambda yields exit code 2 with violations") {
  RunConfig cfg = parse_config(R"({
    "factor1": {"series": "A", "rank": 1, "omega": [1]},
    "factor2": {"series": "A", "rank": 1, "omega": [1]},
    "lambda": {"semisimple": ["1", "1", "1", "1"]},
    "commands": ["check-hyperbolic", "trdeg"]
  })");
  RunResult res = run(cfg);
  CHECK(res.exit_code == 2);
  bool found = false;
  for (const auto& entry : res.report.at("commands"))
    if (!entry.at("hypotheses").at("violated").empty()) found = true;
  CHECK(found);
}

TEST_CASE("matrix factors run the diagonal-type pipeline") {
  RunConfig cfg = parse_config(R"({
    "factor1": {"exponent_matrix": [[1], [1]]},
    "factor2": {"exponent_matrix": [[1], [1]]},
    "lambda": {"semisimple": ["1", "i"]},
    "experiment": {"seed": 1, "samples": 8, "freeness_pairs": 6},
    "commands": ["check-standard", "check-hyperbolic", "vanishing", "simulate-orbits"]
  })");
  RunResult res = run(cfg);
  REQUIRE(res.exit_code == 0);
  CHECK(command_result(res, "check-standard").at("factor1").at("report").at("is_d_standard") ==
        true);
  CHECK(command_result(res, "simulate-orbits").at("orbit").at("converged") == 8);
  CHECK(command_result(res, "vanishing").at("dim_x1") == 1);

  // flag-only commands are an error on matrix factors
  RunConfig bad = cfg;
  bad.commands = {"picard"};
  RunResult err = run(bad);
  CHECK(err.exit_code == 1);
  CHECK(err.report.contains("error"));
}

TEST_CASE("non-standard exponent matrix is flagged as a violation") {
  RunConfig cfg = parse_config(R"({
    "factor1": {"exponent_matrix": [[1, 0], [0, -1]]},
    "factor2": {"exponent_matrix": [[1], [1]]},
    "lambda": {"semisimple": ["1", "1", "i"]},
    "commands": ["check-standard"]
  })");
  RunResult res = run(cfg);
  CHECK(res.exit_code == 2);
}

TEST_CASE("presets build, run and honor seed overrides") {
  for (const std::string& name : preset_names()) {
    RunConfig cfg = preset(name);
    CHECK_FALSE(cfg.commands.empty());
    std::string canon = emit_config(cfg);
    CHECK(emit_config(parse_config(canon)) == canon);
  }
  CHECK_THROWS_AS(preset("hopf"), std::invalid_argument);

  RunConfig flag = preset("flag-a2");
  RunResult res = run(flag);
  CHECK(res.exit_code == 0);
  const auto& trdeg = command_result(res, "trdeg");
  CHECK(trdeg.at("purely_transcendental") == false);  // non-maximal parabolic
  const auto& pic = command_result(res, "picard");
  CHECK(pic.at("pic0") == "C");
  CHECK(pic.at("asserted") == true);
}

TEST_CASE("grassmannian times P1 composition") {
  RunConfig cfg = parse_config(R"({
    "factor1": {"series": "A", "rank": 3, "omega": [0, 1, 0]},
    "factor2": {"series": "A", "rank": 1, "omega": [1]},
    "lambda": {"semisimple": ["1", "1", "1", "1", "i", "i"]},
    "experiment": {"seed": 2, "samples": 10, "freeness_pairs": 8},
    "commands": ["vanishing", "picard", "trdeg", "simulate-orbits"]
  })");
  RunResult res = run(cfg);
  REQUIRE(res.exit_code == 0);
  const auto& van = command_result(res, "vanishing");
  CHECK(van.at("dim_x1") == 4);
  CHECK(van.at("dim_x2") == 1);
  const auto& trdeg = command_result(res, "trdeg");
  CHECK(trdeg.at("lattice_rank") == 7);
  CHECK(trdeg.at("transcendence_degree") == 5);  // scalar type: dim X1 + dim X2
  CHECK(trdeg.at("scalar_type_identity") == true);
  CHECK(command_result(res, "simulate-orbits").at("orbit").at("converged") == 10);
}

TEST_CASE("unipotent epsilon sweep through the workbench") {
  RunConfig cfg = parse_config(R"({
    "factor1": {"series": "A", "rank": 1, "omega": [1]},
    "factor2": {"series": "A", "rank": 1, "omega": [1]},
    "lambda": {"semisimple": ["1", "1", "i", "i"],
               "unipotent": [{"block": 1, "root": [1], "coeff": "1"}]},
    "experiment": {"seed": 5, "samples": 6, "freeness_pairs": 4,
                   "epsilon_policy": "sweep", "epsilon": "1/2"},
    "commands": ["simulate-orbits"]
  })");
  RunResult res = run(cfg);
  REQUIRE(res.exit_code == 0);
  const auto& sweep = command_result(res, "simulate-orbits").at("epsilon_sweep");
  CHECK(sweep.at("threshold").get<double>() > 0.0);
  CHECK(sweep.at("monotone") == true);
}
