#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qrsim/scenario.hpp"

using namespace qrsim;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("qrsim_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const char* kRotateScenario = R"({
  "version": 1,
  "K": 1.0,
  "task": {"name": "rotate", "phi": 0.7853981633974483},
  "times": [0.0],
  "method": {"kind": "dense_eigen"},
  "max_dim": 2000
})";

const char* kSearchScenario = R"({
  "version": 1,
  "K": 1.0,
  "task": {"name": "search_zeros", "a": [0.7071067811865476, 0.0],
           "b": [0.7071067811865476, 0.0], "env": "001"},
  "times": [0.0, 0.9, 1.7],
  "method": {"kind": "dense_eigen"},
  "max_dim": 4000
})";

} // namespace

TEST_CASE("a rotate scenario at time zero reproduces its input state") {
    Scenario s = parse_scenario(kRotateScenario);
    auto dir = temp_dir("rotate_t0");
    RunResult result = run_scenario(s, dir);
    REQUIRE(result.evolution.states.size() == 1);
    const QuantumState& out = result.evolution.states[0];
    REQUIRE(out.amplitudes.size() == 1);
    CHECK(out.amplitudes.begin()->first == s.task->initial);
    CHECK(std::abs(out.amplitudes.begin()->second - cplx(1.0)) < 1e-12);
    const std::string csv = slurp(result.amplitudes_csv);
    CHECK(csv.find("time,configuration,re,im\n") == 0);
    CHECK(csv.find(format_configuration(s.task->initial)) != std::string::npos);
    CHECK(csv.find("\r") == std::string::npos); // LF endings only
}

TEST_CASE("scenario marginals CSV matches library-level evolution bit for bit") {
    Scenario s = parse_scenario(kSearchScenario);
    auto dir = temp_dir("search_marginals");
    RunResult result = run_scenario(s, dir);

    // Independent library-level pipeline.
    CompiledScenario model = compile_scenario(s);
    Hamiltonian h = build_hamiltonian(model.step_matrix, s.coupling);
    EvolutionResult evolution = evolve_series(h, model.initial, s.times, s.method, s.tolerance);
    auto check_dir = temp_dir("search_marginals_check");
    write_marginals_csv(evolution, check_dir / "marginals.csv");
    CHECK(slurp(result.marginals_csv) == slurp(check_dir / "marginals.csv"));
}

TEST_CASE("scenario runs are byte-identical across repeats") {
    Scenario s = parse_scenario(kSearchScenario);
    auto first = run_scenario(s, temp_dir("repeat_a"));
    auto second = run_scenario(s, temp_dir("repeat_b"));
    CHECK(slurp(first.amplitudes_csv) == slurp(second.amplitudes_csv));
    CHECK(slurp(first.marginals_csv) == slurp(second.marginals_csv));
}

TEST_CASE("malformed scenarios fail with parse diagnostics") {
    CHECK_THROWS_WITH_AS(parse_scenario("{not json"), doctest::Contains("parse error"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("{\"version\": 2}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("{\"version\": 1}"), std::invalid_argument); // no model
    CHECK_THROWS_AS(parse_scenario(R"({"task": {"name": "no_such_task"}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario(R"({"task": {"name": "rotate", "phi": 0},
                                       "times": [1.0, 0.5]})"),
                    std::invalid_argument);
}

TEST_CASE("validate finds nothing on built-in tasks and empty rule sets") {
    Scenario s = parse_scenario(kRotateScenario);
    CHECK(validate_scenario(s).empty());

    Scenario empty_rules = parse_scenario(R"({
      "version": 1,
      "geometry": {"env_size": 3, "onboard_size": 1, "head_states": 1, "register_dim": 1},
      "rules": {},
      "initial": {"configuration": "p=0 k=0 t=0 l1=0 l2=0 c=0 j=0 s=000"}
    })");
    CHECK(validate_scenario(empty_rules).empty());
}

TEST_CASE("validate reports planted defects in external operators") {
    Scenario s = parse_scenario(R"({
      "version": 1,
      "geometry": {"env_size": 4, "onboard_size": 1, "head_states": 1, "register_dim": 1},
      "operators": [{
        "role": "action",
        "basis": ["p=0 k=0 t=0 l1=0 l2=0 c=1 j=0 s=0000",
                   "p=0 k=0 t=0 l1=0 l2=0 c=1 j=2 s=0000"],
        "entries": [[1, 0, 1.0, 0.0]]
      }]
    })");
    auto reports = validate_scenario(s);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].condition == "env_locality");
    const std::string line = violation_to_json_line(reports[0]);
    CHECK(line.find("\"condition\":\"env_locality\"") != std::string::npos);
    CHECK(line.find("j=2") != std::string::npos);
}

TEST_CASE("trace delegation flags the non-halting search fixture") {
    Scenario halting = parse_scenario(R"({
      "version": 1,
      "task": {"name": "search_zeros", "a": [1.0, 0.0], "b": [0.0, 0.0], "env": "0001"},
      "max_steps": 200
    })");
    ClassicalTrace trace = trace_scenario(halting);
    CHECK(trace.terminated);

    Scenario endless = parse_scenario(R"({
      "version": 1,
      "task": {"name": "search_zeros", "a": [1.0, 0.0], "b": [0.0, 0.0], "env": "000"},
      "max_steps": 120
    })");
    ClassicalTrace forever = trace_scenario(endless);
    CHECK_FALSE(forever.terminated);
    CHECK(forever.step_count == 120);
    const std::string lines = trace_to_json_lines(forever);
    CHECK(lines.find("\"non_halting\":true") != std::string::npos);
}

TEST_CASE("inline rule scenarios drive the walk ring") {
    Scenario s = parse_scenario(R"({
      "version": 1,
      "K": 1.0,
      "geometry": {"env_size": 8, "onboard_size": 1, "head_states": 1, "register_dim": 1},
      "rules": {"action": {"phase": "action", "rules": [
        {"phase": "action", "match": {}, "outcome": {"robot_move": 1}, "amplitude": [1.0, 0.0]}
      ]}},
      "initial": {"configuration": "p=0 k=0 t=0 l1=0 l2=0 c=1 j=0 s=00000000"},
      "times": [0.0, 0.5]
    })");
    auto result = run_scenario(s, temp_dir("walk"));
    REQUIRE(result.evolution.states.size() == 2);
    CHECK(std::abs(norm(result.evolution.states[1]) - 1.0) < 1e-9);
    CHECK(validate_scenario(s).empty());
}

TEST_CASE("scenario amplitude lists build superposed initial states") {
    Scenario s = parse_scenario(R"({
      "version": 1,
      "geometry": {"env_size": 4, "onboard_size": 1, "head_states": 1, "register_dim": 1},
      "rules": {"action": {"phase": "action", "rules": [
        {"phase": "action", "match": {}, "outcome": {"robot_move": 1}, "amplitude": [1.0, 0.0]}
      ]}},
      "initial": {"amplitudes": [
        {"configuration": "p=0 k=0 t=0 l1=0 l2=0 c=1 j=0 s=0000", "amplitude": [1.0, 0.0]},
        {"configuration": "p=0 k=0 t=0 l1=0 l2=0 c=1 j=2 s=0000", "amplitude": [0.0, 1.0]}
      ]},
      "times": [0.0]
    })");
    CompiledScenario model = compile_scenario(s);
    CHECK(model.initial.amplitudes.size() == 2);
    CHECK(std::abs(norm(model.initial) - 1.0) < 1e-12);
    CHECK(model.basis->size() == 4);
}

TEST_CASE("capacity overruns surface as runtime errors naming the cap") {
    Scenario s = parse_scenario(kSearchScenario);
    s.max_dim = 3;
    CHECK_THROWS_WITH_AS(compile_scenario(s), doctest::Contains("max_dim"), std::runtime_error);
}
