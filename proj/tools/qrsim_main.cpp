#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qrsim/scenario.hpp"

namespace {

// Exit codes: 0 ok, 1 usage/parse errors, 2 runtime failures (capacity,
// convergence), 3 validator violations.
constexpr int kExitParse = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitViolations = 3;

struct CommonFlags {
    std::string scenario_path;
    std::string out_dir = "out";
    std::string method;
    double tol = -1.0;
    int max_dim = -1;
    int max_steps = -1;
    bool strict = false;
    bool no_homogeneity = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void register_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--scenario", flags.scenario_path, "scenario file (JSON)")->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--method", flags.method, "dense_eigen | krylov | scaled_taylor");
    cmd->add_option("--tol", flags.tol, "evolution tolerance");
    cmd->add_option("--max-dim", flags.max_dim, "cap on the reachable basis size");
    cmd->add_option("--max-steps", flags.max_steps, "cap on classical trace steps");
    cmd->add_flag("--strict", flags.strict, "validate before running; forbid memory-read actions");
    cmd->add_flag("--no-homogeneity", flags.no_homogeneity,
                  "skip the translation-invariance checks");
    cmd->add_option("--seed", flags.seed, "seed recorded for randomized suites")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
}

qrsim::Scenario load_with_overrides(const CommonFlags& flags) {
    qrsim::Scenario s = qrsim::load_scenario(flags.scenario_path);
    if (!flags.method.empty()) {
        s.method = qrsim::EvolutionMethod::from_string(flags.method);
    }
    if (flags.tol > 0.0) {
        s.tolerance = flags.tol;
    }
    if (flags.max_dim > 0) {
        s.max_dim = flags.max_dim;
    }
    if (flags.max_steps >= 0) {
        s.max_steps = flags.max_steps;
    }
    if (flags.seed_set) {
        s.seed = flags.seed;
    }
    s.strict = s.strict || flags.strict;
    s.check_homogeneity_flag = !flags.no_homogeneity;
    return s;
}

int write_violations(const std::vector<qrsim::ViolationReport>& reports,
                     const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    for (const auto& report : reports) {
        file << qrsim::violation_to_json_line(report) << "\n";
    }
    std::cerr << reports.size() << " violation(s); report written to " << path.string() << "\n";
    return reports.empty() ? 0 : kExitViolations;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch simulator for mobile quantum agents on qubit lattices"};
    app.require_subcommand(1);

    CommonFlags run_flags, validate_flags, trace_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "evolve a scenario and write CSV results");
    register_common(run_cmd, run_flags);
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "scan the scenario's operators for structural violations");
    register_common(validate_cmd, validate_flags);
    CLI::App* trace_cmd = app.add_subcommand("trace", "follow the deterministic rule trace");
    register_common(trace_cmd, trace_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            qrsim::Scenario s = load_with_overrides(run_flags);
            std::filesystem::create_directories(run_flags.out_dir);
            if (s.strict) {
                auto reports = qrsim::validate_scenario(s);
                if (!reports.empty()) {
                    return write_violations(reports,
                                            std::filesystem::path(run_flags.out_dir) /
                                                "violations.jsonl");
                }
            }
            auto result = qrsim::run_scenario(s, run_flags.out_dir);
            std::cout << "wrote " << result.amplitudes_csv.string() << " and "
                      << result.marginals_csv.string() << "\n";
            return 0;
        }
        if (validate_cmd->parsed()) {
            qrsim::Scenario s = load_with_overrides(validate_flags);
            std::filesystem::create_directories(validate_flags.out_dir);
            auto reports = qrsim::validate_scenario(s);
            return write_violations(reports, std::filesystem::path(validate_flags.out_dir) /
                                                 "violations.jsonl");
        }
        qrsim::Scenario s = load_with_overrides(trace_flags);
        std::filesystem::create_directories(trace_flags.out_dir);
        auto trace = qrsim::trace_scenario(s);
        const auto path = std::filesystem::path(trace_flags.out_dir) / "trace.jsonl";
        std::ofstream file(path, std::ios::binary);
        file << qrsim::trace_to_json_lines(trace);
        std::cout << "wrote " << path.string() << (trace.terminated ? " (terminated)" : " (non-halting)")
                  << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
