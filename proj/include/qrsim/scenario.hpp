#pragma once

#include <filesystem>
#include <optional>

#include "qrsim/dynamics.hpp"
#include "qrsim/tasks.hpp"
#include "qrsim/validators.hpp"

namespace qrsim {

// An externally supplied matrix to validate (no rule sets behind it).
struct ExternalOperatorSpec {
    std::string role; // "action", "computation" or "step"
    LatticeGeometry geometry;
    BasisPtr basis;
    SparseOperator matrix;
};

// One batch job: a built-in task or inline rule sets, an initial state, output
// times and method settings. External operators are accepted for validation.
struct Scenario {
    int version = 1;
    double coupling = 1.0;
    LatticeGeometry geometry;
    std::optional<TaskSpec> task;
    std::optional<RuleSet> computation;
    std::optional<RuleSet> action;
    std::vector<ExternalOperatorSpec> external_operators;
    std::optional<Configuration> initial_configuration;
    std::vector<std::pair<Configuration, cplx>> initial_amplitudes;
    std::set<int> final_outputs;
    std::vector<double> times{0.0};
    EvolutionMethod method = EvolutionMethod::dense_eigen();
    double tolerance = 1e-10;
    int max_dim = 4096;
    int max_steps = 200;
    std::uint64_t seed = 0;
    bool strict = false;
    bool check_homogeneity_flag = true;
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);

// The compiled model of a scenario that carries rules.
struct CompiledScenario {
    StepOperator op;
    QuantumState initial;
    BasisPtr basis;
    SparseOperator step_matrix;
};

CompiledScenario compile_scenario(const Scenario& s);

// Violations across every applicable check of the scenario's operators.
std::vector<ViolationReport> validate_scenario(const Scenario& s);

struct RunResult {
    EvolutionResult evolution;
    std::filesystem::path amplitudes_csv;
    std::filesystem::path marginals_csv;
};

// Evolves and writes amplitudes.csv (time, configuration, re, im) and
// marginals.csv (time, selector, value, probability), 17 significant digits,
// LF line endings, rows in basis order.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

ClassicalTrace trace_scenario(const Scenario& s);

void write_amplitudes_csv(const EvolutionResult& result, const std::filesystem::path& path);
void write_marginals_csv(const EvolutionResult& result, const std::filesystem::path& path);

} // namespace qrsim
