#include "qrsim/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qrsim/serialization.hpp"

namespace qrsim {

namespace {

using nlohmann::json;

TaskSpec task_from_json(const json& j) {
    const std::string name = j.at("name").get<std::string>();
    if (name == "rotate") {
        TaskSpec task = make_rotate_task(j.at("phi").get<double>(), j.value("env_size", 4));
        if (j.contains("env")) {
            task.initial = task_initial_with_env(task, bits_from_string(j.at("env")));
        }
        return task;
    }
    if (name == "search_zeros") {
        auto amp = [&](const char* key) {
            const auto& arr = j.at(key);
            return cplx(arr.at(0).get<double>(), arr.at(1).get<double>());
        };
        return make_search_zeros_task(amp("a"), amp("b"),
                                      bits_from_string(j.at("env").get<std::string>()));
    }
    auto range = [&](const char* key) {
        const auto& arr = j.at(key);
        return SiteRange{arr.at(0).get<int>(), arr.at(1).get<int>()};
    };
    if (name == "copy" || name == "cleanup") {
        SiteRange region = range("region");
        SiteRange copy_region = range("copy_region");
        const int env_size = j.at("env_size").get<int>();
        TaskSpec task = name == "copy"
                            ? make_copy_task(region, copy_region, env_size)
                            : make_cleanup_task(region, copy_region,
                                                bits_from_string(j.at("target").get<std::string>()),
                                                env_size);
        if (j.contains("env")) {
            task.initial = task_initial_with_env(task, bits_from_string(j.at("env")));
        }
        return task;
    }
    if (name == "shift") {
        TaskSpec task = make_shift_task(range("region"), j.value("offset", 3),
                                        j.at("env_size").get<int>());
        if (j.contains("env")) {
            task.initial = task_initial_with_env(task, bits_from_string(j.at("env")));
        }
        return task;
    }
    throw std::invalid_argument("unknown task '" + name + "'");
}

ExternalOperatorSpec external_from_json(const json& j, const LatticeGeometry& g) {
    ExternalOperatorSpec spec;
    spec.role = j.at("role").get<std::string>();
    if (spec.role != "action" && spec.role != "computation" && spec.role != "step") {
        throw std::invalid_argument("operator role must be action, computation or step");
    }
    spec.geometry = g;
    std::vector<Configuration> configs;
    for (const auto& line : j.at("basis")) {
        configs.push_back(parse_configuration(line.get<std::string>(), g));
    }
    auto basis = std::make_shared<BasisEnumeration>(std::move(configs));
    spec.basis = basis;
    SparseOperator matrix(basis);
    for (const auto& entry : j.at("entries")) {
        if (!entry.is_array() || entry.size() != 4) {
            throw std::invalid_argument("operator entries must be [row, col, re, im]");
        }
        matrix.add(entry.at(0).get<int>(), entry.at(1).get<int>(),
                   cplx(entry.at(2).get<double>(), entry.at(3).get<double>()));
    }
    spec.matrix = std::move(matrix);
    return spec;
}

void format_value(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
    }
    Scenario s;
    s.version = j.value("version", 1);
    if (s.version != 1) {
        throw std::invalid_argument("unsupported scenario version " + std::to_string(s.version));
    }
    s.coupling = j.value("K", 1.0);
    if (s.coupling <= 0.0) {
        throw std::invalid_argument("K must be positive");
    }
    if (j.contains("task")) {
        s.task = task_from_json(j.at("task"));
        s.geometry = s.task->geometry;
        s.final_outputs = s.task->final_outputs;
    } else if (j.contains("geometry")) {
        s.geometry = j.at("geometry").get<LatticeGeometry>();
        if (j.contains("rules")) {
            const auto& rules = j.at("rules");
            s.computation = rules.value("computation", json{{"phase", "computation"},
                                                            {"rules", json::array()}})
                                .get<RuleSet>();
            s.action = rules.value("action", json{{"phase", "action"}, {"rules", json::array()}})
                           .get<RuleSet>();
        }
        if (j.contains("operators")) {
            for (const auto& op : j.at("operators")) {
                s.external_operators.push_back(external_from_json(op, s.geometry));
            }
        }
        if (j.contains("final_outputs")) {
            for (const auto& v : j.at("final_outputs")) {
                s.final_outputs.insert(v.get<int>());
            }
        }
    } else {
        throw std::invalid_argument("scenario needs either a task or a geometry section");
    }
    if (j.contains("initial")) {
        const auto& init = j.at("initial");
        if (init.contains("configuration")) {
            s.initial_configuration =
                parse_configuration(init.at("configuration").get<std::string>(), s.geometry);
        }
        if (init.contains("amplitudes")) {
            for (const auto& term : init.at("amplitudes")) {
                Configuration c =
                    parse_configuration(term.at("configuration").get<std::string>(), s.geometry);
                const auto& amp = term.at("amplitude");
                s.initial_amplitudes.emplace_back(
                    c, cplx(amp.at(0).get<double>(), amp.at(1).get<double>()));
            }
        }
    }
    if (j.contains("times")) {
        s.times = j.at("times").get<std::vector<double>>();
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            if (s.times[i] < 0.0 || (i > 0 && s.times[i] < s.times[i - 1])) {
                throw std::invalid_argument("times must be ascending and non-negative");
            }
        }
    }
    if (j.contains("method")) {
        const auto& m = j.at("method");
        s.method = EvolutionMethod::from_string(m.at("kind").get<std::string>());
        s.method.krylov_dim = m.value("subspace", s.method.krylov_dim);
        s.method.taylor_max_terms = m.value("max_terms", s.method.taylor_max_terms);
        s.method.validate();
    }
    s.tolerance = j.value("tol", 1e-10);
    s.max_dim = j.value("max_dim", 4096);
    if (s.max_dim < 1) {
        throw std::invalid_argument("max_dim must be >= 1");
    }
    s.max_steps = j.value("max_steps", 200);
    s.seed = j.value("seed", static_cast<std::uint64_t>(0));
    s.strict = j.value("strict", false);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open scenario file " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

CompiledScenario compile_scenario(const Scenario& s) {
    CompileOptions options{.strict_actions = s.strict};
    std::optional<StepOperator> op;
    Configuration default_initial;
    bool have_default = false;
    if (s.task) {
        op.emplace(task_operator(*s.task, options));
        default_initial = s.task->initial;
        have_default = true;
    } else if (s.computation || s.action) {
        op.emplace(s.computation.value_or(RuleSet{Phase::computation, {}}),
                   s.action.value_or(RuleSet{Phase::action, {}}), s.geometry, options);
    } else {
        throw std::invalid_argument("scenario has no rule sets to run");
    }

    QuantumState initial{s.geometry, {}};
    if (!s.initial_amplitudes.empty()) {
        initial = make_superposition(s.geometry, s.initial_amplitudes);
    } else if (s.initial_configuration) {
        initial = make_basis_state(s.geometry, *s.initial_configuration);
    } else if (have_default) {
        initial = make_basis_state(s.geometry, default_initial);
    } else {
        throw std::invalid_argument("scenario needs an initial state");
    }

    std::set<Configuration> support;
    for (const auto& [c, a] : initial.amplitudes) {
        support.insert(c);
    }
    auto basis = std::make_shared<BasisEnumeration>(enumerate_reachable(support, *op, s.max_dim));
    SparseOperator matrix = to_matrix(*op, basis);
    return CompiledScenario{std::move(*op), std::move(initial), basis, std::move(matrix)};
}

namespace {

// The homogeneity scans conjugate by lattice translations, so their bases
// must be closed over the translation orbit of the initial support.
BasisPtr orbit_closure(const Scenario& s, const CompiledScenario& model, bool env_orbit) {
    std::set<Configuration> seed;
    for (const auto& [c, amp] : model.initial.amplitudes) {
        seed.insert(c);
        const int period = env_orbit ? s.geometry.env_size : s.geometry.onboard_size;
        for (int d = 1; d < period; ++d) {
            seed.insert(env_orbit ? translate_env(c, d) : translate_onboard(c, d));
        }
    }
    return std::make_shared<BasisEnumeration>(enumerate_reachable(seed, model.op, s.max_dim));
}

} // namespace

std::vector<ViolationReport> validate_scenario(const Scenario& s) {
    std::vector<ViolationReport> all;
    auto absorb = [&](std::vector<ViolationReport> reports) {
        for (auto& r : reports) {
            all.push_back(std::move(r));
        }
    };
    if (s.task || s.computation || s.action) {
        CompiledScenario model = compile_scenario(s);
        SparseOperator action_part = to_matrix(model.op, model.basis, OperatorPart::action);
        SparseOperator computation_part =
            to_matrix(model.op, model.basis, OperatorPart::computation);
        const Boundary boundary = s.geometry.env_boundary;
        absorb(check_env_locality(action_part, boundary));
        absorb(check_env_locality(computation_part, boundary));
        absorb(check_onboard_locality(computation_part));
        absorb(check_onboard_locality(action_part));
        absorb(check_gating_and_diagonality(action_part, computation_part));
        if (s.check_homogeneity_flag && boundary == Boundary::cyclic) {
            BasisPtr env_basis = orbit_closure(s, model, true);
            absorb(check_homogeneity(to_matrix(model.op, env_basis), HomogeneityAxis::env_j));
            BasisPtr onboard_basis = orbit_closure(s, model, false);
            absorb(check_homogeneity(
                to_matrix(model.op, onboard_basis, OperatorPart::computation),
                HomogeneityAxis::onboard_k));
        }
    }
    for (const auto& ext : s.external_operators) {
        if (ext.role == "action" || ext.role == "step") {
            absorb(check_env_locality(ext.matrix, ext.geometry.env_boundary));
        }
        if (ext.role == "computation" || ext.role == "step") {
            absorb(check_onboard_locality(ext.matrix));
        }
        if (ext.role == "action") {
            SparseOperator empty(ext.basis);
            absorb(check_gating_and_diagonality(ext.matrix, empty));
        }
        if (ext.role == "computation") {
            SparseOperator empty(ext.basis);
            absorb(check_gating_and_diagonality(empty, ext.matrix));
        }
    }
    return all;
}

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
    CompiledScenario model = compile_scenario(s);
    Hamiltonian h = build_hamiltonian(model.step_matrix, s.coupling);
    EvolutionMethod method = s.method;
    EvolutionResult evolution = evolve_series(h, model.initial, s.times, method, s.tolerance);
    std::filesystem::create_directories(out_dir);
    RunResult result{std::move(evolution), out_dir / "amplitudes.csv", out_dir / "marginals.csv"};
    write_amplitudes_csv(result.evolution, result.amplitudes_csv);
    write_marginals_csv(result.evolution, result.marginals_csv);
    return result;
}

ClassicalTrace trace_scenario(const Scenario& s) {
    if (s.task) {
        Configuration initial = s.initial_configuration.value_or(s.task->initial);
        return classical_trace(*s.task, initial, s.max_steps);
    }
    if (!s.computation && !s.action) {
        throw std::invalid_argument("trace needs a task or inline rule sets");
    }
    if (!s.initial_configuration) {
        throw std::invalid_argument("trace needs an initial configuration");
    }
    TaskSpec inline_task;
    inline_task.name = "inline";
    inline_task.geometry = s.geometry;
    inline_task.computation = s.computation.value_or(RuleSet{Phase::computation, {}});
    inline_task.action = s.action.value_or(RuleSet{Phase::action, {}});
    inline_task.initial = *s.initial_configuration;
    inline_task.final_outputs = s.final_outputs;
    return classical_trace(inline_task, *s.initial_configuration, s.max_steps);
}

void write_amplitudes_csv(const EvolutionResult& result, const std::filesystem::path& path) {
    std::string out = "time,configuration,re,im\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        for (const auto& [c, a] : result.states[i].amplitudes) {
            format_value(out, result.times[i]);
            out += ',';
            out += format_configuration(c);
            out += ',';
            format_value(out, a.real());
            out += ',';
            format_value(out, a.imag());
            out += '\n';
        }
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot write " + path.string());
    }
    file << out;
}

void write_marginals_csv(const EvolutionResult& result, const std::filesystem::path& path) {
    static constexpr MarginalSelector selectors[] = {
        MarginalSelector::robot_position, MarginalSelector::control_bit,
        MarginalSelector::env_string, MarginalSelector::output_register,
        MarginalSelector::memory_register};
    std::string out = "time,selector,value,probability\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        for (MarginalSelector sel : selectors) {
            for (const auto& [value, p] : marginal(result.states[i], sel)) {
                format_value(out, result.times[i]);
                out += ',';
                out += to_string(sel);
                out += ',';
                out += value;
                out += ',';
                format_value(out, p);
                out += '\n';
            }
        }
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot write " + path.string());
    }
    file << out;
}

} // namespace qrsim
