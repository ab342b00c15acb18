#include "qrsim/rules.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "qrsim/serialization.hpp"

namespace qrsim {

std::string to_string(Phase p) {
    return p == Phase::computation ? "computation" : "action";
}

Phase phase_from_string(const std::string& name) {
    if (name == "computation") {
        return Phase::computation;
    }
    if (name == "action") {
        return Phase::action;
    }
    throw std::invalid_argument("unknown phase '" + name + "'");
}

namespace {

[[noreturn]] void rule_error(std::size_t index, const std::string& what) {
    throw std::invalid_argument("rule " + std::to_string(index) + ": " + what);
}

void check_field_range(std::size_t index, const std::optional<int>& value, int bound,
                       const char* name) {
    if (value && (*value < 0 || *value >= bound)) {
        rule_error(index, std::string(name) + "=" + std::to_string(*value) + " out of range [0, " +
                              std::to_string(bound) + ")");
    }
}

// Concrete key used for fast duplicate grouping of fully-specified matches.
using MatchKey = std::tuple<int, int, int, int, int>;

bool fully_concrete(const RuleMatch& m) {
    return m.head_state && m.tape_bit && m.memory && m.output && m.env_bit;
}

MatchKey match_key(const RuleMatch& m) {
    return {*m.head_state, *m.tape_bit, *m.memory, *m.output, *m.env_bit};
}

} // namespace

bool matches_overlap(const RuleMatch& a, const RuleMatch& b) {
    auto compatible = [](const std::optional<int>& x, const std::optional<int>& y) {
        return !x || !y || *x == *y;
    };
    return compatible(a.head_state, b.head_state) && compatible(a.tape_bit, b.tape_bit) &&
           compatible(a.memory, b.memory) && compatible(a.output, b.output) &&
           compatible(a.env_bit, b.env_bit);
}

void validate_ruleset(const RuleSet& set, const LatticeGeometry& g, const CompileOptions& opts) {
    g.validate();
    for (std::size_t i = 0; i < set.rules.size(); ++i) {
        const LocalRule& r = set.rules[i];
        if (r.phase != set.phase) {
            rule_error(i, "phase tag does not match its rule set");
        }
        check_field_range(i, r.match.head_state, g.head_states, "match.head_state");
        check_field_range(i, r.match.tape_bit, 2, "match.tape_bit");
        check_field_range(i, r.match.memory, g.register_dim, "match.memory");
        check_field_range(i, r.match.output, g.register_dim, "match.output");
        check_field_range(i, r.match.env_bit, 2, "match.env_bit");
        check_field_range(i, r.outcome.head_state, g.head_states, "outcome.head_state");
        check_field_range(i, r.outcome.tape_bit, 2, "outcome.tape_bit");
        check_field_range(i, r.outcome.env_bit, 2, "outcome.env_bit");
        check_field_range(i, r.outcome.next_output, g.register_dim, "outcome.next_output");
        if (r.outcome.head_move < -1 || r.outcome.head_move > 1) {
            rule_error(i, "head_move must be -1, 0 or +1");
        }
        if (r.outcome.robot_move < -1 || r.outcome.robot_move > 1) {
            rule_error(i, "robot_move must be -1, 0 or +1");
        }
        if (std::abs(r.amplitude) < kAmplitudeEpsilon) {
            rule_error(i, "amplitude is zero");
        }
        if (r.phase == Phase::computation) {
            if (r.outcome.env_bit) {
                rule_error(i, "computation rules cannot write the environment qubit; the qubit "
                              "under the robot is read-only context while the control is 0");
            }
            if (r.outcome.robot_move != 0) {
                rule_error(i, "computation rules cannot move the robot");
            }
            if (r.outcome.flip_control != r.outcome.next_output.has_value()) {
                rule_error(i, "next_output must be given exactly when a computation rule flips "
                              "the control (the flip shifts output into memory)");
            }
        } else {
            if (r.outcome.head_state || r.outcome.tape_bit || r.outcome.head_move != 0) {
                rule_error(i, "action rules cannot touch the on-board head or tape");
            }
            if (r.outcome.next_output) {
                rule_error(i, "action rules cannot write the output register");
            }
            if (opts.strict_actions && r.match.memory) {
                rule_error(i, "strict mode: action rules may not read the memory register");
            }
        }
    }

    // Duplicate detection: two rules firing on a common context with an
    // identical outcome is an error rather than silent amplitude summing.
    std::map<MatchKey, std::vector<std::size_t>> concrete;
    std::vector<std::size_t> wildcard;
    for (std::size_t i = 0; i < set.rules.size(); ++i) {
        if (fully_concrete(set.rules[i].match)) {
            concrete[match_key(set.rules[i].match)].push_back(i);
        } else {
            wildcard.push_back(i);
        }
    }
    auto report_duplicate = [](std::size_t a, std::size_t b) {
        throw std::invalid_argument("rules " + std::to_string(a) + " and " + std::to_string(b) +
                                    " fire on a common context with identical outcomes");
    };
    for (const auto& [key, group] : concrete) {
        for (std::size_t x = 0; x < group.size(); ++x) {
            for (std::size_t y = x + 1; y < group.size(); ++y) {
                if (set.rules[group[x]].outcome == set.rules[group[y]].outcome &&
                    set.rules[group[x]].match == set.rules[group[y]].match) {
                    report_duplicate(group[x], group[y]);
                }
            }
        }
    }
    for (std::size_t w : wildcard) {
        for (std::size_t i = 0; i < set.rules.size(); ++i) {
            if (i == w || (i < w && !fully_concrete(set.rules[i].match))) {
                continue; // wildcard pairs handled once, with w as the smaller index
            }
            if (matches_overlap(set.rules[w].match, set.rules[i].match) &&
                set.rules[w].outcome == set.rules[i].outcome) {
                report_duplicate(std::min(w, i), std::max(w, i));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON conversions

namespace {

void put_optional(nlohmann::json& j, const char* key, const std::optional<int>& v) {
    if (v) {
        j[key] = *v;
    }
}

std::optional<int> get_optional(const nlohmann::json& j, const char* key) {
    if (auto it = j.find(key); it != j.end()) {
        return it->get<int>();
    }
    return std::nullopt;
}

} // namespace

void to_json(nlohmann::json& j, const LatticeGeometry& g) {
    j = nlohmann::json{{"env_size", g.env_size},
                       {"env_boundary", to_string(g.env_boundary)},
                       {"onboard_size", g.onboard_size},
                       {"head_states", g.head_states},
                       {"register_dim", g.register_dim}};
}

void from_json(const nlohmann::json& j, LatticeGeometry& g) {
    g.env_size = j.at("env_size").get<int>();
    g.env_boundary = boundary_from_string(j.value("env_boundary", "cyclic"));
    g.onboard_size = j.at("onboard_size").get<int>();
    g.head_states = j.at("head_states").get<int>();
    g.register_dim = j.at("register_dim").get<int>();
    g.validate();
}

void to_json(nlohmann::json& j, const RuleMatch& m) {
    j = nlohmann::json::object();
    put_optional(j, "head_state", m.head_state);
    put_optional(j, "tape_bit", m.tape_bit);
    put_optional(j, "memory", m.memory);
    put_optional(j, "output", m.output);
    put_optional(j, "env_bit", m.env_bit);
}

void from_json(const nlohmann::json& j, RuleMatch& m) {
    m.head_state = get_optional(j, "head_state");
    m.tape_bit = get_optional(j, "tape_bit");
    m.memory = get_optional(j, "memory");
    m.output = get_optional(j, "output");
    m.env_bit = get_optional(j, "env_bit");
}

void to_json(nlohmann::json& j, const RuleOutcome& o) {
    j = nlohmann::json::object();
    put_optional(j, "head_state", o.head_state);
    put_optional(j, "tape_bit", o.tape_bit);
    if (o.head_move != 0) {
        j["head_move"] = o.head_move;
    }
    put_optional(j, "env_bit", o.env_bit);
    if (o.robot_move != 0) {
        j["robot_move"] = o.robot_move;
    }
    if (o.flip_control) {
        j["flip_control"] = true;
    }
    put_optional(j, "next_output", o.next_output);
}

void from_json(const nlohmann::json& j, RuleOutcome& o) {
    o.head_state = get_optional(j, "head_state");
    o.tape_bit = get_optional(j, "tape_bit");
    o.head_move = j.value("head_move", 0);
    o.env_bit = get_optional(j, "env_bit");
    o.robot_move = j.value("robot_move", 0);
    o.flip_control = j.value("flip_control", false);
    o.next_output = get_optional(j, "next_output");
}

void to_json(nlohmann::json& j, const LocalRule& r) {
    j = nlohmann::json{{"phase", to_string(r.phase)},
                       {"match", r.match},
                       {"outcome", r.outcome},
                       {"amplitude", {r.amplitude.real(), r.amplitude.imag()}}};
}

void from_json(const nlohmann::json& j, LocalRule& r) {
    r.phase = phase_from_string(j.at("phase").get<std::string>());
    r.match = j.value("match", nlohmann::json::object()).get<RuleMatch>();
    r.outcome = j.value("outcome", nlohmann::json::object()).get<RuleOutcome>();
    const auto& amp = j.at("amplitude");
    if (!amp.is_array() || amp.size() != 2) {
        throw std::invalid_argument("rule amplitude must be [re, im]");
    }
    r.amplitude = cplx(amp[0].get<double>(), amp[1].get<double>());
}

void to_json(nlohmann::json& j, const RuleSet& s) {
    j = nlohmann::json{{"phase", to_string(s.phase)}, {"rules", s.rules}};
}

void from_json(const nlohmann::json& j, RuleSet& s) {
    s.phase = phase_from_string(j.at("phase").get<std::string>());
    s.rules = j.at("rules").get<std::vector<LocalRule>>();
}

std::string ruleset_to_json(const RuleSet& set) {
    nlohmann::json j = set;
    return j.dump(2);
}

RuleSet ruleset_from_json(const std::string& text) {
    return nlohmann::json::parse(text).get<RuleSet>();
}

} // namespace qrsim
