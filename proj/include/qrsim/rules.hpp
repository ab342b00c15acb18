#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrsim/configuration.hpp"

namespace qrsim {

enum class Phase { computation, action };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& name);

// What a rule reads before firing. Unset fields are wildcards. tape_bit is the
// on-board qubit under the head, env_bit the environment qubit under the robot.
struct RuleMatch {
    std::optional<int> head_state;
    std::optional<int> tape_bit;
    std::optional<int> memory;
    std::optional<int> output;
    std::optional<int> env_bit;

    friend bool operator==(const RuleMatch&, const RuleMatch&) = default;
};

// What a rule writes. Unset value fields leave the label unchanged; moves
// default to 0. A computation rule that flips the control (0 -> 1) must carry
// next_output: the flip shifts the old output into memory and loads
// next_output into the output register. An action flip (1 -> 0) changes
// nothing else.
struct RuleOutcome {
    std::optional<int> head_state;
    std::optional<int> tape_bit;
    int head_move = 0;
    std::optional<int> env_bit;
    int robot_move = 0;
    bool flip_control = false;
    std::optional<int> next_output;

    friend bool operator==(const RuleOutcome&, const RuleOutcome&) = default;
};

struct LocalRule {
    Phase phase = Phase::computation;
    RuleMatch match;
    RuleOutcome outcome;
    cplx amplitude{1.0, 0.0};
};

struct RuleSet {
    Phase phase = Phase::computation;
    std::vector<LocalRule> rules;
};

// Rule-language validation. Throws std::invalid_argument naming the rule index
// and the violated condition. Checks per phase:
//   computation: no env writes, no robot moves, fires only on control 0,
//                next_output present iff flip_control;
//   action:      no on-board or register writes, fires only on control 1.
// Both: values in geometry ranges, |moves| <= 1, no duplicated
// (overlapping match, identical outcome) pairs within a set.
struct CompileOptions {
    bool strict_actions = false; // forbid action rules matching on memory
};

void validate_ruleset(const RuleSet& set, const LatticeGeometry& g, const CompileOptions& opts = {});

// Whether two match patterns can fire on a common context.
bool matches_overlap(const RuleMatch& a, const RuleMatch& b);

// JSON wire format (lossless round trip):
//   {"phase": "action", "match": {"output": 2}, "outcome": {"env_bit": 1,
//    "robot_move": 1, "flip_control": true}, "amplitude": [1.0, 0.0]}
std::string ruleset_to_json(const RuleSet& set);
RuleSet ruleset_from_json(const std::string& text);

} // namespace qrsim
