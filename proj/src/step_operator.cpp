#include "qrsim/step_operator.hpp"

#include <deque>
#include <stdexcept>

namespace qrsim {

namespace {

int wrap(int value, int size) {
    return ((value % size) + size) % size;
}

bool match_fires(const RuleMatch& m, const Configuration& c) {
    if (m.head_state && *m.head_state != c.head_state) return false;
    if (m.tape_bit && *m.tape_bit != c.tape[static_cast<std::size_t>(c.head_pos)]) return false;
    if (m.memory && *m.memory != c.memory) return false;
    if (m.output && *m.output != c.output) return false;
    if (m.env_bit && *m.env_bit != c.env[static_cast<std::size_t>(c.robot_pos)]) return false;
    return true;
}

} // namespace

StepOperator::StepOperator(RuleSet computation, RuleSet action, LatticeGeometry geometry,
                           CompileOptions options)
    : geometry_(geometry), computation_(std::move(computation)), action_(std::move(action)) {
    geometry_.validate();
    if (computation_.phase != Phase::computation) {
        throw std::invalid_argument("first rule set must carry the computation phase tag");
    }
    if (action_.phase != Phase::action) {
        throw std::invalid_argument("second rule set must carry the action phase tag");
    }
    validate_ruleset(computation_, geometry_, options);
    validate_ruleset(action_, geometry_, options);
}

StepOperator compile_ruleset(RuleSet computation, RuleSet action, LatticeGeometry geometry,
                             CompileOptions options) {
    return StepOperator(std::move(computation), std::move(action), geometry, options);
}

std::optional<std::pair<Configuration, cplx>>
StepOperator::apply_rule(const LocalRule& rule, const Configuration& c, const LatticeGeometry& g) {
    const int gate = rule.phase == Phase::computation ? 0 : 1;
    if (c.control != gate || !match_fires(rule.match, c)) {
        return std::nullopt;
    }
    Configuration out = c;
    if (rule.phase == Phase::computation) {
        if (rule.outcome.head_state) {
            out.head_state = *rule.outcome.head_state;
        }
        if (rule.outcome.tape_bit) {
            out.tape[static_cast<std::size_t>(c.head_pos)] =
                static_cast<std::uint8_t>(*rule.outcome.tape_bit);
        }
        out.head_pos = wrap(c.head_pos + rule.outcome.head_move, g.onboard_size);
        if (rule.outcome.flip_control) {
            out.control = 1;
            out.memory = c.output;
            out.output = *rule.outcome.next_output;
        }
    } else {
        if (rule.outcome.env_bit) {
            out.env[static_cast<std::size_t>(c.robot_pos)] =
                static_cast<std::uint8_t>(*rule.outcome.env_bit);
        }
        int j = c.robot_pos + rule.outcome.robot_move;
        if (g.env_boundary == Boundary::cyclic) {
            j = wrap(j, g.env_size);
        } else if (j < 0 || j >= g.env_size) {
            return std::nullopt; // moving off a bounded lattice contributes nothing
        }
        out.robot_pos = j;
        if (rule.outcome.flip_control) {
            out.control = 0;
        }
    }
    return std::make_pair(std::move(out), rule.amplitude);
}

std::vector<std::pair<Configuration, cplx>>
StepOperator::rule_preimages(const LocalRule& rule, const Configuration& c, const LatticeGeometry& g) {
    std::vector<std::pair<Configuration, cplx>> out;
    // Cheap rejections on the image shape, then candidate enumeration over the
    // fields the rule overwrote, each candidate verified by a forward run.
    const int post_gate = rule.phase == Phase::computation
                              ? (rule.outcome.flip_control ? 1 : 0)
                              : (rule.outcome.flip_control ? 0 : 1);
    if (c.control != post_gate) {
        return out;
    }
    Configuration base = c;
    std::vector<int> head_states, tape_bits, memories, outputs, env_bits;
    auto candidates = [](const std::optional<int>& outcome_field,
                         const std::optional<int>& match_field, int current, int bound) {
        std::vector<int> values;
        if (!outcome_field) {
            values.push_back(current); // field untouched
        } else if (match_field) {
            values.push_back(*match_field);
        } else {
            for (int v = 0; v < bound; ++v) {
                values.push_back(v);
            }
        }
        return values;
    };
    if (rule.phase == Phase::computation) {
        base.head_pos = wrap(c.head_pos - rule.outcome.head_move, g.onboard_size);
        const int tape_now = c.tape[static_cast<std::size_t>(base.head_pos)];
        head_states = candidates(rule.outcome.head_state, rule.match.head_state, c.head_state,
                                 g.head_states);
        tape_bits = candidates(rule.outcome.tape_bit, rule.match.tape_bit, tape_now, 2);
        if (rule.outcome.flip_control) {
            base.control = 0;
            // The flip stored the old output in memory and overwrote the output.
            outputs.push_back(c.memory);
            if (rule.match.memory) {
                memories.push_back(*rule.match.memory);
            } else {
                for (int v = 0; v < g.register_dim; ++v) {
                    memories.push_back(v);
                }
            }
        } else {
            memories.push_back(c.memory);
            outputs.push_back(c.output);
        }
        env_bits.push_back(c.env[static_cast<std::size_t>(c.robot_pos)]);
    } else {
        int j = c.robot_pos - rule.outcome.robot_move;
        if (g.env_boundary == Boundary::cyclic) {
            j = wrap(j, g.env_size);
        } else if (j < 0 || j >= g.env_size) {
            return out;
        }
        base.robot_pos = j;
        const int env_now = c.env[static_cast<std::size_t>(j)];
        env_bits = candidates(rule.outcome.env_bit, rule.match.env_bit, env_now, 2);
        if (rule.outcome.flip_control) {
            base.control = 1;
        }
        head_states.push_back(c.head_state);
        tape_bits.push_back(c.tape[static_cast<std::size_t>(base.head_pos)]);
        memories.push_back(c.memory);
        outputs.push_back(c.output);
    }
    for (int hs : head_states) {
        for (int tb : tape_bits) {
            for (int mem : memories) {
                for (int o : outputs) {
                    for (int eb : env_bits) {
                        Configuration cand = base;
                        cand.head_state = hs;
                        cand.tape[static_cast<std::size_t>(base.head_pos)] =
                            static_cast<std::uint8_t>(tb);
                        cand.memory = mem;
                        cand.output = o;
                        cand.env[static_cast<std::size_t>(base.robot_pos)] =
                            static_cast<std::uint8_t>(eb);
                        auto fwd = apply_rule(rule, cand, g);
                        if (fwd && fwd->first == c) {
                            out.emplace_back(std::move(cand), fwd->second);
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::map<Configuration, cplx> StepOperator::transitions_from(const Configuration& c,
                                                             OperatorPart part) const {
    std::map<Configuration, cplx> images;
    auto run = [&](const RuleSet& set) {
        for (const LocalRule& rule : set.rules) {
            if (auto img = apply_rule(rule, c, geometry_)) {
                images[img->first] += img->second;
            }
        }
    };
    if (part != OperatorPart::action) {
        run(computation_);
    }
    if (part != OperatorPart::computation) {
        run(action_);
    }
    for (auto it = images.begin(); it != images.end();) {
        it = std::abs(it->second) < kAmplitudeEpsilon ? images.erase(it) : std::next(it);
    }
    return images;
}

std::map<Configuration, cplx> StepOperator::transitions_into(const Configuration& c,
                                                             OperatorPart part) const {
    std::map<Configuration, cplx> sources;
    auto run = [&](const RuleSet& set) {
        for (const LocalRule& rule : set.rules) {
            for (auto& [pre, amp] : rule_preimages(rule, c, geometry_)) {
                sources[pre] += amp;
            }
        }
    };
    if (part != OperatorPart::action) {
        run(computation_);
    }
    if (part != OperatorPart::computation) {
        run(action_);
    }
    for (auto it = sources.begin(); it != sources.end();) {
        it = std::abs(it->second) < kAmplitudeEpsilon ? sources.erase(it) : std::next(it);
    }
    return sources;
}

QuantumState StepOperator::apply(const QuantumState& state) const {
    if (state.geometry != geometry_) {
        throw std::invalid_argument("state geometry does not match the operator");
    }
    QuantumState out{geometry_, {}};
    for (const auto& [c, a] : state.amplitudes) {
        for (const auto& [img, amp] : transitions_from(c)) {
            out.amplitudes[img] += a * amp;
        }
    }
    prune(out);
    return out;
}

QuantumState StepOperator::apply_adjoint(const QuantumState& state) const {
    if (state.geometry != geometry_) {
        throw std::invalid_argument("state geometry does not match the operator");
    }
    QuantumState out{geometry_, {}};
    for (const auto& [c, a] : state.amplitudes) {
        // <c0|T†|c> = conj(<c|T|c0>)
        for (const auto& [src, amp] : transitions_into(c)) {
            out.amplitudes[src] += a * std::conj(amp);
        }
    }
    prune(out);
    return out;
}

BasisEnumeration enumerate_reachable(const std::set<Configuration>& initial_support,
                                     const StepOperator& op, int max_dim) {
    if (max_dim < static_cast<int>(initial_support.size())) {
        throw std::invalid_argument("max_dim smaller than the initial support");
    }
    std::set<Configuration> seen(initial_support.begin(), initial_support.end());
    std::deque<Configuration> frontier(initial_support.begin(), initial_support.end());
    auto visit = [&](const Configuration& c) {
        if (seen.insert(c).second) {
            if (static_cast<int>(seen.size()) > max_dim) {
                throw std::runtime_error("reachable closure exceeds max_dim = " +
                                         std::to_string(max_dim));
            }
            frontier.push_back(c);
        }
    };
    while (!frontier.empty()) {
        Configuration c = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& [img, amp] : op.transitions_from(c)) {
            visit(img);
        }
        for (const auto& [src, amp] : op.transitions_into(c)) {
            visit(src);
        }
    }
    return BasisEnumeration(std::vector<Configuration>(seen.begin(), seen.end()));
}

SparseOperator to_matrix(const StepOperator& op, BasisPtr basis, OperatorPart part) {
    SparseOperator matrix(basis);
    for (int col = 0; col < basis->size(); ++col) {
        for (const auto& [img, amp] : op.transitions_from(basis->at(col), part)) {
            int row = basis->index_of(img);
            if (row < 0) {
                throw std::invalid_argument(
                    "basis is not closed under the operator: " +
                    format_configuration(basis->at(col)) + " -> " + format_configuration(img));
            }
            matrix.add(row, col, amp);
        }
    }
    return matrix;
}

} // namespace qrsim
