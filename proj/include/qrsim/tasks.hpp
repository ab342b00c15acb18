#pragma once

#include <functional>
#include <set>
#include <string>

#include "qrsim/step_operator.hpp"

namespace qrsim {

// Total map (output, memory, env bit) -> next output, the program driving the
// on-board computation phase.
class LookupTable {
public:
    LookupTable(int register_dim, std::vector<int> values); // values[(l2*L + l1)*2 + s]
    static LookupTable from_function(int register_dim,
                                     const std::function<int(int, int, int)>& f);

    int register_dim() const { return register_dim_; }
    int at(int l2, int l1, int s) const;

private:
    int register_dim_;
    std::vector<int> values_;
};

// Computation rule set realizing one lookup step: the on-board head marks its
// start cell, walks the cyclic tape once, erases the mark on return and flips
// the control, shifting the output into memory and loading table(output,
// memory, env bit) into the output register. Every run starts and ends with
// the head in state 0 at site 0 over an all-zero tape; the run takes
// onboard_size + 2 steps. Requires head_states >= 3.
RuleSet compile_lookup_computation(const LookupTable& table, const LatticeGeometry& g);

// Inclusive site range on the environment lattice.
struct SiteRange {
    int lo = 0;
    int hi = 0;
    int length() const { return hi - lo + 1; }
};

// A named scenario: rule sets plus the starting configuration and the output
// values that flag completion (their action is a plain rightward drift).
struct TaskSpec {
    std::string name;
    LatticeGeometry geometry;
    RuleSet computation;
    RuleSet action;
    Configuration initial;
    std::set<int> final_outputs;
};

StepOperator task_operator(const TaskSpec& task, CompileOptions options = {});

// The canonical start with a different environment pattern.
Configuration task_initial_with_env(const TaskSpec& task, const Bits& env);

// Single-step action rotating the environment qubit under the robot by
// R(phi) = [[cos(phi/2), -sin(phi/2)], [sin(phi/2), cos(phi/2)]].
TaskSpec make_rotate_task(double phi, int env_size = 4);

// Multistep action: while the qubit under the robot is 0, rewrite it to
// a|0> + b|1> and move right; the first 1 read ends the action. Never halts on
// an all-zero cyclic lattice. |a|^2 + |b|^2 must be 1.
TaskSpec make_search_zeros_task(cplx a, cplx b, const Bits& env, int env_size = 0);

// Copies the region pattern into an equal-length zeroed region to its right
// (exclusive-or writes, so basis patterns copy and superpositions correlate).
// The compiled operator permutes its reachable basis: after the copy settles
// it uncopies and recopies forever, so every orbit is a closed cycle.
TaskSpec make_copy_task(SiteRange region, SiteRange copy_region, int env_size);

// Stores the region pattern into copy_region, overwrites the region with the
// target pattern, then reverses the whole transformation on the next lap.
// Unitary on its reachable basis for the same reason as the copy task.
TaskSpec make_cleanup_task(SiteRange region, SiteRange copy_region, const Bits& target_pattern,
                           int env_size);

// Moves the region bit pattern `offset` sites right when every destination
// site reads 0, otherwise leaves the environment unchanged.
TaskSpec make_shift_task(SiteRange region, int offset = 3, int env_size = 6);

struct ClassicalTrace {
    std::vector<Configuration> steps; // steps[0] is the initial configuration
    bool terminated = false;          // a completion flag was raised
    int step_count = 0;               // applied rule steps (steps.size() - 1)
};

// Follows single-image rule applications from `initial`. Throws when two
// distinct images fire on one configuration (naming it); stops without the
// terminated flag when no rule fires or max_steps is reached.
ClassicalTrace classical_trace(const TaskSpec& task, const Configuration& initial, int max_steps);

std::string trace_to_json_lines(const ClassicalTrace& trace);

} // namespace qrsim
