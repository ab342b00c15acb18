#pragma once

#include <string>
#include <vector>

#include "qrsim/sparse_operator.hpp"

namespace qrsim {

// One matrix element that breaks a structural condition. The witness pair can
// be re-checked against the named condition independently of the scan.
struct ViolationReport {
    std::string condition;
    Configuration row;
    Configuration col;
    cplx value;
    std::string explanation;
};

std::string violation_to_json_line(const ViolationReport& v);

// Scans refuse operators whose basis is too large to enumerate exhaustively.
inline constexpr int kMaxValidatorDim = 20000;

// Environment locality: a nonzero <c'|T|c> may change the environment only at
// the robot's source site and may move the robot at most one site (cyclic
// distance on cyclic lattices).
std::vector<ViolationReport> check_env_locality(const SparseOperator& op,
                                                Boundary env_boundary = Boundary::cyclic);

// On-board locality: tape changes only under the head, head moves at most one
// site (the on-board track is always cyclic).
std::vector<ViolationReport> check_onboard_locality(const SparseOperator& op);

enum class HomogeneityAxis { env_j, onboard_k };

// Exact translation invariance of the matrix. Preconditions (exceptions, not
// reports): the corresponding lattice is cyclic and the basis is closed under
// the translation.
std::vector<ViolationReport> check_homogeneity(const SparseOperator& op, HomogeneityAxis axis);

// Control gating and reference-basis diagonality: action columns have control
// 1 and touch neither registers nor the on-board machine; computation columns
// have control 0 and leave the environment alone.
std::vector<ViolationReport> check_gating_and_diagonality(const SparseOperator& action_part,
                                                          const SparseOperator& computation_part);

// max |(U†U - I)_{ab}| over all pairs, by exhaustive accumulation.
double check_unitarity(const SparseOperator& op);

struct DistinctPathResult {
    bool is_distinct_path = false;
    int path_length = 0; // applications of T until the orbit closes or dies
    bool closed = false; // orbit returned to the start state
};

// Iterates T on |start> and reports whether the orbit stays a single basis
// state (within tol) through pairwise-distinct configurations.
DistinctPathResult check_distinct_path(const SparseOperator& op, const Configuration& start,
                                       int n_steps, double tol = 1e-12);

} // namespace qrsim
