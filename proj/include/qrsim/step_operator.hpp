#pragma once

#include <optional>
#include <set>

#include "qrsim/rules.hpp"
#include "qrsim/sparse_operator.hpp"
#include "qrsim/state.hpp"

namespace qrsim {

// Which part of the step operator to realize as a matrix.
enum class OperatorPart { computation, action, both };

// A compiled step operator: the action part moves the robot and rewrites the
// environment qubit under it while the control is 1; the computation part
// drives the on-board machine while the control is 0. Rule sets are validated
// on construction.
class StepOperator {
public:
    StepOperator(RuleSet computation, RuleSet action, LatticeGeometry geometry,
                 CompileOptions options = {});

    const LatticeGeometry& geometry() const { return geometry_; }
    const RuleSet& computation() const { return computation_; }
    const RuleSet& action() const { return action_; }

    // Forward image of one rule on one configuration; empty when the rule
    // does not fire (gating, match failure, or a bounded-lattice edge).
    static std::optional<std::pair<Configuration, cplx>>
    apply_rule(const LocalRule& rule, const Configuration& c, const LatticeGeometry& g);

    // All configurations c0 with <c|rule|c0> != 0, paired with that element.
    static std::vector<std::pair<Configuration, cplx>>
    rule_preimages(const LocalRule& rule, const Configuration& c, const LatticeGeometry& g);

    // Accumulated nonzero matrix elements <c'|T|c> for one source column /
    // target row, restricted to `part`.
    std::map<Configuration, cplx> transitions_from(const Configuration& c,
                                                   OperatorPart part = OperatorPart::both) const;
    std::map<Configuration, cplx> transitions_into(const Configuration& c,
                                                   OperatorPart part = OperatorPart::both) const;

    QuantumState apply(const QuantumState& state) const;         // unnormalized T psi
    QuantumState apply_adjoint(const QuantumState& state) const; // unnormalized T† psi

private:
    LatticeGeometry geometry_;
    RuleSet computation_;
    RuleSet action_;
};

StepOperator compile_ruleset(RuleSet computation, RuleSet action, LatticeGeometry geometry,
                             CompileOptions options = {});

// Smallest configuration set containing `initial_support` and closed under the
// nonzero transitions of T and T†, in enumeration order. Throws when the
// closure would exceed max_dim.
BasisEnumeration enumerate_reachable(const std::set<Configuration>& initial_support,
                                     const StepOperator& op, int max_dim);

// Matrix of T (or one of its parts) over a closed basis. Throws when a
// transition escapes the basis, naming the escaping pair.
SparseOperator to_matrix(const StepOperator& op, BasisPtr basis,
                         OperatorPart part = OperatorPart::both);

} // namespace qrsim
