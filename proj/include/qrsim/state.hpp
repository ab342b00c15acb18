#pragma once

#include <map>
#include <string>

#include "qrsim/configuration.hpp"

namespace qrsim {

// Sparse state vector over the configuration basis. Entries with amplitude
// below kAmplitudeEpsilon are dropped by the mutating helpers.
struct QuantumState {
    LatticeGeometry geometry;
    std::map<Configuration, cplx> amplitudes;
};

QuantumState make_basis_state(const LatticeGeometry& g, const Configuration& c);
QuantumState make_superposition(const LatticeGeometry& g,
                                const std::vector<std::pair<Configuration, cplx>>& terms);

double norm(const QuantumState& state);
QuantumState normalize(const QuantumState& state); // throws on zero norm
cplx inner_product(const QuantumState& a, const QuantumState& b); // conjugate-linear in a

// state += coeff * other
void accumulate(QuantumState& state, const QuantumState& other, cplx coeff = 1.0);
void prune(QuantumState& state, double eps = kAmplitudeEpsilon);

enum class MarginalSelector { robot_position, control_bit, env_string, output_register, memory_register };

std::string to_string(MarginalSelector s);
MarginalSelector marginal_selector_from_string(const std::string& name);

// |amplitude|^2 totals keyed by the rendered value of the selected label.
// Integer values render in decimal, environment strings as bit strings.
std::map<std::string, double> marginal(const QuantumState& state, MarginalSelector selector);

} // namespace qrsim
