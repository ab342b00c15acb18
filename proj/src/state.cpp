#include "qrsim/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qrsim {

QuantumState make_basis_state(const LatticeGeometry& g, const Configuration& c) {
    QuantumState state{g, {}};
    state.amplitudes.emplace(c, cplx(1.0, 0.0));
    return state;
}

QuantumState make_superposition(const LatticeGeometry& g,
                                const std::vector<std::pair<Configuration, cplx>>& terms) {
    QuantumState state{g, {}};
    for (const auto& [c, a] : terms) {
        state.amplitudes[c] += a;
    }
    prune(state);
    return normalize(state);
}

double norm(const QuantumState& state) {
    double total = 0.0;
    for (const auto& [c, a] : state.amplitudes) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

QuantumState normalize(const QuantumState& state) {
    const double n = norm(state);
    if (n < kAmplitudeEpsilon) {
        throw std::invalid_argument("cannot normalize a zero-norm state");
    }
    QuantumState out{state.geometry, {}};
    for (const auto& [c, a] : state.amplitudes) {
        out.amplitudes.emplace(c, a / n);
    }
    prune(out);
    return out;
}

cplx inner_product(const QuantumState& a, const QuantumState& b) {
    if (a.geometry != b.geometry) {
        throw std::invalid_argument("inner_product requires matching geometries");
    }
    // Iterate over the smaller support.
    const QuantumState& small = a.amplitudes.size() <= b.amplitudes.size() ? a : b;
    const QuantumState& large = a.amplitudes.size() <= b.amplitudes.size() ? b : a;
    cplx total = 0.0;
    for (const auto& [c, v] : small.amplitudes) {
        auto it = large.amplitudes.find(c);
        if (it == large.amplitudes.end()) {
            continue;
        }
        const cplx& av = (&small == &a) ? v : it->second;
        const cplx& bv = (&small == &a) ? it->second : v;
        total += std::conj(av) * bv;
    }
    return total;
}

void accumulate(QuantumState& state, const QuantumState& other, cplx coeff) {
    if (state.geometry != other.geometry) {
        throw std::invalid_argument("accumulate requires matching geometries");
    }
    for (const auto& [c, a] : other.amplitudes) {
        state.amplitudes[c] += coeff * a;
    }
    prune(state);
}

void prune(QuantumState& state, double eps) {
    for (auto it = state.amplitudes.begin(); it != state.amplitudes.end();) {
        if (std::abs(it->second) < eps) {
            it = state.amplitudes.erase(it);
        } else {
            ++it;
        }
    }
}

std::string to_string(MarginalSelector s) {
    switch (s) {
        case MarginalSelector::robot_position: return "robot_position";
        case MarginalSelector::control_bit: return "control_bit";
        case MarginalSelector::env_string: return "env_string";
        case MarginalSelector::output_register: return "output_register";
        case MarginalSelector::memory_register: return "memory_register";
    }
    return "?";
}

MarginalSelector marginal_selector_from_string(const std::string& name) {
    if (name == "robot_position") return MarginalSelector::robot_position;
    if (name == "control_bit") return MarginalSelector::control_bit;
    if (name == "env_string") return MarginalSelector::env_string;
    if (name == "output_register") return MarginalSelector::output_register;
    if (name == "memory_register") return MarginalSelector::memory_register;
    throw std::invalid_argument("unknown marginal selector '" + name + "'");
}

std::map<std::string, double> marginal(const QuantumState& state, MarginalSelector selector) {
    const double n = norm(state);
    if (std::abs(n - 1.0) > 1e-8) {
        throw std::invalid_argument("marginal requires a normalized state (norm = " +
                                    std::to_string(n) + ")");
    }
    std::map<std::string, double> dist;
    for (const auto& [c, a] : state.amplitudes) {
        std::string key;
        switch (selector) {
            case MarginalSelector::robot_position: key = std::to_string(c.robot_pos); break;
            case MarginalSelector::control_bit: key = std::to_string(c.control); break;
            case MarginalSelector::env_string: key = bits_to_string(c.env); break;
            case MarginalSelector::output_register: key = std::to_string(c.output); break;
            case MarginalSelector::memory_register: key = std::to_string(c.memory); break;
        }
        dist[key] += std::norm(a);
    }
    return dist;
}

} // namespace qrsim
