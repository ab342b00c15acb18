#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qrsim {

using cplx = std::complex<double>;

// Amplitudes below this threshold are treated as exact zeros after arithmetic.
inline constexpr double kAmplitudeEpsilon = 1e-14;

enum class Boundary { cyclic, bounded };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

// Sizes of the composite system: a mobile head on the environment lattice
// carrying an on-board head/tape machine plus memory, output and control
// registers.
struct LatticeGeometry {
    int env_size = 1;                         // environment qubit sites
    Boundary env_boundary = Boundary::cyclic; // environment ends
    int onboard_size = 1;                     // on-board tape sites (always cyclic)
    int head_states = 1;                      // on-board head internal states
    int register_dim = 1;                     // dimension of memory and output registers

    void validate() const; // throws std::invalid_argument on bad sizes

    friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;
};

// Qubit pattern, site 0 first.
using Bits = std::vector<std::uint8_t>;

Bits bits_from_string(const std::string& s);
std::string bits_to_string(const Bits& bits);

// One computational-basis label for the whole system. Field order fixes the
// total (lexicographic) order used everywhere enumeration order matters.
struct Configuration {
    int head_state = 0; // on-board head internal state
    int head_pos = 0;   // on-board head site
    Bits tape;          // on-board qubits
    int memory = 0;     // memory register value
    int output = 0;     // output register value
    int control = 0;    // control qubit, 0 = computing, 1 = acting
    int robot_pos = 0;  // robot site on the environment lattice
    Bits env;           // environment qubits

    friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

Configuration make_configuration(const LatticeGeometry& g, int head_state, int head_pos,
                                 const Bits& tape, int memory, int output, int control,
                                 int robot_pos, const Bits& env);

// Wire format: `p=0 k=0 t=000 l1=0 l2=0 c=0 j=0 s=0000`, site 0 leftmost.
std::string format_configuration(const Configuration& c);
Configuration parse_configuration(const std::string& text, const LatticeGeometry& g);

// Translation by one environment site: robot and pattern move together.
Configuration translate_env(const Configuration& c, int shift);
// Translation by one on-board site: head and tape pattern move together.
Configuration translate_onboard(const Configuration& c, int shift);

} // namespace qrsim
