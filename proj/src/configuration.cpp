#include "qrsim/configuration.hpp"

#include <sstream>
#include <stdexcept>

namespace qrsim {

std::string to_string(Boundary b) {
    return b == Boundary::cyclic ? "cyclic" : "bounded";
}

Boundary boundary_from_string(const std::string& name) {
    if (name == "cyclic") {
        return Boundary::cyclic;
    }
    if (name == "bounded") {
        return Boundary::bounded;
    }
    throw std::invalid_argument("unknown boundary '" + name + "' (expected cyclic or bounded)");
}

void LatticeGeometry::validate() const {
    if (env_size < 1) {
        throw std::invalid_argument("env_size must be >= 1");
    }
    if (onboard_size < 1) {
        throw std::invalid_argument("onboard_size must be >= 1");
    }
    if (head_states < 1) {
        throw std::invalid_argument("head_states must be >= 1");
    }
    if (register_dim < 1) {
        throw std::invalid_argument("register_dim must be >= 1");
    }
}

Bits bits_from_string(const std::string& s) {
    Bits bits;
    bits.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("bit string may contain only 0 and 1, got '" + s + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return bits;
}

std::string bits_to_string(const Bits& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

Configuration make_configuration(const LatticeGeometry& g, int head_state, int head_pos,
                                 const Bits& tape, int memory, int output, int control,
                                 int robot_pos, const Bits& env) {
    g.validate();
    auto range_check = [](int value, int bound, const char* name) {
        if (value < 0 || value >= bound) {
            throw std::invalid_argument(std::string(name) + "=" + std::to_string(value) +
                                        " out of range [0, " + std::to_string(bound) + ")");
        }
    };
    range_check(head_state, g.head_states, "head_state");
    range_check(head_pos, g.onboard_size, "head_pos");
    range_check(memory, g.register_dim, "memory");
    range_check(output, g.register_dim, "output");
    range_check(control, 2, "control");
    range_check(robot_pos, g.env_size, "robot_pos");
    if (static_cast<int>(tape.size()) != g.onboard_size) {
        throw std::invalid_argument("tape length " + std::to_string(tape.size()) +
                                    " does not match onboard_size " + std::to_string(g.onboard_size));
    }
    if (static_cast<int>(env.size()) != g.env_size) {
        throw std::invalid_argument("env length " + std::to_string(env.size()) +
                                    " does not match env_size " + std::to_string(g.env_size));
    }
    for (auto b : tape) {
        if (b > 1) {
            throw std::invalid_argument("tape bits must be 0 or 1");
        }
    }
    for (auto b : env) {
        if (b > 1) {
            throw std::invalid_argument("env bits must be 0 or 1");
        }
    }
    return Configuration{head_state, head_pos, tape, memory, output, control, robot_pos, env};
}

std::string format_configuration(const Configuration& c) {
    std::ostringstream out;
    out << "p=" << c.head_state << " k=" << c.head_pos << " t=" << bits_to_string(c.tape)
        << " l1=" << c.memory << " l2=" << c.output << " c=" << c.control << " j=" << c.robot_pos
        << " s=" << bits_to_string(c.env);
    return out.str();
}

Configuration parse_configuration(const std::string& text, const LatticeGeometry& g) {
    std::istringstream in(text);
    std::string field;
    int p = -1, k = -1, l1 = -1, l2 = -1, ctrl = -1, j = -1;
    std::string t, s;
    bool seen[8] = {false, false, false, false, false, false, false, false};
    while (in >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("bad configuration field '" + field + "'");
        }
        std::string key = field.substr(0, eq);
        std::string value = field.substr(eq + 1);
        try {
            if (key == "p") {
                p = std::stoi(value);
                seen[0] = true;
            } else if (key == "k") {
                k = std::stoi(value);
                seen[1] = true;
            } else if (key == "t") {
                t = value;
                seen[2] = true;
            } else if (key == "l1") {
                l1 = std::stoi(value);
                seen[3] = true;
            } else if (key == "l2") {
                l2 = std::stoi(value);
                seen[4] = true;
            } else if (key == "c") {
                ctrl = std::stoi(value);
                seen[5] = true;
            } else if (key == "j") {
                j = std::stoi(value);
                seen[6] = true;
            } else if (key == "s") {
                s = value;
                seen[7] = true;
            } else {
                throw std::invalid_argument("unknown configuration key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad value for configuration key '" + key + "'");
        }
    }
    for (bool b : seen) {
        if (!b) {
            throw std::invalid_argument("configuration text is missing fields: '" + text + "'");
        }
    }
    return make_configuration(g, p, k, bits_from_string(t), l1, l2, ctrl, j, bits_from_string(s));
}

Configuration translate_env(const Configuration& c, int shift) {
    const int m = static_cast<int>(c.env.size());
    Configuration out = c;
    const int d = ((shift % m) + m) % m;
    out.robot_pos = (c.robot_pos + d) % m;
    for (int x = 0; x < m; ++x) {
        out.env[(x + d) % m] = c.env[x];
    }
    return out;
}

Configuration translate_onboard(const Configuration& c, int shift) {
    const int n = static_cast<int>(c.tape.size());
    Configuration out = c;
    const int d = ((shift % n) + n) % n;
    out.head_pos = (c.head_pos + d) % n;
    for (int x = 0; x < n; ++x) {
        out.tape[(x + d) % n] = c.tape[x];
    }
    return out;
}

} // namespace qrsim
