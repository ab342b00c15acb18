#include "qrsim/validators.hpp"

#include <json.hpp>

#include <cmath>
#include <set>
#include <stdexcept>

namespace qrsim {

namespace {

void check_scan_size(const SparseOperator& op) {
    if (!op.basis()) {
        throw std::invalid_argument("operator has no basis");
    }
    if (op.dim() > kMaxValidatorDim) {
        throw std::invalid_argument("operator dimension " + std::to_string(op.dim()) +
                                    " exceeds the exhaustive-scan limit " +
                                    std::to_string(kMaxValidatorDim));
    }
}

int site_distance(int a, int b, int size, Boundary boundary) {
    int d = std::abs(a - b);
    if (boundary == Boundary::cyclic) {
        d = std::min(d, size - d);
    }
    return d;
}

int bits_diff_outside(const Bits& a, const Bits& b, int allowed_site) {
    for (int x = 0; x < static_cast<int>(a.size()); ++x) {
        if (x != allowed_site && a[static_cast<std::size_t>(x)] != b[static_cast<std::size_t>(x)]) {
            return x;
        }
    }
    return -1;
}

} // namespace

std::string violation_to_json_line(const ViolationReport& v) {
    nlohmann::json j{{"condition", v.condition},
                     {"row", format_configuration(v.row)},
                     {"col", format_configuration(v.col)},
                     {"value", {v.value.real(), v.value.imag()}},
                     {"explanation", v.explanation}};
    return j.dump();
}

std::vector<ViolationReport> check_env_locality(const SparseOperator& op, Boundary env_boundary) {
    check_scan_size(op);
    std::vector<ViolationReport> out;
    const auto& basis = *op.basis();
    for (const auto& [rc, v] : op.entries()) {
        const Configuration& row = basis.at(rc.first);
        const Configuration& col = basis.at(rc.second);
        const int m = static_cast<int>(col.env.size());
        const int hop = site_distance(row.robot_pos, col.robot_pos, m, env_boundary);
        if (hop > 1) {
            out.push_back({"env_locality", row, col, v,
                           "robot hops " + std::to_string(hop) + " sites in one step"});
            continue;
        }
        int bad_site = bits_diff_outside(row.env, col.env, col.robot_pos);
        if (bad_site >= 0) {
            out.push_back({"env_locality", row, col, v,
                           "environment changed at site " + std::to_string(bad_site) +
                               " away from the robot at " + std::to_string(col.robot_pos)});
        }
    }
    return out;
}

std::vector<ViolationReport> check_onboard_locality(const SparseOperator& op) {
    check_scan_size(op);
    std::vector<ViolationReport> out;
    const auto& basis = *op.basis();
    for (const auto& [rc, v] : op.entries()) {
        const Configuration& row = basis.at(rc.first);
        const Configuration& col = basis.at(rc.second);
        const int n = static_cast<int>(col.tape.size());
        if (site_distance(row.head_pos, col.head_pos, n, Boundary::cyclic) > 1) {
            out.push_back({"onboard_locality", row, col, v,
                           "on-board head hops more than one site in one step"});
            continue;
        }
        int bad_site = bits_diff_outside(row.tape, col.tape, col.head_pos);
        if (bad_site >= 0) {
            out.push_back({"onboard_locality", row, col, v,
                           "tape changed at site " + std::to_string(bad_site) +
                               " away from the head at " + std::to_string(col.head_pos)});
        }
    }
    return out;
}

std::vector<ViolationReport> check_homogeneity(const SparseOperator& op, HomogeneityAxis axis) {
    check_scan_size(op);
    const auto& basis = *op.basis();
    const bool env_axis = axis == HomogeneityAxis::env_j;
    const char* condition = env_axis ? "env_homogeneity" : "onboard_homogeneity";
    auto translate = [&](const Configuration& c, int d) {
        return env_axis ? translate_env(c, d) : translate_onboard(c, d);
    };
    int size = 0;
    if (basis.size() > 0) {
        const Configuration& c0 = basis.at(0);
        size = env_axis ? static_cast<int>(c0.env.size()) : static_cast<int>(c0.tape.size());
    }
    // Precondition: the basis itself must map onto itself under translation,
    // otherwise conjugation by the translation permutation is undefined.
    for (int i = 0; i < basis.size(); ++i) {
        Configuration shifted = translate(basis.at(i), 1);
        if (!basis.contains(shifted)) {
            throw std::invalid_argument(std::string("basis is not closed under the ") +
                                        (env_axis ? "environment" : "on-board") +
                                        " translation; seed the closure with the translation "
                                        "orbit of the initial support (escaping configuration: " +
                                        format_configuration(basis.at(i)) + ")");
        }
    }
    std::vector<ViolationReport> out;
    for (const auto& [rc, v] : op.entries()) {
        const Configuration& row = basis.at(rc.first);
        const Configuration& col = basis.at(rc.second);
        for (int d = 1; d < size; ++d) {
            Configuration row_d = translate(row, d);
            Configuration col_d = translate(col, d);
            cplx shifted = op.at(basis.index_of(row_d), basis.index_of(col_d));
            if (shifted != v) {
                out.push_back({condition, row_d, col_d, shifted,
                               "element differs from its translate by " + std::to_string(d) +
                                   " (expected " + std::to_string(v.real()) + "+" +
                                   std::to_string(v.imag()) + "i)"});
            }
        }
    }
    return out;
}

std::vector<ViolationReport> check_gating_and_diagonality(const SparseOperator& action_part,
                                                          const SparseOperator& computation_part) {
    check_scan_size(action_part);
    check_scan_size(computation_part);
    std::vector<ViolationReport> out;
    {
        const auto& basis = *computation_part.basis();
        for (const auto& [rc, v] : computation_part.entries()) {
            const Configuration& row = basis.at(rc.first);
            const Configuration& col = basis.at(rc.second);
            if (col.control != 0) {
                out.push_back({"computation_gating", row, col, v,
                               "computation part acts on a control-1 column"});
            }
            if (row.env != col.env) {
                out.push_back({"computation_env_diagonality", row, col, v,
                               "computation part changes the environment string"});
            }
        }
    }
    {
        const auto& basis = *action_part.basis();
        for (const auto& [rc, v] : action_part.entries()) {
            const Configuration& row = basis.at(rc.first);
            const Configuration& col = basis.at(rc.second);
            if (col.control != 1) {
                out.push_back({"action_gating", row, col, v,
                               "action part acts on a control-0 column"});
            }
            if (row.memory != col.memory || row.output != col.output) {
                out.push_back({"action_register_diagonality", row, col, v,
                               "action part changes a register; basis copying is only safe "
                               "when registers ride along unchanged"});
            }
            if (row.head_state != col.head_state || row.head_pos != col.head_pos ||
                row.tape != col.tape) {
                out.push_back({"action_onboard_invariance", row, col, v,
                               "action part touches the on-board machine"});
            }
        }
    }
    return out;
}

double check_unitarity(const SparseOperator& op) {
    check_scan_size(op);
    // Group entries by row, then accumulate (U†U)_{ab} = sum_r conj(U_ra) U_rb.
    std::map<int, std::vector<std::pair<int, cplx>>> by_row;
    for (const auto& [rc, v] : op.entries()) {
        by_row[rc.first].emplace_back(rc.second, v);
    }
    std::map<std::pair<int, int>, cplx> gram;
    for (const auto& [row, cols] : by_row) {
        for (const auto& [a, va] : cols) {
            for (const auto& [b, vb] : cols) {
                gram[{a, b}] += std::conj(va) * vb;
            }
        }
    }
    double max_dev = 0.0;
    for (const auto& [ab, v] : gram) {
        const cplx expected = ab.first == ab.second ? cplx(1.0) : cplx(0.0);
        max_dev = std::max(max_dev, std::abs(v - expected));
    }
    // Diagonal entries absent from the accumulation are empty columns.
    for (int i = 0; i < op.dim(); ++i) {
        if (!gram.contains({i, i})) {
            max_dev = std::max(max_dev, 1.0);
            break;
        }
    }
    return max_dev;
}

DistinctPathResult check_distinct_path(const SparseOperator& op, const Configuration& start,
                                       int n_steps, double tol) {
    check_scan_size(op);
    const auto& basis = *op.basis();
    int current = basis.index_of(start);
    if (current < 0) {
        throw std::invalid_argument("start configuration is not in the operator basis");
    }
    std::vector<cplx> vec(static_cast<std::size_t>(op.dim()), cplx(0.0));
    vec[static_cast<std::size_t>(current)] = 1.0;
    std::set<int> visited{current};
    DistinctPathResult result{true, 0, false};
    for (int step = 0; step < n_steps; ++step) {
        vec = op.apply(vec);
        int best = -1;
        double best_mag = 0.0;
        bool contaminated = false;
        for (int i = 0; i < op.dim(); ++i) {
            double mag = std::abs(vec[static_cast<std::size_t>(i)]);
            if (mag <= tol) {
                continue;
            }
            if (best >= 0) {
                contaminated = true;
                break;
            }
            best = i;
            best_mag = mag;
        }
        (void)best_mag;
        if (contaminated) {
            result.is_distinct_path = false;
            return result;
        }
        if (best < 0) {
            return result; // orbit died (zero operator or escaped amplitude)
        }
        if (!visited.insert(best).second) {
            result.closed = basis.at(best) == start;
            result.is_distinct_path = result.closed;
            if (result.closed) {
                result.path_length += 1;
            }
            return result;
        }
        result.path_length += 1;
    }
    return result;
}

} // namespace qrsim
