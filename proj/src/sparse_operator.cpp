#include "qrsim/sparse_operator.hpp"

#include <cmath>
#include <stdexcept>

namespace qrsim {

void SparseOperator::add(int row, int col, cplx value) {
    if (row < 0 || row >= dim() || col < 0 || col >= dim()) {
        throw std::out_of_range("sparse entry (" + std::to_string(row) + ", " +
                                std::to_string(col) + ") outside basis of size " +
                                std::to_string(dim()));
    }
    auto key = std::make_pair(row, col);
    auto it = entries_.find(key);
    cplx total = value + (it == entries_.end() ? cplx(0.0) : it->second);
    if (std::abs(total) < kAmplitudeEpsilon) {
        if (it != entries_.end()) {
            entries_.erase(it);
        }
        return;
    }
    entries_[key] = total;
}

cplx SparseOperator::at(int row, int col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? cplx(0.0) : it->second;
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out(basis_);
    for (const auto& [rc, v] : entries_) {
        out.entries_.emplace(std::make_pair(rc.second, rc.first), std::conj(v));
    }
    return out;
}

std::vector<cplx> SparseOperator::apply(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != dim()) {
        throw std::invalid_argument("vector length does not match operator dimension");
    }
    std::vector<cplx> y(x.size(), cplx(0.0));
    for (const auto& [rc, v] : entries_) {
        y[static_cast<std::size_t>(rc.first)] += v * x[static_cast<std::size_t>(rc.second)];
    }
    return y;
}

std::vector<cplx> SparseOperator::apply_adjoint(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != dim()) {
        throw std::invalid_argument("vector length does not match operator dimension");
    }
    std::vector<cplx> y(x.size(), cplx(0.0));
    for (const auto& [rc, v] : entries_) {
        y[static_cast<std::size_t>(rc.second)] += std::conj(v) * x[static_cast<std::size_t>(rc.first)];
    }
    return y;
}

double SparseOperator::one_norm() const {
    std::map<int, double> col_sums;
    for (const auto& [rc, v] : entries_) {
        col_sums[rc.second] += std::abs(v);
    }
    double best = 0.0;
    for (const auto& [col, sum] : col_sums) {
        best = std::max(best, sum);
    }
    return best;
}

SparseOperator SparseOperator::identity(BasisPtr basis) {
    SparseOperator out(std::move(basis));
    for (int i = 0; i < out.dim(); ++i) {
        out.entries_.emplace(std::make_pair(i, i), cplx(1.0));
    }
    return out;
}

std::vector<cplx> state_to_vector(const QuantumState& state, const BasisEnumeration& basis) {
    std::vector<cplx> v(static_cast<std::size_t>(basis.size()), cplx(0.0));
    for (const auto& [c, a] : state.amplitudes) {
        int idx = basis.index_of(c);
        if (idx < 0) {
            throw std::invalid_argument("state configuration not in basis: " +
                                        format_configuration(c));
        }
        v[static_cast<std::size_t>(idx)] = a;
    }
    return v;
}

QuantumState vector_to_state(const std::vector<cplx>& v, const BasisEnumeration& basis,
                             const LatticeGeometry& g) {
    if (static_cast<int>(v.size()) != basis.size()) {
        throw std::invalid_argument("vector length does not match basis size");
    }
    QuantumState state{g, {}};
    for (int i = 0; i < basis.size(); ++i) {
        const cplx& a = v[static_cast<std::size_t>(i)];
        if (std::abs(a) >= kAmplitudeEpsilon) {
            state.amplitudes.emplace(basis.at(i), a);
        }
    }
    return state;
}

} // namespace qrsim
