#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qrsim/basis.hpp"
#include "qrsim/state.hpp"

namespace qrsim {

// Sparse matrix over an enumerated configuration basis. Entries are keyed
// (row, col); explicit zeros are dropped on insertion.
class SparseOperator {
public:
    using EntryMap = std::map<std::pair<int, int>, cplx>;

    SparseOperator() = default;
    explicit SparseOperator(BasisPtr basis) : basis_(std::move(basis)) {}

    int dim() const { return basis_ ? basis_->size() : 0; }
    const BasisPtr& basis() const { return basis_; }
    const EntryMap& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    void add(int row, int col, cplx value);       // accumulates, prunes tiny results
    cplx at(int row, int col) const;              // 0 when absent

    SparseOperator adjoint() const;

    std::vector<cplx> apply(const std::vector<cplx>& x) const;          // y = A x
    std::vector<cplx> apply_adjoint(const std::vector<cplx>& x) const;  // y = A† x

    // Largest column 1-norm, used to scale series expansions.
    double one_norm() const;

    static SparseOperator identity(BasisPtr basis);

private:
    BasisPtr basis_;
    EntryMap entries_;
};

// Conversions between sparse states and dense coordinate vectors.
std::vector<cplx> state_to_vector(const QuantumState& state, const BasisEnumeration& basis);
QuantumState vector_to_state(const std::vector<cplx>& v, const BasisEnumeration& basis,
                             const LatticeGeometry& g);

} // namespace qrsim
