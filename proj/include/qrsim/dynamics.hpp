#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qrsim/sparse_operator.hpp"

namespace qrsim {

// H = K (2 - T - T†), self-adjoint by construction (hbar = 1 throughout).
struct Hamiltonian {
    double coupling = 1.0; // K
    SparseOperator matrix;
};

Hamiltonian build_hamiltonian(const SparseOperator& step, double coupling);

struct EvolutionMethod {
    enum class Kind { dense_eigen, krylov, scaled_taylor };

    Kind kind = Kind::dense_eigen;
    int krylov_dim = 30;       // Lanczos subspace size
    int taylor_max_terms = 64; // series terms per scaled substep

    void validate() const;
    std::string name() const;

    static EvolutionMethod dense_eigen() { return {Kind::dense_eigen, 30, 64}; }
    static EvolutionMethod krylov(int dim = 30) { return {Kind::krylov, dim, 64}; }
    static EvolutionMethod scaled_taylor(int max_terms = 64) {
        return {Kind::scaled_taylor, 30, max_terms};
    }
    // dense up to dimension 4096, Krylov beyond
    static EvolutionMethod auto_select(int dim);
    static EvolutionMethod from_string(const std::string& name);
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<QuantumState> states;
    std::string method;
    std::vector<double> norm_drift; // | ||psi(t)|| - 1 | per output time
};

// Reusable propagator: the dense method factorizes H once and serves any t.
class Propagator {
public:
    Propagator(const Hamiltonian& h, EvolutionMethod method, double tol = 1e-10);
    ~Propagator();
    Propagator(Propagator&&) noexcept;
    Propagator& operator=(Propagator&&) noexcept;

    QuantumState at(const QuantumState& initial, double t) const;
    std::vector<cplx> at(const std::vector<cplx>& initial, double t) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// exp(-i H t) applied to a normalized state.
QuantumState evolve(const Hamiltonian& h, const QuantumState& state, double t,
                    EvolutionMethod method = EvolutionMethod::dense_eigen(), double tol = 1e-10);

// One factorization, many output times. `times` must be ascending and >= 0.
EvolutionResult evolve_series(const Hamiltonian& h, const QuantumState& state,
                              const std::vector<double>& times,
                              EvolutionMethod method = EvolutionMethod::dense_eigen(),
                              double tol = 1e-10);

// [psi, T psi, ..., T^n psi] without normalization.
std::vector<QuantumState> iterate_step(const SparseOperator& step, const QuantumState& state, int n);

// <psi|H|psi>; throws if the imaginary residue exceeds 1e-12.
double expectation(const Hamiltonian& h, const QuantumState& state);

} // namespace qrsim
