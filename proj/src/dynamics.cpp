#include "qrsim/dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qrsim {

Hamiltonian build_hamiltonian(const SparseOperator& step, double coupling) {
    if (!step.basis()) {
        throw std::invalid_argument("step operator has no basis");
    }
    if (coupling <= 0.0) {
        throw std::invalid_argument("coupling constant must be positive");
    }
    SparseOperator h(step.basis());
    for (int i = 0; i < step.dim(); ++i) {
        h.add(i, i, cplx(2.0 * coupling, 0.0));
    }
    // Element-wise K(2 delta - t - conj(t^T)) keeps H = H† exact.
    for (const auto& [rc, v] : step.entries()) {
        h.add(rc.first, rc.second, -coupling * v);
        h.add(rc.second, rc.first, -coupling * std::conj(v));
    }
    return Hamiltonian{coupling, std::move(h)};
}

void EvolutionMethod::validate() const {
    if (krylov_dim < 1) {
        throw std::invalid_argument("krylov subspace size must be positive");
    }
    if (taylor_max_terms < 1) {
        throw std::invalid_argument("taylor term bound must be positive");
    }
}

std::string EvolutionMethod::name() const {
    switch (kind) {
        case Kind::dense_eigen: return "dense_eigen";
        case Kind::krylov: return "krylov";
        case Kind::scaled_taylor: return "scaled_taylor";
    }
    return "?";
}

EvolutionMethod EvolutionMethod::auto_select(int dim) {
    return dim <= 4096 ? dense_eigen() : krylov(30);
}

EvolutionMethod EvolutionMethod::from_string(const std::string& name) {
    if (name == "dense_eigen") return dense_eigen();
    if (name == "krylov") return krylov();
    if (name == "scaled_taylor") return scaled_taylor();
    throw std::invalid_argument("unknown evolution method '" + name + "'");
}

namespace {

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = v[i];
    }
    return out;
}

std::vector<cplx> from_eigen(const Eigen::VectorXcd& v) {
    std::vector<cplx> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[static_cast<std::size_t>(i)] = v[i];
    }
    return out;
}

} // namespace

struct Propagator::Impl {
    Hamiltonian h; // owned: the propagator must outlive any caller's copy
    EvolutionMethod method;
    double tol;
    // dense_eigen factorization
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    bool factorized = false;
    double h_one_norm = 0.0;

    std::vector<cplx> dense_at(const std::vector<cplx>& x, double t) const {
        Eigen::VectorXcd coeffs = eigenvectors.adjoint() * to_eigen(x);
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            coeffs[i] *= std::exp(cplx(0.0, -eigenvalues[i] * t));
        }
        return from_eigen(eigenvectors * coeffs);
    }

    std::vector<cplx> taylor_at(std::vector<cplx> x, double t) const {
        const double scale = h_one_norm * std::abs(t);
        const int substeps = std::max(1, static_cast<int>(std::ceil(scale)));
        const double dt = t / substeps;
        for (int s = 0; s < substeps; ++s) {
            std::vector<cplx> term = x;
            std::vector<cplx> acc = x;
            bool converged = false;
            for (int k = 1; k <= method.taylor_max_terms; ++k) {
                term = h.matrix.apply(term);
                const cplx factor = cplx(0.0, -dt) / static_cast<double>(k);
                double term_norm = 0.0;
                for (std::size_t i = 0; i < term.size(); ++i) {
                    term[i] *= factor;
                    acc[i] += term[i];
                    term_norm += std::norm(term[i]);
                }
                if (std::sqrt(term_norm) < 1e-18) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                throw std::runtime_error("scaled_taylor did not converge within " +
                                         std::to_string(method.taylor_max_terms) +
                                         " terms; raise the term bound or use dense_eigen");
            }
            x = std::move(acc);
        }
        return x;
    }

    // One Lanczos substep of size dt; returns the error estimate.
    double krylov_substep(std::vector<cplx>& x, double dt) const {
        const int n = static_cast<int>(x.size());
        const int m = std::min(method.krylov_dim, n);
        Eigen::VectorXcd v0 = to_eigen(x);
        const double beta0 = v0.norm();
        if (beta0 < kAmplitudeEpsilon) {
            return 0.0;
        }
        Eigen::MatrixXcd basis(n, m);
        Eigen::VectorXd alpha(m), beta(m); // beta[i] couples vector i to i+1
        basis.col(0) = v0 / beta0;
        int built = m;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXcd w = to_eigen(h.matrix.apply(from_eigen(basis.col(j))));
            alpha[j] = std::real(basis.col(j).dot(w));
            w -= alpha[j] * basis.col(j);
            if (j > 0) {
                w -= beta[j - 1] * basis.col(j - 1);
            }
            // Full reorthogonalization; cheap at these dimensions.
            for (int i = 0; i <= j; ++i) {
                w -= (basis.col(i).dot(w)) * basis.col(i);
            }
            beta[j] = w.norm();
            if (j + 1 < m) {
                if (beta[j] < 1e-14) {
                    built = j + 1;
                    breakdown = true;
                    break;
                }
                basis.col(j + 1) = w / beta[j];
            }
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
        for (int j = 0; j < built; ++j) {
            tri(j, j) = alpha[j];
            if (j + 1 < built) {
                tri(j + 1, j) = tri(j, j + 1) = beta[j];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
        Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(built);
        e1[0] = 1.0;
        Eigen::VectorXcd phases(built);
        for (int i = 0; i < built; ++i) {
            phases[i] = std::exp(cplx(0.0, -small.eigenvalues()[i] * dt));
        }
        Eigen::VectorXcd y = small.eigenvectors().cast<cplx>() *
                             phases.cwiseProduct(small.eigenvectors().cast<cplx>().adjoint() * e1);
        double err = breakdown ? 0.0 : beta[built - 1] * std::abs(y[built - 1]) * std::abs(dt);
        if (err <= tol) {
            Eigen::VectorXcd out = basis.leftCols(built) * (beta0 * y);
            x = from_eigen(out);
        }
        return err;
    }

    std::vector<cplx> krylov_at(std::vector<cplx> x, double t) const {
        double remaining = t;
        double dt = t;
        int substeps = 0;
        const int max_substeps = 20000;
        const double sign = t < 0 ? -1.0 : 1.0;
        while (std::abs(remaining) > 1e-15 * std::max(1.0, std::abs(t))) {
            dt = sign * std::min(std::abs(dt), std::abs(remaining));
            double err = krylov_substep(x, dt);
            if (err > tol) {
                dt /= 2.0;
                if (++substeps > max_substeps || std::abs(dt) < 1e-12 * std::abs(t)) {
                    throw std::runtime_error(
                        "krylov evolution did not converge within the substep budget; use "
                        "dense_eigen or a smaller t");
                }
                continue;
            }
            remaining -= dt;
            if (++substeps > max_substeps) {
                throw std::runtime_error(
                    "krylov evolution did not converge within the substep budget; use "
                    "dense_eigen or a smaller t");
            }
        }
        return x;
    }
};

Propagator::Propagator(const Hamiltonian& h, EvolutionMethod method, double tol)
    : impl_(std::make_unique<Impl>()) {
    method.validate();
    if (tol <= 0.0) {
        throw std::invalid_argument("tolerance must be positive");
    }
    impl_->h = h;
    impl_->method = method;
    impl_->tol = tol;
    if (method.kind == EvolutionMethod::Kind::dense_eigen) {
        const int n = h.matrix.dim();
        Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
        for (const auto& [rc, v] : h.matrix.entries()) {
            dense(rc.first, rc.second) = v;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("dense eigendecomposition failed");
        }
        impl_->eigenvalues = solver.eigenvalues();
        impl_->eigenvectors = solver.eigenvectors();
        impl_->factorized = true;
    } else if (method.kind == EvolutionMethod::Kind::scaled_taylor) {
        impl_->h_one_norm = h.matrix.one_norm();
    }
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

std::vector<cplx> Propagator::at(const std::vector<cplx>& initial, double t) const {
    if (t == 0.0) {
        return initial;
    }
    switch (impl_->method.kind) {
        case EvolutionMethod::Kind::dense_eigen: return impl_->dense_at(initial, t);
        case EvolutionMethod::Kind::scaled_taylor: return impl_->taylor_at(initial, t);
        case EvolutionMethod::Kind::krylov: return impl_->krylov_at(initial, t);
    }
    throw std::logic_error("unreachable");
}

QuantumState Propagator::at(const QuantumState& initial, double t) const {
    const auto& basis = *impl_->h.matrix.basis();
    auto v = at(state_to_vector(initial, basis), t);
    return vector_to_state(v, basis, initial.geometry);
}

QuantumState evolve(const Hamiltonian& h, const QuantumState& state, double t,
                    EvolutionMethod method, double tol) {
    const double n = norm(state);
    if (std::abs(n - 1.0) > 1e-8) {
        throw std::invalid_argument("evolve requires a normalized state");
    }
    Propagator prop(h, method, tol);
    return prop.at(state, t);
}

EvolutionResult evolve_series(const Hamiltonian& h, const QuantumState& state,
                              const std::vector<double>& times, EvolutionMethod method,
                              double tol) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
            throw std::invalid_argument("times must be ascending and non-negative");
        }
    }
    const double n = norm(state);
    if (std::abs(n - 1.0) > 1e-8) {
        throw std::invalid_argument("evolve_series requires a normalized state");
    }
    Propagator prop(h, method, tol);
    EvolutionResult result;
    result.times = times;
    result.method = method.name();
    for (double t : times) {
        QuantumState out = prop.at(state, t);
        result.norm_drift.push_back(std::abs(norm(out) - 1.0));
        result.states.push_back(std::move(out));
    }
    return result;
}

std::vector<QuantumState> iterate_step(const SparseOperator& step, const QuantumState& state,
                                       int n) {
    if (n < 0) {
        throw std::invalid_argument("iteration count must be >= 0");
    }
    const auto& basis = *step.basis();
    std::vector<QuantumState> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(state);
    std::vector<cplx> v = state_to_vector(state, basis);
    for (int i = 0; i < n; ++i) {
        v = step.apply(v);
        out.push_back(vector_to_state(v, basis, state.geometry));
    }
    return out;
}

double expectation(const Hamiltonian& h, const QuantumState& state) {
    const double n = norm(state);
    if (std::abs(n - 1.0) > 1e-8) {
        throw std::invalid_argument("expectation requires a normalized state");
    }
    const auto& basis = *h.matrix.basis();
    auto v = state_to_vector(state, basis);
    auto hv = h.matrix.apply(v);
    cplx total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        total += std::conj(v[i]) * hv[i];
    }
    if (std::abs(total.imag()) > 1e-12) {
        throw std::runtime_error("expectation value has imaginary residue " +
                                 std::to_string(total.imag()));
    }
    return total.real();
}

} // namespace qrsim
