// spectral.hpp — deterministic eigendecomposition of 4x4 Hermitian matrices

#pragma once

#include <algorithm>
#include <array>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "sqzmet/physics.hpp"

namespace sqzmet {

struct SpectralDecomposition {
    Eigen::Vector4d values;  // descending
    Operator4 vectors;       // column k pairs with values(k)

    [[nodiscard]] Operator4 reconstruct() const {
        return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
    }
};

namespace detail {

// Rotates v so that its first component with modulus above the cutoff is real
// and positive.
inline void fix_phase(Eigen::Ref<Eigen::Matrix<Complex, 4, 1>> v) {
    for (int k = 0; k < 4; ++k) {
        const double mag = std::abs(v(k));
        if (mag > 1e-12) {
            v *= std::conj(v(k)) / mag;
            v(k) = mag;
            return;
        }
    }
}

inline bool lex_less(const Eigen::Matrix<Complex, 4, 1>& a, const Eigen::Matrix<Complex, 4, 1>& b) {
    for (int k = 0; k < 4; ++k) {
        if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
        if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
    }
    return false;
}

}  // namespace detail

/// Orthonormal eigendecomposition. Ordering is by descending eigenvalue; exact
/// ties fall back to lexicographic order of the phase-fixed eigenvectors.
inline SpectralDecomposition eig_hermitian_4x4(const Operator4& m) {
    Eigen::SelfAdjointEigenSolver<Operator4> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian_4x4: solver did not converge");

    Operator4 vecs = solver.eigenvectors();
    for (int k = 0; k < 4; ++k) detail::fix_phase(vecs.col(k));

    std::array<int, 4> order{};
    std::iota(order.begin(), order.end(), 0);
    const auto& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (vals(a) != vals(b)) return vals(a) > vals(b);
        return detail::lex_less(vecs.col(a), vecs.col(b));
    });

    SpectralDecomposition out;
    for (int k = 0; k < 4; ++k) {
        out.values(k) = vals(order[k]);
        out.vectors.col(k) = vecs.col(order[k]);
    }
    return out;
}

inline SpectralDecomposition eig_hermitian_4x4(const DensityMatrix& rho) { return eig_hermitian_4x4(rho.matrix()); }

/// Numbers needed to decide whether a matrix is a valid two-qubit state.
struct StateDiagnostics {
    double hermiticity_error{0.0};  // max |rho - rho^dagger|
    double trace_error{0.0};        // |Tr rho - 1|
    double min_eigenvalue{0.0};
    bool x_structure{false};        // zero outer block and rho22 == rho33, exactly
};

inline StateDiagnostics diagnose(const Operator4& m) {
    StateDiagnostics diag;
    diag.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    diag.trace_error = std::abs(m.trace() - Complex{1.0, 0.0});
    const Operator4 herm = 0.5 * (m + m.adjoint());
    diag.min_eigenvalue = eig_hermitian_4x4(herm).values(3);
    const Complex zero{0.0, 0.0};
    diag.x_structure = m(0, 1) == zero && m(0, 2) == zero && m(1, 0) == zero && m(2, 0) == zero &&
                       m(1, 3) == zero && m(2, 3) == zero && m(3, 1) == zero && m(3, 2) == zero &&
                       m(1, 1) == m(2, 2);
    return diag;
}

inline StateDiagnostics diagnose(const DensityMatrix& rho) { return diagnose(rho.matrix()); }

/// Default tolerances for a physically valid state.
inline bool is_valid_state(const StateDiagnostics& d, double herm_tol = 1e-12, double trace_tol = 1e-12,
                           double eig_tol = 1e-10) {
    return d.hermiticity_error <= herm_tol && d.trace_error <= trace_tol && d.min_eigenvalue >= -eig_tol;
}

}  // namespace sqzmet
