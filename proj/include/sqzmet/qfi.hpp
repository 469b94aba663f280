// qfi.hpp — quantum Fisher information matrix over (phi, mu)
//
// Two independent routes: the generic spectral sum over eigenpairs of rho, and
// closed forms that exploit the X-structure of the state (13/20/24-style
// expressions built from rho11, rho44, rho41 and rho22). The spectral route is
// total and acts as the arbiter; the closed forms are defined for tau > 0.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "sqzmet/physics.hpp"
#include "sqzmet/spectral.hpp"

namespace sqzmet {

struct Qfim2 {
    double f_phi{0.0};
    double f_mu{0.0};
    double f_muphi{0.0};

    [[nodiscard]] double determinant() const { return f_phi * f_mu - f_muphi * f_muphi; }
};

enum class QfiMethod { closed, spectral };

/// Raised when a closed-form expression produces a non-finite value.
class ClosedFormError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kSupportCutoff = 1e-12;

/// F_ab = sum_ij 2 Re(<i|A|j><j|B|i>) / (l_i + l_j), restricted to pairs with
/// l_i + l_j above the support cutoff.
inline double qfim_generic(const SpectralDecomposition& spec, const Operator4& drho_a, const Operator4& drho_b) {
    const Operator4 a = spec.vectors.adjoint() * drho_a * spec.vectors;
    const Operator4 b = spec.vectors.adjoint() * drho_b * spec.vectors;
    double f = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double den = spec.values(i) + spec.values(j);
            if (den <= kSupportCutoff) continue;
            f += 2.0 * (a(i, j) * b(j, i)).real() / den;
        }
    }
    return f;
}

inline double qfim_generic(const DensityMatrix& rho, const Operator4& drho_a, const Operator4& drho_b) {
    return qfim_generic(eig_hermitian_4x4(rho), drho_a, drho_b);
}

struct GTerms {
    double g0{0.0};
    double g1{0.0};
    double g2{0.0};
    double g3{0.0};
};

inline GTerms g_terms(const PhysicalConfig& config) {
    const auto res = derive_reservoir(config);
    const double mubar = 1.0 - config.mu;
    const double beta = config.beta();
    const double ab2 = config.alpha * config.alpha * beta * beta;
    const double cross = 2.0 * res.x * res.y;
    const auto k = channel_coherences(config, res);

    GTerms g;
    g.g0 = mubar * mubar * ab2 * cross * cross;
    g.g1 = std::norm(k.u);
    g.g2 = std::norm(k.c);
    g.g3 = (k.u * std::conj(k.c)).real();
    return g;
}

/// |rho41|^2 rebuilt from the three channel contributions.
inline double coherence_from_g_terms(const PhysicalConfig& config, const GTerms& g) {
    const double mubar = 1.0 - config.mu;
    const double mu = config.mu;
    const double beta = config.beta();
    return config.alpha * config.alpha * beta * beta *
           (mubar * mubar * g.g1 + mu * mu * g.g2 + 2.0 * mubar * mu * g.g3);
}

namespace detail {

// Shared pieces of the X-state closed forms.
struct OuterBlock {
    double rho11;
    double rho44;
    Complex rho41;
    double coh2;     // |rho41|^2
    double sum;      // rho11 + rho44
    double det;      // rho11 rho44 - |rho41|^2
    double rho22;
    double rho22_u;  // uncorrelated-branch rho22
    Complex d_phi;   // d_phi rho41 / rho41
    Complex d_mu;    // (rho41^c - rho41^u) / rho41
    bool coherent;   // |rho41| above cutoff
};

inline constexpr double kCoherenceCutoff = 1e-12;
inline constexpr double kRemovableCutoff = 1e-14;

inline OuterBlock outer_block(const PhysicalConfig& config) {
    const auto res = derive_reservoir(config);
    const auto b = analytic_blocks(config, res);
    const Operator4 rho = assemble_x_state(b, config.mu);
    const auto partials = analytic_partials(config);

    OuterBlock o{};
    o.rho11 = rho(0, 0).real();
    o.rho44 = rho(3, 3).real();
    o.rho41 = rho(3, 0);
    o.coh2 = std::norm(o.rho41);
    o.sum = o.rho11 + o.rho44;
    o.det = o.rho11 * o.rho44 - o.coh2;
    o.rho22 = rho(1, 1).real();
    o.rho22_u = b.u.rho22;
    o.coherent = std::abs(o.rho41) >= kCoherenceCutoff;
    if (o.coherent) {
        o.d_phi = partials.d_phi(3, 0) / o.rho41;
        o.d_mu = (std::conj(b.c.rho14) - std::conj(b.u.rho14)) / o.rho41;
    }
    return o;
}

inline double checked(double value, const char* what) {
    if (!std::isfinite(value)) throw ClosedFormError(std::string(what) + ": non-finite intermediate value");
    return value;
}

}  // namespace detail

/// Contribution of the single-excitation block to F_phi.
inline double k_term(const PhysicalConfig& config) {
    const auto b = analytic_blocks(config);
    const double rho22 = (1.0 - config.mu) * b.u.rho22;
    const double g0 = g_terms(config).g0;
    const double c2 = std::cos(2.0 * config.phi_sq - 2.0 * config.phi);
    const double num = 2.0 * rho22 * g0 * (1.0 - c2);
    const double den = 2.0 * rho22 * rho22 - g0 * (1.0 + c2);
    if (std::abs(den) < detail::kRemovableCutoff && std::abs(num) < detail::kRemovableCutoff) return 0.0;
    return detail::checked(num / den, "k_term");
}

inline double closed_form_f_phi(const PhysicalConfig& config) {
    config.validate();
    if (!(config.tau > 0.0)) throw std::domain_error("closed_form_f_phi: requires tau > 0");
    const auto o = detail::outer_block(config);
    double coherent_part = 0.0;
    if (o.coherent) {
        const double num = 4.0 * o.coh2 * (o.det * std::norm(o.d_phi) + o.coh2 * o.d_phi.real() * o.d_phi.real());
        coherent_part = num / (o.sum * o.det);
    }
    return detail::checked(k_term(config) + coherent_part, "closed_form_f_phi");
}

inline double closed_form_f_mu(const PhysicalConfig& config) {
    config.validate();
    if (config.tau == 0.0) return 0.0;
    // mu = 1 exactly sits on the 1/(1 - mu) pole of the first term; the closed
    // form is taken by continuity from just below.
    const PhysicalConfig eval = config.mu == 1.0 ? config.with_mu(1.0 - 1e-9) : config;
    const auto o = detail::outer_block(eval);
    const double mubar = 1.0 - eval.mu;
    double num = o.sum * o.sum * o.rho22_u * o.rho22_u;
    if (o.coherent) {
        const double re = o.d_mu.real();
        num += 4.0 * o.coh2 * (o.det * std::norm(o.d_mu) + o.coh2 * re * re - o.sum * o.rho22_u * re);
    }
    return detail::checked(2.0 * o.rho22_u / mubar + num / (o.sum * o.det), "closed_form_f_mu");
}

inline double closed_form_f_muphi(const PhysicalConfig& config) {
    config.validate();
    if (config.tau == 0.0) return 0.0;
    const auto o = detail::outer_block(config);
    if (!o.coherent) return 0.0;
    const double re_phi = o.d_phi.real();
    const double num = o.coh2 * (4.0 * o.det * (o.d_phi * std::conj(o.d_mu)).real() +
                                 4.0 * o.coh2 * re_phi * o.d_mu.real() - 2.0 * o.sum * o.rho22_u * re_phi);
    return detail::checked(num / (o.sum * o.det), "closed_form_f_muphi");
}

inline Qfim2 qfim_spectral(const PhysicalConfig& config) {
    const auto rho = analytic_state(config);
    const auto partials = analytic_partials(config);
    const auto spec = eig_hermitian_4x4(rho);
    return Qfim2{qfim_generic(spec, partials.d_phi, partials.d_phi), qfim_generic(spec, partials.d_mu, partials.d_mu),
                 qfim_generic(spec, partials.d_phi, partials.d_mu)};
}

inline Qfim2 qfim_closed(const PhysicalConfig& config) {
    return Qfim2{closed_form_f_phi(config), closed_form_f_mu(config), closed_form_f_muphi(config)};
}

inline Qfim2 qfim(const PhysicalConfig& config, QfiMethod method = QfiMethod::spectral) {
    return method == QfiMethod::spectral ? qfim_spectral(config) : qfim_closed(config);
}

}  // namespace sqzmet
