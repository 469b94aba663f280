// lindblad.hpp — fixed-step RK4 integration of the squeezed-reservoir master equations
//
// The uncorrelated generator acts with sigma_+/- on each qubit separately, the
// correlated one with the joint operators sigma_+/- (x) sigma_+/-. Both have the
// same squeezed-thermal dissipator shape, so a single routine parameterised by
// the raising operator covers them.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "sqzmet/physics.hpp"

namespace sqzmet {

enum class IntegratorMethod { rk4 };

struct IntegratorSettings {
    double step{1e-4};
    IntegratorMethod method{IntegratorMethod::rk4};

    void validate() const {
        if (!std::isfinite(step) || step <= 0.0 || step > 1e-2)
            throw std::invalid_argument("IntegratorSettings: step must lie in (0, 1e-2]");
    }
};

/// An operator sum_k |image[k]><k| with unit amplitudes; image[k] < 0 means the
/// basis state k is annihilated. All qubit ladder operators used here have this
/// form in the computational basis.
struct LadderOperator {
    std::array<int, 4> image{-1, -1, -1, -1};

    [[nodiscard]] LadderOperator adjoint() const {
        LadderOperator out;
        for (int k = 0; k < 4; ++k) {
            if (image[k] >= 0) out.image[image[k]] = k;
        }
        return out;
    }

    [[nodiscard]] Operator4 dense() const {
        Operator4 m = Operator4::Zero();
        for (int k = 0; k < 4; ++k) {
            if (image[k] >= 0) m(image[k], k) = 1.0;
        }
        return m;
    }
};

namespace ops {

// Basis index = 2 * q1 + q2, with |1> the excited level.
inline constexpr LadderOperator raise_first{{2, 3, -1, -1}};
inline constexpr LadderOperator raise_second{{1, -1, 3, -1}};
inline constexpr LadderOperator raise_joint{{3, -1, -1, -1}};

}  // namespace ops

namespace detail {

// out += w * A rho B^dagger for ladder operators A, B.
inline void add_sandwich(Operator4& out, const LadderOperator& a, const Operator4& rho, const LadderOperator& b,
                         Complex w) {
    for (int k = 0; k < 4; ++k) {
        if (a.image[k] < 0) continue;
        for (int l = 0; l < 4; ++l) {
            if (b.image[l] < 0) continue;
            out(a.image[k], b.image[l]) += w * rho(k, l);
        }
    }
}

// out += w * {A^dagger A, rho}; A^dagger A projects onto the domain of A.
inline void add_anticommutator(Operator4& out, const LadderOperator& a, const Operator4& rho, double w) {
    for (int k = 0; k < 4; ++k) {
        const double pk = a.image[k] >= 0 ? 1.0 : 0.0;
        for (int l = 0; l < 4; ++l) {
            const double pl = a.image[l] >= 0 ? 1.0 : 0.0;
            if (pk + pl != 0.0) out(k, l) += w * (pk + pl) * rho(k, l);
        }
    }
}

}  // namespace detail

/// Squeezed-thermal dissipator for one channel with raising operator `up`:
///   -N/2 [{down up, rho} - 2 up rho down] - (N+1)/2 [{up down, rho} - 2 down rho up]
///   - chi e^{i Phi} up rho up - chi e^{-i Phi} down rho down
/// Rates are in units of gamma0.
inline void add_squeezed_dissipator(Operator4& out, const Operator4& rho, const LadderOperator& up, double big_n,
                                    double chi, double phi_sq) {
    const LadderOperator down = up.adjoint();
    // heating
    detail::add_anticommutator(out, up, rho, -0.5 * big_n);
    detail::add_sandwich(out, up, rho, up, big_n);
    // cooling
    detail::add_anticommutator(out, down, rho, -0.5 * (big_n + 1.0));
    detail::add_sandwich(out, down, rho, down, big_n + 1.0);
    // anomalous squeezing terms: up rho up = up rho (down)^dagger
    detail::add_sandwich(out, up, rho, down, -chi * std::polar(1.0, phi_sq));
    detail::add_sandwich(out, down, rho, up, -chi * std::polar(1.0, -phi_sq));
}

inline Operator4 rhs_uncorrelated(const Operator4& rho, const ReservoirDerived& res, double phi_sq) {
    Operator4 out = Operator4::Zero();
    add_squeezed_dissipator(out, rho, ops::raise_first, res.big_n, res.chi, phi_sq);
    add_squeezed_dissipator(out, rho, ops::raise_second, res.big_n, res.chi, phi_sq);
    return out;
}

inline Operator4 rhs_correlated(const Operator4& rho, const ReservoirDerived& res, double phi_sq) {
    Operator4 out = Operator4::Zero();
    add_squeezed_dissipator(out, rho, ops::raise_joint, res.big_n, res.chi, phi_sq);
    return out;
}

template <class Rhs>
Operator4 rk4_step(const Operator4& rho, double h, const Rhs& f) {
    const Operator4 k1 = f(rho);
    const Operator4 k2 = f(rho + (0.5 * h) * k1);
    const Operator4 k3 = f(rho + (0.5 * h) * k2);
    const Operator4 k4 = f(rho + h * k3);
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Propagates the uncorrelated and correlated branches side by side. Advancing
/// uses full steps of the configured size and one shortened final step.
class BranchPropagator {
public:
    BranchPropagator(const PhysicalConfig& config, const IntegratorSettings& settings)
        : res_(derive_reservoir(config)), phi_sq_(config.phi_sq), step_(settings.step) {
        config.validate();
        settings.validate();
        uncorrelated_ = correlated_ = initial_state(config.alpha, config.phi).matrix();
    }

    void advance_to(double tau) {
        if (!std::isfinite(tau) || tau < tau_) throw std::invalid_argument("BranchPropagator: bad target time");
        const double span = tau - tau_;
        auto full = static_cast<long long>(std::floor(span / step_));
        double rest = span - static_cast<double>(full) * step_;
        if (rest < 1e-12 * step_) rest = 0.0;
        const auto fu = [this](const Operator4& m) { return rhs_uncorrelated(m, res_, phi_sq_); };
        const auto fc = [this](const Operator4& m) { return rhs_correlated(m, res_, phi_sq_); };
        for (long long k = 0; k < full; ++k) {
            uncorrelated_ = rk4_step(uncorrelated_, step_, fu);
            correlated_ = rk4_step(correlated_, step_, fc);
        }
        if (rest > 0.0) {
            uncorrelated_ = rk4_step(uncorrelated_, rest, fu);
            correlated_ = rk4_step(correlated_, rest, fc);
        }
        tau_ = tau;
    }

    [[nodiscard]] double tau() const { return tau_; }
    [[nodiscard]] const Operator4& uncorrelated() const { return uncorrelated_; }
    [[nodiscard]] const Operator4& correlated() const { return correlated_; }

    [[nodiscard]] DensityMatrix mixed(double mu) const {
        // skip the convex combination where it can only add rounding
        if (mu == 0.0 || uncorrelated_ == correlated_) return DensityMatrix(uncorrelated_);
        if (mu == 1.0) return DensityMatrix(correlated_);
        return DensityMatrix((1.0 - mu) * uncorrelated_ + mu * correlated_);
    }

private:
    ReservoirDerived res_;
    double phi_sq_;
    double step_;
    double tau_{0.0};
    Operator4 uncorrelated_;
    Operator4 correlated_;
};

/// Numerical state at config.tau, mixing the two branches only at the end.
inline DensityMatrix integrate(const PhysicalConfig& config, const IntegratorSettings& settings = {}) {
    BranchPropagator prop(config, settings);
    prop.advance_to(config.tau);
    auto out = prop.mixed(config.mu);
    if (!out.matrix().allFinite()) throw std::runtime_error("integrate: non-finite state");
    return out;
}

}  // namespace sqzmet
