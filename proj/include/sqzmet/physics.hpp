// physics.hpp — parameters, reservoir quantities and the analytic two-qubit state

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sqzmet {

using Complex = std::complex<double>;
using Operator4 = Eigen::Matrix<Complex, 4, 4>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

/// Full experiment parameter set. Every time dependence enters through the
/// dimensionless product tau = gamma0 * t; temperatures are in units of
/// hbar * omega_k / k_B.
struct PhysicalConfig {
    double tau{0.0};        // gamma0 * t
    double temp{0.0};       // dimensionless reservoir temperature
    double r{0.0};          // squeezing strength
    double phi_sq{0.0};     // squeezing phase, radians
    double mu{0.0};         // correlation factor
    double alpha{kHalfSqrt2};  // amplitude of |00> in the probe state
    double phi{0.0};        // encoded phase, radians

    /// Amplitude of |11>, always the non-negative root.
    [[nodiscard]] double beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }

    void validate() const {
        auto fail = [](const std::string& what) { throw std::invalid_argument("PhysicalConfig: " + what); };
        for (double v : {tau, temp, r, phi_sq, mu, alpha, phi}) {
            if (!std::isfinite(v)) fail("non-finite parameter");
        }
        if (tau < 0.0) fail("tau must be >= 0");
        if (temp < 0.0) fail("temp must be >= 0");
        if (r < 0.0) fail("r must be >= 0");
        if (mu < 0.0 || mu > 1.0) fail("mu must lie in [0, 1]");
        if (alpha < 0.0 || alpha > 1.0) fail("alpha must lie in [0, 1]");
    }

    [[nodiscard]] PhysicalConfig with_r(double value) const { auto c = *this; c.r = value; return c; }
    [[nodiscard]] PhysicalConfig with_mu(double value) const { auto c = *this; c.mu = value; return c; }
    [[nodiscard]] PhysicalConfig with_tau(double value) const { auto c = *this; c.tau = value; return c; }
};

struct ReservoirDerived {
    double n{0.0};      // mean thermal photon number
    double big_n{0.0};  // effective photon number N
    double chi{0.0};    // squeezing parameter, <= 0
    double d{1.0};      // exp(-(2N+1) tau / 2)
    double x{1.0};      // d cosh(chi tau)
    double y{0.0};      // d sinh(chi tau)
    double x_minus_y{1.0};  // d exp(-chi tau)
    double x_plus_y{1.0};   // d exp(chi tau)

    /// d^2 cosh(2 chi tau)
    [[nodiscard]] double sum_squares() const {
        return 0.5 * (x_minus_y * x_minus_y + x_plus_y * x_plus_y);
    }
};

/// Bose-Einstein occupation at dimensionless temperature; zero temperature is
/// taken as the limit n = 0.
inline double thermal_occupation(double temp) {
    if (temp <= 0.0) return 0.0;
    return 1.0 / std::expm1(1.0 / temp);
}

inline ReservoirDerived derive_reservoir(const PhysicalConfig& config) {
    ReservoirDerived res;
    res.n = thermal_occupation(config.temp);
    const double sinh_r = std::sinh(config.r);
    res.big_n = res.n * std::cosh(2.0 * config.r) + sinh_r * sinh_r;
    res.chi = -0.5 * (2.0 * res.n + 1.0) * std::sinh(2.0 * config.r);
    const double half = (2.0 * res.big_n + 1.0) * config.tau / 2.0;
    const double ct = res.chi * config.tau;
    res.d = std::exp(-half);
    res.x_minus_y = std::exp(-half - ct);
    res.x_plus_y = std::exp(-half + ct);
    res.x = 0.5 * (res.x_minus_y + res.x_plus_y);
    res.y = std::abs(ct) < 1.0 ? res.d * std::sinh(ct) : 0.5 * (res.x_plus_y - res.x_minus_y);
    return res;
}

/// Hermitian, unit-trace 4x4 state in the basis |00>, |01>, |10>, |11>.
class DensityMatrix {
public:
    DensityMatrix() : m_(Operator4::Zero()) {}
    explicit DensityMatrix(const Operator4& m) : m_(m) {}

    [[nodiscard]] const Operator4& matrix() const { return m_; }
    [[nodiscard]] Complex operator()(int row, int col) const { return m_(row, col); }
    [[nodiscard]] Complex trace() const { return m_.trace(); }
    [[nodiscard]] double purity() const { return (m_ * m_).trace().real(); }

private:
    Operator4 m_;
};

/// |psi> = alpha|00> + e^{i phi} beta|11>, returned as |psi><psi|.
inline DensityMatrix initial_state(double alpha, double phi) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("initial_state: alpha must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    Eigen::Matrix<Complex, 4, 1> psi = Eigen::Matrix<Complex, 4, 1>::Zero();
    psi(0) = alpha;
    psi(3) = std::polar(beta, phi);
    return DensityMatrix(psi * psi.adjoint());
}

/// Matrix elements of the memoryless (product-channel) evolution.
struct UncorrelatedBlock {
    double rho11{0.0};
    double rho44{0.0};
    double rho22{0.0};  // equals rho33
    Complex rho14{};
    double rho23{0.0};  // real for this family of states
};

/// Matrix elements of the fully correlated (joint-operator) evolution. Its
/// single-excitation sector stays empty.
struct CorrelatedBlock {
    double rho11{0.0};
    double rho44{0.0};
    Complex rho14{};
};

struct AnalyticBlocks {
    UncorrelatedBlock u;
    CorrelatedBlock c;
};

/// rho14 of each channel per unit alpha*beta, with its phi derivative. Written
/// through d exp(-+chi tau) so that nothing cancels once x ~ -y.
struct ChannelCoherences {
    Complex u{};
    Complex c{};
    Complex du{};
    Complex dc{};
};

inline ChannelCoherences channel_coherences(const PhysicalConfig& config, const ReservoirDerived& res) {
    ChannelCoherences k;
    const Complex i{0.0, 1.0};
    const double d2 = res.d * res.d;
    if (res.chi * config.tau == 0.0) {
        const Complex phase = std::polar(1.0, -config.phi);
        k.u = d2 * phase;
        k.c = res.d * phase;
        k.du = -i * k.u;
        k.dc = -i * k.c;
        return k;
    }
    const double sum_sq = res.sum_squares();
    const double psi_u = config.phi - config.phi_sq;
    const double psi_c = config.phi - 0.5 * config.phi_sq;
    const Complex rot_u = std::polar(1.0, -config.phi_sq);
    const Complex rot_c = std::polar(1.0, -0.5 * config.phi_sq);
    k.u = rot_u * Complex(sum_sq * std::cos(psi_u), -d2 * std::sin(psi_u));
    k.c = rot_c * Complex(res.x_minus_y * std::cos(psi_c), -res.x_plus_y * std::sin(psi_c));
    k.du = -i * rot_u * Complex(d2 * std::cos(psi_u), -sum_sq * std::sin(psi_u));
    k.dc = -i * rot_c * Complex(res.x_plus_y * std::cos(psi_c), -res.x_minus_y * std::sin(psi_c));
    return k;
}

inline AnalyticBlocks analytic_blocks(const PhysicalConfig& config, const ReservoirDerived& res) {
    const double big_n = res.big_n;
    const double two_n1 = 2.0 * big_n + 1.0;
    const double beta = config.beta();
    const double ab = config.alpha * beta;
    const double q = two_n1 * beta * beta - big_n;
    const double v = two_n1 * beta * beta + big_n * big_n;
    const double d2 = res.d * res.d;
    const double d4 = d2 * d2;
    const double cross = 2.0 * res.x * res.y;
    const auto k = channel_coherences(config, res);

    AnalyticBlocks blocks;
    auto& u = blocks.u;
    const double norm2 = two_n1 * two_n1;
    u.rho11 = ((1.0 + big_n) * (1.0 + big_n) - 2.0 * (1.0 + big_n) * q * d2 + v * d4) / norm2;
    u.rho44 = (big_n * big_n + 2.0 * big_n * q * d2 + v * d4) / norm2;
    u.rho22 = (big_n * (1.0 + big_n) + q * d2 - v * d4) / norm2;
    u.rho14 = ab * k.u;
    u.rho23 = -ab * std::cos(config.phi - config.phi_sq) * cross;

    auto& c = blocks.c;
    c.rho11 = (big_n + 1.0 - q * d2) / two_n1;
    c.rho44 = (big_n + q * d2) / two_n1;
    c.rho14 = ab * k.c;
    return blocks;
}

inline AnalyticBlocks analytic_blocks(const PhysicalConfig& config) {
    return analytic_blocks(config, derive_reservoir(config));
}

/// Weighted X-state assembly: (1 - mu) * uncorrelated + mu * correlated.
inline Operator4 assemble_x_state(const AnalyticBlocks& b, double mu) {
    const double mubar = 1.0 - mu;
    Operator4 m = Operator4::Zero();
    m(0, 0) = mubar * b.u.rho11 + mu * b.c.rho11;
    m(3, 3) = mubar * b.u.rho44 + mu * b.c.rho44;
    m(1, 1) = mubar * b.u.rho22;
    m(2, 2) = m(1, 1);
    m(0, 3) = mubar * b.u.rho14 + mu * b.c.rho14;
    m(3, 0) = std::conj(m(0, 3));
    m(1, 2) = mubar * b.u.rho23;
    m(2, 1) = std::conj(m(1, 2));
    return m;
}

inline DensityMatrix analytic_state(const PhysicalConfig& config) {
    config.validate();
    return DensityMatrix(assemble_x_state(analytic_blocks(config), config.mu));
}

struct StatePartials {
    Operator4 d_phi;
    Operator4 d_mu;
};

/// Exact derivatives of the analytic state with respect to phi and mu.
/// The state is affine in mu, so d_mu is the correlated block minus the
/// uncorrelated one.
inline StatePartials analytic_partials(const PhysicalConfig& config) {
    config.validate();
    const auto res = derive_reservoir(config);
    const auto b = analytic_blocks(config, res);
    const double mubar = 1.0 - config.mu;
    const double ab = config.alpha * config.beta();
    const auto k = channel_coherences(config, res);
    const Complex du14 = ab * k.du;
    const double du23 = ab * std::sin(config.phi - config.phi_sq) * (2.0 * res.x * res.y);
    const Complex dc14 = ab * k.dc;

    StatePartials p{Operator4::Zero(), Operator4::Zero()};
    p.d_phi(0, 3) = mubar * du14 + config.mu * dc14;
    p.d_phi(3, 0) = std::conj(p.d_phi(0, 3));
    p.d_phi(1, 2) = mubar * du23;
    p.d_phi(2, 1) = std::conj(p.d_phi(1, 2));

    if (config.tau == 0.0) return p;  // both branches start from the same state

    p.d_mu(0, 0) = b.c.rho11 - b.u.rho11;
    p.d_mu(3, 3) = b.c.rho44 - b.u.rho44;
    p.d_mu(1, 1) = -b.u.rho22;
    p.d_mu(2, 2) = -b.u.rho22;
    p.d_mu(0, 3) = b.c.rho14 - b.u.rho14;
    p.d_mu(3, 0) = std::conj(p.d_mu(0, 3));
    p.d_mu(1, 2) = -b.u.rho23;
    p.d_mu(2, 1) = std::conj(p.d_mu(1, 2));
    return p;
}

}  // namespace sqzmet
