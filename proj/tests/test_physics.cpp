#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "test_support.hpp"

using namespace sqzmet;
using sqzmet::testing::ConfigSampler;
using sqzmet::testing::max_abs_diff;

namespace {

PhysicalConfig make(double tau, double temp, double r, double phi_sq, double mu, double alpha, double phi) {
    PhysicalConfig c;
    c.tau = tau;
    c.temp = temp;
    c.r = r;
    c.phi_sq = phi_sq;
    c.mu = mu;
    c.alpha = alpha;
    c.phi = phi;
    return c;
}

}  // namespace

TEST(Reservoir, ZeroTemperatureNoSqueezing) {
    const auto res = derive_reservoir(make(1.0, 0.0, 0.0, 0.0, 0.0, kHalfSqrt2, 0.0));
    EXPECT_EQ(res.n, 0.0);
    EXPECT_EQ(res.big_n, 0.0);
    EXPECT_EQ(res.chi, 0.0);
    EXPECT_NEAR(res.d, 0.6065306597126334, 1e-15);
    EXPECT_EQ(res.y, 0.0);
}

TEST(Reservoir, PlanckOccupation) {
    const auto res = derive_reservoir(make(0.0, 0.3, 0.0, 0.0, 0.0, kHalfSqrt2, 0.0));
    // 1 / (e^{10/3} - 1) evaluated independently
    EXPECT_NEAR(res.n, 0.0369937065900355, 1e-14);
    EXPECT_NEAR(res.n, 0.03700, 1e-5);
    EXPECT_DOUBLE_EQ(res.big_n, res.n);
    EXPECT_EQ(res.chi, 0.0);
}

TEST(Reservoir, PureSqueezing) {
    const auto res = derive_reservoir(make(0.0, 0.0, 1.0, 0.0, 0.0, kHalfSqrt2, 0.0));
    EXPECT_EQ(res.n, 0.0);
    EXPECT_NEAR(res.big_n, 1.381097845541816, 1e-12);
    EXPECT_NEAR(res.chi, -1.813430203923509, 1e-12);
    EXPECT_EQ(res.d, 1.0);
}

TEST(Reservoir, SignsAndRanges) {
    ConfigSampler s(11);
    for (int k = 0; k < 500; ++k) {
        const auto c = s.any();
        const auto res = derive_reservoir(c);
        EXPECT_GE(res.n, 0.0);
        EXPECT_LE(res.chi, 0.0);
        EXPECT_GT(res.d, 0.0);
        EXPECT_LE(res.d, 1.0);
        if (c.r > 0.0 && c.tau > 0.0) {
            EXPECT_LT(res.y, 0.0);
        }
    }
    EXPECT_EQ(derive_reservoir(make(0.0, 0.7, 1.3, 0, 0, 0.5, 0)).d, 1.0);
    EXPECT_EQ(derive_reservoir(make(0.0, 0.7, 1.3, 0, 0, 0.5, 0)).y, 0.0);
}

TEST(InitialState, SeparableEndpoint) {
    const auto rho = initial_state(1.0, 0.8);
    Operator4 expected = Operator4::Zero();
    expected(0, 0) = 1.0;
    EXPECT_LT(max_abs_diff(rho.matrix(), expected), 1e-15);
}

TEST(InitialState, BellLike) {
    const auto rho = initial_state(kHalfSqrt2, 0.0);
    for (auto [i, j] : {std::pair{0, 0}, {3, 3}, {0, 3}, {3, 0}}) EXPECT_NEAR(std::abs(rho(i, j) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
}

TEST(InitialState, PhaseConvention) {
    const auto rho = initial_state(kHalfSqrt2, kPi / 2.0);
    EXPECT_NEAR(rho(0, 3).real(), 0.0, 1e-15);
    EXPECT_NEAR(rho(0, 3).imag(), -0.5, 1e-15);
    EXPECT_NEAR(rho(3, 0).imag(), 0.5, 1e-15);
}

TEST(InitialState, RejectsBadAmplitude) {
    EXPECT_THROW(initial_state(1.5, 0.0), std::invalid_argument);
    EXPECT_THROW(initial_state(-0.1, 0.0), std::invalid_argument);
}

TEST(Config, Validation) {
    EXPECT_NO_THROW(PhysicalConfig{}.validate());
    EXPECT_THROW(make(-1, 0, 0, 0, 0, 0.5, 0).validate(), std::invalid_argument);
    EXPECT_THROW(make(1, -1, 0, 0, 0, 0.5, 0).validate(), std::invalid_argument);
    EXPECT_THROW(make(1, 0, -1, 0, 0, 0.5, 0).validate(), std::invalid_argument);
    EXPECT_THROW(make(1, 0, 0, 0, 1.1, 0.5, 0).validate(), std::invalid_argument);
    EXPECT_THROW(make(1, 0, 0, 0, 0, 1.1, 0).validate(), std::invalid_argument);
    EXPECT_THROW(make(1, 0, 0, std::nan(""), 0, 0.5, 0).validate(), std::invalid_argument);
    EXPECT_DOUBLE_EQ(make(0, 0, 0, 0, 0, 0.6, 0).beta(), 0.8);
}

TEST(AnalyticState, CollapsesToInitialStateAtZeroTime) {
    ConfigSampler s(21);
    for (int k = 0; k < 200; ++k) {
        auto c = s.any();
        c.tau = 0.0;
        const auto rho = analytic_state(c);
        EXPECT_LT(max_abs_diff(rho.matrix(), initial_state(c.alpha, c.phi).matrix()), 1e-14);
        EXPECT_NEAR(rho(0, 0).real(), c.alpha * c.alpha, 1e-14);
        EXPECT_NEAR(rho(3, 3).real(), 1.0 - c.alpha * c.alpha, 1e-14);
        EXPECT_NEAR(std::abs(rho(1, 1)), 0.0, 1e-14);
    }
}

TEST(AnalyticState, UncorrelatedThermalSteadyState) {
    for (double temp : {0.0, 0.3, 1.0}) {
        const auto c = make(200.0, temp, 0.0, 0.0, 0.0, 0.4, 1.0);
        const double n = temp > 0 ? 1.0 / (std::exp(1.0 / temp) - 1.0) : 0.0;
        const double z = (2 * n + 1) * (2 * n + 1);
        const auto rho = analytic_state(c);
        EXPECT_NEAR(rho(0, 0).real(), (1 + n) * (1 + n) / z, 1e-12);
        EXPECT_NEAR(rho(1, 1).real(), n * (1 + n) / z, 1e-12);
        EXPECT_NEAR(rho(2, 2).real(), n * (1 + n) / z, 1e-12);
        EXPECT_NEAR(rho(3, 3).real(), n * n / z, 1e-12);
        EXPECT_NEAR(std::abs(rho(0, 3)), 0.0, 1e-12);
    }
}

TEST(AnalyticState, CorrelatedSteadyState) {
    for (double temp : {0.0, 0.3, 1.0}) {
        const auto c = make(200.0, temp, 0.0, 0.0, 1.0, 0.4, 1.0);
        const double n = temp > 0 ? 1.0 / (std::exp(1.0 / temp) - 1.0) : 0.0;
        const auto rho = analytic_state(c);
        EXPECT_NEAR(rho(0, 0).real(), (n + 1) / (2 * n + 1), 1e-12);
        EXPECT_NEAR(rho(1, 1).real(), 0.0, 1e-15);
        EXPECT_NEAR(rho(3, 3).real(), n / (2 * n + 1), 1e-12);
    }
}

TEST(AnalyticState, NoSqueezingCoherence) {
    ConfigSampler s(31);
    for (int k = 0; k < 200; ++k) {
        auto c = s.any();
        c.r = 0.0;
        const auto res = derive_reservoir(c);
        const auto rho = analytic_state(c);
        const Complex expected = ((1 - c.mu) * res.d * res.d + c.mu * res.d) * c.alpha * c.beta() *
                                 std::exp(Complex(0, -c.phi));
        EXPECT_LT(std::abs(rho(0, 3) - expected), 1e-14);
        EXPECT_EQ(rho(1, 2), Complex(0.0));
    }
}

TEST(AnalyticState, LinearInCorrelation) {
    ConfigSampler s(41);
    for (int k = 0; k < 200; ++k) {
        const auto c = s.any();
        const Operator4 mixed =
            (1 - c.mu) * analytic_state(c.with_mu(0.0)).matrix() + c.mu * analytic_state(c.with_mu(1.0)).matrix();
        EXPECT_LT(max_abs_diff(analytic_state(c).matrix(), mixed), 1e-14);
    }
}

TEST(AnalyticState, StateInvariantsOverRandomConfigs) {
    ConfigSampler s(51);
    for (int k = 0; k < 1000; ++k) {
        const auto c = s.any();
        const Operator4 m = analytic_state(c).matrix();
        EXPECT_LE((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE(std::abs(m.trace() - 1.0), 1e-12);
        Eigen::SelfAdjointEigenSolver<Operator4> eig(m);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
        for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) {
            EXPECT_EQ(m(i, j), Complex(0.0));
            EXPECT_EQ(m(j, i), Complex(0.0));
        }
        EXPECT_EQ(m(1, 1), m(2, 2));
    }
}

TEST(Partials, NoSqueezingPhaseDerivative) {
    const auto c = make(0.7, 0.3, 0.0, 1.0, 0.4, 0.6, 0.9);
    const auto res = derive_reservoir(c);
    const auto p = analytic_partials(c);
    const Complex expected = Complex(0, -1) * ((1 - c.mu) * res.d * res.d + c.mu * res.d) * c.alpha * c.beta() *
                             std::exp(Complex(0, -c.phi));
    EXPECT_LT(std::abs(p.d_phi(0, 3) - expected), 1e-15);
}

TEST(Partials, CorrelationDerivativeVanishesAtZeroTime) {
    ConfigSampler s(61);
    for (int k = 0; k < 50; ++k) {
        auto c = s.any();
        c.tau = 0.0;
        EXPECT_LT(analytic_partials(c).d_mu.cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(Partials, MatchCentralDifferences) {
    ConfigSampler s(71);
    const double h = 1e-5;
    for (int k = 0; k < 150; ++k) {
        auto c = s.any();
        c.mu = s.uniform(1e-3, 1.0 - 1e-3);
        const auto p = analytic_partials(c);
        auto at_phi = [&](double v) { auto q = c; q.phi = v; return analytic_state(q).matrix(); };
        auto at_mu = [&](double v) { return analytic_state(c.with_mu(v)).matrix(); };
        const Operator4 fd_phi = (at_phi(c.phi + h) - at_phi(c.phi - h)) / (2 * h);
        const Operator4 fd_mu = (at_mu(c.mu + h) - at_mu(c.mu - h)) / (2 * h);
        EXPECT_LE(max_abs_diff(p.d_phi, fd_phi), 1e-7);
        EXPECT_LE(max_abs_diff(p.d_mu, fd_mu), 1e-7);
    }
}

TEST(Partials, HermitianAndTraceless) {
    ConfigSampler s(81);
    for (int k = 0; k < 200; ++k) {
        const auto p = analytic_partials(s.any());
        for (const Operator4* m : {&p.d_phi, &p.d_mu}) {
            EXPECT_LE(((*m) - m->adjoint()).cwiseAbs().maxCoeff(), 1e-14);
            EXPECT_LE(std::abs(m->trace()), 1e-14);
        }
        // the phase only enters the coherences
        EXPECT_EQ(p.d_phi.diagonal().cwiseAbs().maxCoeff(), 0.0);
    }
}
