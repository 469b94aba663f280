#include <gtest/gtest.h>

#include <cstdlib>

#include "test_support.hpp"

using namespace sqzmet;
using sqzmet::testing::rel_close;

namespace {

ScanSpec phase_scan(ScanTarget target, double mu, double phi, double temp = 0.3) {
    ScanSpec spec;
    spec.target = target;
    spec.base.tau = 1.0;
    spec.base.temp = temp;
    spec.base.r = 1.0;
    spec.base.mu = mu;
    spec.base.phi = phi;
    spec.sweep = AxisRange{Axis::phi_sq, 0.0, kTwoPi, 721};
    return spec;
}

void expect_angles(const std::vector<double>& got, const std::vector<double>& want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-14);
}

class ThreadOverride {
public:
    explicit ThreadOverride(const char* value) { setenv("SQZMET_THREADS", value, 1); }
    ~ThreadOverride() { unsetenv("SQZMET_THREADS"); }
};

}  // namespace

TEST(Names, RoundTrip) {
    for (auto t : {ScanTarget::f_phi_imp, ScanTarget::f_mu_imp, ScanTarget::inv_delta_sim, ScanTarget::f_phi,
                   ScanTarget::f_mu, ScanTarget::ratio_r})
        EXPECT_EQ(parse_target(to_string(t)), t);
    for (auto a : {Axis::phi_sq, Axis::phi, Axis::mu, Axis::r, Axis::tau, Axis::temp})
        EXPECT_EQ(parse_axis(to_string(a)), a);
    EXPECT_FALSE(parse_target("nope"));
    EXPECT_FALSE(parse_axis("alpha"));
}

TEST(Predicted, StatedConditions) {
    expect_angles(predicted_phase(ScanTarget::f_phi_imp, Regime::small_mu, kPi / 2), {0.0, kPi});
    expect_angles(predicted_phase(ScanTarget::f_mu_imp, Regime::large_mu, kPi / 2), {kPi});
    expect_angles(predicted_phase(ScanTarget::inv_delta_sim, Regime::large_mu, kPi / 2), {0.0});
    expect_angles(predicted_phase(ScanTarget::f_mu_imp, Regime::small_mu, kPi / 4), {kPi / 4, 5 * kPi / 4});
    expect_angles(predicted_phase(ScanTarget::f_phi_imp, Regime::large_mu, kPi / 4), {3 * kPi / 2});
    EXPECT_THROW(predicted_phase(ScanTarget::ratio_r, Regime::small_mu, 0.0), std::invalid_argument);
}

TEST(Predicted, SolveTheCosineConditions) {
    for (double phi : {0.0, 0.4, kPi / 4, 2.0, 3 * kPi / 4, 5.5}) {
        for (double p : predicted_phase(ScanTarget::f_phi_imp, Regime::small_mu, phi))
            EXPECT_NEAR(std::cos(2 * p - 2 * phi), -1.0, 1e-12);
        for (double p : predicted_phase(ScanTarget::f_mu_imp, Regime::small_mu, phi))
            EXPECT_NEAR(std::cos(2 * p - 2 * phi), 1.0, 1e-12);
        for (double p : predicted_phase(ScanTarget::inv_delta_sim, Regime::large_mu, phi))
            EXPECT_NEAR(std::cos(p - 2 * phi), -1.0, 1e-12);
        for (double p : predicted_phase(ScanTarget::f_mu_imp, Regime::large_mu, phi)) {
            EXPECT_NEAR(std::cos(p - 2 * phi), 1.0, 1e-12);
            EXPECT_GE(p, 0.0);
            EXPECT_LT(p, kTwoPi);
        }
    }
}

TEST(Angles, WrapAndDistance) {
    EXPECT_DOUBLE_EQ(wrap_two_pi(-kPi / 2), 3 * kPi / 2);
    EXPECT_DOUBLE_EQ(wrap_two_pi(kTwoPi), 0.0);
    EXPECT_NEAR(circular_distance(0.1, kTwoPi - 0.1), 0.2, 1e-15);
    EXPECT_NEAR(deviation_from(kTwoPi, {0.0}), 0.0, 1e-15);
    EXPECT_NEAR(deviation_from(1.0, {0.5, 3.0}), 0.5, 1e-15);
    EXPECT_EQ(regime_for(0.49), Regime::small_mu);
    EXPECT_EQ(regime_for(0.5), Regime::large_mu);
}

TEST(Grid, EndpointsAndValidation) {
    const AxisRange r{Axis::phi_sq, 0.0, kTwoPi, 721};
    EXPECT_EQ(r.value(0), 0.0);
    EXPECT_EQ(r.value(720), kTwoPi);
    EXPECT_NEAR(r.step(), kPi / 360, 1e-16);
    EXPECT_THROW((AxisRange{Axis::mu, 0.0, 1.0, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((AxisRange{Axis::mu, 1.0, 1.0, 5}.validate()), std::invalid_argument);
    ScanSpec spec;
    spec.secondary = AxisRange{Axis::phi_sq, 0.0, 1.0, 5};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Scan, UncorrelatedPhaseOptimum) {
    const auto result = scan(phase_scan(ScanTarget::f_phi_imp, 0.0, kPi / 2));
    ASSERT_TRUE(result.deviation);
    EXPECT_LE(*result.deviation, result.step * (1 + 1e-9));
    EXPECT_EQ(result.regime, Regime::small_mu);
}

TEST(Scan, CorrelatedPhaseOptimum) {
    const auto result = scan(phase_scan(ScanTarget::f_phi_imp, 1.0, kPi / 2));
    EXPECT_LE(circular_distance(result.argbest.primary, 0.0), result.step * (1 + 1e-9));
}

TEST(Scan, CorrelatedCorrelationOptimum) {
    const auto result = scan(phase_scan(ScanTarget::f_mu_imp, 1.0, kPi / 2, 1.0));
    EXPECT_LE(circular_distance(result.argbest.primary, kPi), result.step * (1 + 1e-9));
    expect_angles(result.predicted, {kPi});
}

TEST(Scan, TiesPreferSmallestCoordinate) {
    // without squeezing the squeezing phase is idle, so every point ties
    auto spec = phase_scan(ScanTarget::f_phi, 0.3, 0.7);
    spec.base.r = 0.0;
    const auto result = scan(spec);
    for (const auto& p : result.grid) EXPECT_EQ(p.value, result.grid.front().value);
    EXPECT_EQ(result.argbest.primary, 0.0);
}

TEST(Scan, FlagsSingularPoints) {
    ScanSpec spec = phase_scan(ScanTarget::inv_delta_sim, 0.5, 0.3);
    spec.sweep = AxisRange{Axis::tau, 0.0, 2.0, 21};
    const auto result = scan(spec);
    EXPECT_FALSE(result.grid.front().valid);
    EXPECT_TRUE(std::isnan(result.grid.front().value));
    for (std::size_t k = 1; k < result.grid.size(); ++k) EXPECT_TRUE(result.grid[k].valid);
    EXPECT_TRUE(result.argbest.valid);
    EXPECT_FALSE(result.deviation);

    spec.base.tau = 0.0;
    spec.sweep = AxisRange{Axis::phi_sq, 0.0, kTwoPi, 11};
    EXPECT_THROW(scan(spec), std::runtime_error);
}

TEST(Scan, TwoAxisGridOrder) {
    ScanSpec spec = phase_scan(ScanTarget::ratio_r, 0.1, 0.0);
    spec.sweep.count = 5;
    spec.secondary = AxisRange{Axis::phi, 0.0, kTwoPi, 3};
    const auto result = scan(spec);
    ASSERT_EQ(result.grid.size(), 15u);
    EXPECT_EQ(result.grid[1].primary, 0.0);
    EXPECT_EQ(result.grid[1].secondary, kPi);
    EXPECT_EQ(result.grid[3].primary, spec.sweep.value(1));
    EXPECT_FALSE(result.deviation);
}

TEST(Scan, WindowShiftInvariance) {
    for (auto target : {ScanTarget::f_phi_imp, ScanTarget::f_mu_imp, ScanTarget::inv_delta_sim}) {
        auto a = phase_scan(target, 0.4, 0.9);
        auto b = a;
        b.sweep.min += kTwoPi;
        b.sweep.max += kTwoPi;
        const auto ra = scan(a);
        const auto rb = scan(b);
        for (std::size_t k = 0; k < ra.grid.size(); ++k)
            EXPECT_TRUE(rel_close(ra.grid[k].value, rb.grid[k].value, 1e-12, 1e-12)) << k;
    }
}

TEST(Scan, UncorrelatedPhaseHalfPeriod) {
    for (double phi : {0.0, 0.5, 2.0}) {
        auto c = phase_scan(ScanTarget::f_phi_imp, 0.0, phi).base;
        for (int k = 0; k < 24; ++k) {
            c.phi_sq = kPi * k / 12.0;
            const double a = *evaluate_target(ScanTarget::f_phi_imp, c);
            c.phi_sq += kPi;
            const double b = *evaluate_target(ScanTarget::f_phi_imp, c);
            EXPECT_NEAR(a, b, 1e-10);
        }
    }
}

TEST(Scan, CorrelatedPhaseReflection) {
    for (double phi : {0.0, 0.5, 2.0}) {
        auto c = phase_scan(ScanTarget::f_phi, 1.0, phi).base;
        for (int k = 0; k < 24; ++k) {
            const double phi_sq = kTwoPi * k / 24.0;
            c.phi_sq = phi_sq;
            const double a = qfim_spectral(c).f_phi;
            c.phi_sq = wrap_two_pi(4 * phi - phi_sq);
            const double b = qfim_spectral(c).f_phi;
            EXPECT_NEAR(a, b, 1e-10);
        }
    }
}

TEST(Scan, JointAdvantageAtFig12Parameters) {
    for (double mu : {0.1, 0.9}) {
        ScanSpec spec = phase_scan(ScanTarget::ratio_r, mu, 0.0);
        spec.sweep.count = 41;
        spec.secondary = AxisRange{Axis::phi, 0.0, kTwoPi, 41};
        for (const auto& p : scan(spec).grid) {
            ASSERT_TRUE(p.valid);
            EXPECT_GE(p.value, 1.0 - 1e-9);
            EXPECT_LE(p.value, 2.0 + 1e-9);
        }
    }
}

TEST(Scan, IndependentOfThreadCount) {
    ScanSpec spec = phase_scan(ScanTarget::inv_delta_sim, 0.7, 1.2);
    spec.secondary = AxisRange{Axis::mu, 0.0, 1.0, 7};
    spec.sweep.count = 97;
    std::vector<ScanPoint> serial, threaded;
    {
        ThreadOverride one("1");
        serial = scan(spec).grid;
    }
    {
        ThreadOverride four("4");
        threaded = scan(spec).grid;
    }
    ASSERT_EQ(serial.size(), threaded.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        EXPECT_EQ(serial[k].valid, threaded[k].valid);
        if (serial[k].valid) {
            EXPECT_EQ(serial[k].value, threaded[k].value);
        }
    }
}

TEST(Table1, ReportShape) {
    EXPECT_THROW(verify_table1(359), std::invalid_argument);
    const auto report = verify_table1(361, 2.0);
    EXPECT_EQ(report.cells.size(), 6u);
    EXPECT_EQ(report.intermediate.size(), 6u);
    EXPECT_EQ(report.coincidence.size(), 8u);
    for (const auto& c : report.cells) {
        EXPECT_TRUE(c.asserted);
        EXPECT_TRUE(c.mu == kSmallMu || c.mu == kLargeMu);
        EXPECT_EQ(c.regime, regime_for(c.mu));
        ASSERT_EQ(c.phis.size(), 4u);
        EXPECT_EQ(c.pass, c.max_deviation_steps <= 2.0);
        for (double d : c.deviation_steps) {
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 180.0 + 1e-9);
        }
    }
    for (const auto& c : report.intermediate) EXPECT_FALSE(c.asserted);
    EXPECT_EQ(report.all_pass(), report.cells_pass() && report.coincidence_pass());
}

TEST(Table1, PhaseRowsAtUncorrelatedLimit) {
    // the small-mu condition is exact at mu = 0
    for (double phi : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4}) {
        const auto result = scan(phase_scan(ScanTarget::f_phi_imp, 0.0, phi));
        EXPECT_LE(*result.deviation / result.step, 2.0 + 1e-9) << "phi=" << phi;
    }
}
