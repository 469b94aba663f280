// figures.hpp — parameter sets and sweeps behind the reproduction datasets
//
// Caption parameters are fixed per figure. Curve families that captions leave
// unlabeled (e.g. the temperatures in fig2a) are documented defaults that the
// CLI can override.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqzmet/phase_matching.hpp"

namespace sqzmet {

enum class FigureKind { line, surface };

struct FigureDefinition {
    std::string name;
    FigureKind kind{FigureKind::line};
    PhysicalConfig base;

    // line figures: metrics against gamma0 t for each family value
    Axis family_axis{Axis::temp};
    std::vector<double> family;
    std::string plotted;  // column the panel shows

    // surface figures
    ScanTarget target{ScanTarget::f_phi};
    AxisRange first{};
    AxisRange second{};
    bool reference_plane{false};  // include the r = 0 values alongside
};

namespace detail {

inline PhysicalConfig caption(double tau, double temp, double r, double phi_sq, double mu, double phi) {
    PhysicalConfig c;
    c.tau = tau;
    c.temp = temp;
    c.r = r;
    c.phi_sq = phi_sq;
    c.mu = mu;
    c.alpha = kHalfSqrt2;
    c.phi = phi;
    return c;
}

inline FigureDefinition line(std::string name, PhysicalConfig base, Axis family_axis, std::vector<double> family,
                             std::string plotted) {
    FigureDefinition f;
    f.name = std::move(name);
    f.kind = FigureKind::line;
    f.base = base;
    f.family_axis = family_axis;
    f.family = std::move(family);
    f.plotted = std::move(plotted);
    return f;
}

inline FigureDefinition surface(std::string name, PhysicalConfig base, ScanTarget target, AxisRange first,
                                AxisRange second, bool reference = false) {
    FigureDefinition f;
    f.name = std::move(name);
    f.kind = FigureKind::surface;
    f.base = base;
    f.target = target;
    f.first = first;
    f.second = second;
    f.reference_plane = reference;
    return f;
}

}  // namespace detail

inline std::vector<FigureDefinition> figure_catalog() {
    using detail::caption;
    using detail::line;
    using detail::surface;
    const double h = kPi / 2.0;
    const AxisRange phase_sq{Axis::phi_sq, 0.0, kTwoPi, 101};
    const AxisRange phase{Axis::phi, 0.0, kTwoPi, 101};
    const AxisRange corr{Axis::mu, 0.0, 1.0, 101};
    const AxisRange strength{Axis::r, 0.0, 1.0, 101};
    const std::vector<double> quarter_phases{0.0, h, kPi, 3.0 * h};

    return {
        line("fig2a", caption(0, 0, 0, 0, 0.0, h), Axis::temp, {0.1, 0.3, 0.5}, "f_phi"),
        line("fig2b", caption(0, 0.3, 0, 0, 0.0, h), Axis::mu, {0.0, 0.3, 0.6, 0.9}, "f_phi"),
        line("fig2c", caption(0, 0.3, 0, 0, 0.9, h), Axis::r, {0.0, 0.5, 1.0}, "f_phi"),
        line("fig3a", caption(0, 0.3, 1.0, 0, 0.9, h), Axis::phi_sq, quarter_phases, "f_phi"),
        surface("fig3b", caption(1, 0.3, 0, 0, 0.9, h), ScanTarget::f_phi, phase_sq, strength, true),
        surface("fig4a", caption(1, 0.3, 1, 0, 0.1, 0), ScanTarget::f_phi_imp, phase_sq, phase),
        surface("fig4b", caption(1, 0.3, 1, 0, 0.9, 0), ScanTarget::f_phi_imp, phase_sq, phase),
        surface("fig5a", caption(1, 0.3, 1, 0, 0, 0.0), ScanTarget::f_phi_imp, phase_sq, corr),
        surface("fig5b", caption(1, 0.3, 1, 0, 0, h), ScanTarget::f_phi_imp, phase_sq, corr),
        line("fig6a", caption(0, 0, 0, kPi, 0.9, h), Axis::temp, {0.0, 0.5, 1.0}, "f_mu"),
        line("fig6b", caption(0, 1.0, 0, kPi, 0.9, h), Axis::r, {0.0, 0.5, 1.0}, "f_mu"),
        line("fig6c", caption(0, 1.0, 1.0, kPi, 0.0, h), Axis::mu, {0.1, 0.5, 0.9}, "f_mu"),
        line("fig7a", caption(0, 1.0, 1.0, 0, 0.9, h), Axis::phi_sq, quarter_phases, "f_mu"),
        surface("fig7b", caption(1, 1.0, 0, 0, 0.9, h), ScanTarget::f_mu, phase_sq, strength, true),
        surface("fig8a", caption(1, 1.0, 1, 0, 0.1, 0), ScanTarget::f_mu_imp, phase_sq, phase),
        surface("fig8b", caption(1, 1.0, 1, 0, 0.9, 0), ScanTarget::f_mu_imp, phase_sq, phase),
        surface("fig9", caption(1, 1.0, 1, kPi, 0, 0), ScanTarget::f_mu_imp, phase, corr),
        line("fig10a", caption(0, 0, 1.0, 0, 0.9, h), Axis::temp, {0.1, 0.3, 0.5}, "delta_sim"),
        line("fig10b", caption(0, 0.3, 0, 0, 0.9, h), Axis::r, {0.0, 0.5, 1.0}, "delta_sim"),
        surface("fig11a", caption(1, 0.3, 1, 0, 0.1, 0), ScanTarget::inv_delta_sim, phase, phase_sq),
        surface("fig11b", caption(1, 0.3, 1, 0, 0.9, 0), ScanTarget::inv_delta_sim, phase, phase_sq),
        surface("fig12a", caption(1, 0.3, 1, 0, 0.1, 0), ScanTarget::ratio_r, phase, phase_sq),
        surface("fig12b", caption(1, 0.3, 1, 0, 0.9, 0), ScanTarget::ratio_r, phase, phase_sq),
    };
}

inline std::optional<FigureDefinition> find_figure(const std::string& name) {
    for (auto& f : figure_catalog()) {
        if (f.name == name) return f;
    }
    return std::nullopt;
}

struct LineRow {
    double family{0.0};
    double tau{0.0};
    Qfim2 q;
    std::optional<EstimationMetrics> bounds;  // empty where the QFIM is singular
};

/// Evaluates every family value on an even gamma0 t grid over [0, tau_max].
inline std::vector<LineRow> compute_line(const FigureDefinition& fig, const std::vector<double>& family,
                                         std::size_t tau_points = 101, double tau_max = 5.0) {
    if (fig.kind != FigureKind::line) throw std::invalid_argument("compute_line: not a line figure");
    if (tau_points < 2) throw std::invalid_argument("compute_line: tau_points must be >= 2");
    const AxisRange taus{Axis::tau, 0.0, tau_max, tau_points};
    const std::size_t total = family.size() * tau_points;
    return parallel_map<LineRow>(total, [&](std::size_t k) {
        LineRow row;
        row.family = family[k / tau_points];
        row.tau = taus.value(k % tau_points);
        PhysicalConfig c = fig.base;
        set_axis(c, fig.family_axis, row.family);
        c.tau = row.tau;
        row.q = qfim_spectral(c);
        try {
            row.bounds = variance_bounds(row.q);
        } catch (const SingularQfimError&) {
        } catch (const std::invalid_argument&) {
        }
        return row;
    });
}

struct SurfaceData {
    ScanResult scan;
    std::vector<double> reference;  // r = 0 values per grid point, when requested
};

inline SurfaceData compute_surface(const FigureDefinition& fig, std::size_t grid = 101) {
    if (fig.kind != FigureKind::surface) throw std::invalid_argument("compute_surface: not a surface figure");
    ScanSpec spec;
    spec.target = fig.target;
    spec.base = fig.base;
    spec.sweep = fig.first;
    spec.sweep.count = grid;
    spec.secondary = fig.second;
    spec.secondary->count = grid;

    SurfaceData out;
    out.scan = scan(spec);
    if (fig.reference_plane) {
        out.reference = parallel_map<double>(out.scan.grid.size(), [&](std::size_t k) {
            const auto& p = out.scan.grid[k];
            PhysicalConfig c = spec.base;
            set_axis(c, spec.sweep.axis, p.primary);
            set_axis(c, spec.secondary->axis, p.secondary);
            c.r = 0.0;
            return evaluate_target(fig.target, c).value_or(std::nan(""));
        });
    }
    return out;
}

}  // namespace sqzmet
