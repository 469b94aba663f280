// cli.hpp — command-line front end: evolve, qfi, scan, figure
//
// Exit codes: 0 ok, 2 usage, 3 numeric failure, 4 verification failure.

#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqzmet/sqzmet.hpp"

namespace sqzmet::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kVerification = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string s) {
    auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
    return s;
}

/// Accepts plain numbers and multiples of pi: "1.5", "pi", "2pi", "0.25pi".
inline double parse_number(const std::string& text) {
    std::string s = trim(text);
    double scale = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        scale = kPi;
        s.erase(s.size() - 2);
        if (!s.empty() && s.back() == '*') s.pop_back();
        if (s.empty()) return kPi;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + text + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + text + "'");
    return v * scale;
}

inline double to_radians(double v, bool deg) { return deg ? v * kPi / 180.0 : v; }

/// "axis:min:max:count"
inline AxisRange parse_axis_range(const std::string& text, bool deg) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 4) throw UsageError("sweep must look like axis:min:max:count, got '" + text + "'");
    const auto axis = parse_axis(trim(parts[0]));
    if (!axis) throw UsageError("unknown sweep axis '" + parts[0] + "'");
    AxisRange range;
    range.axis = *axis;
    const bool angular = is_angular(*axis);
    range.min = to_radians(parse_number(parts[1]), deg && angular);
    range.max = to_radians(parse_number(parts[2]), deg && angular);
    const double count = parse_number(parts[3]);
    if (count < 2 || count != std::floor(count)) throw UsageError("sweep count must be an integer >= 2");
    range.count = static_cast<std::size_t>(count);
    try {
        range.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return range;
}

inline std::string format_axis_range(const AxisRange& r) {
    return std::string(to_string(r.axis)) + ':' + format_double(r.min) + ':' + format_double(r.max) + ':' +
           std::to_string(r.count);
}

inline const std::set<std::string>& flag_keys() {
    static const std::set<std::string> keys{"verify", "fig12", "table1", "deg"};
    return keys;
}

/// Reads key=value pairs from a flat config file or from the '# key=value'
/// manifest lines at the top of a CSV produced by this tool.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    for (std::string line; std::getline(in, line);) {
        line = trim(line);
        if (line.empty()) continue;
        const bool comment = line.front() == '#';
        if (comment) line = trim(line.substr(1));
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (comment) continue;
            break;  // CSV header reached
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

/// Splices config-file entries in front of the explicit flags so that flags
/// given on the command line win.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!config_path) return rest;
    if (rest.empty() || rest.front().rfind("-", 0) == 0) throw UsageError("--config requires a subcommand");

    std::vector<std::string> out{rest.front()};
    for (const auto& [key, value] : read_config_file(*config_path)) {
        if (key == "command") {
            if (value != rest.front())
                throw UsageError("config file was written by '" + value + "', not '" + rest.front() + "'");
            continue;
        }
        if (flag_keys().count(key)) {
            if (value == "1" || value == "true") out.push_back("--" + key);
            continue;
        }
        out.push_back("--" + key);
        out.push_back(value);
    }
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

struct PhysicsFlags {
    std::optional<std::string> tau, temp, r, phi_sq, mu, alpha, phi;
};

inline void add_physics_options(CLI::App* sub, PhysicsFlags& f, bool with_tau) {
    if (with_tau) sub->add_option("--tau", f.tau, "dimensionless time gamma0*t");
    sub->add_option("--temp", f.temp, "dimensionless reservoir temperature");
    sub->add_option("--r", f.r, "squeezing strength");
    sub->add_option("--phi-sq", f.phi_sq, "squeezing phase (radians, or degrees with --deg)");
    sub->add_option("--mu", f.mu, "correlation factor in [0, 1]");
    sub->add_option("--alpha", f.alpha, "probe amplitude of |00>");
    sub->add_option("--phi", f.phi, "encoded phase (radians, or degrees with --deg)");
}

inline PhysicalConfig resolve(const PhysicsFlags& f, PhysicalConfig c, bool deg) {
    auto take = [](const std::optional<std::string>& s, double& dst, bool angle, bool deg_) {
        if (s) dst = to_radians(parse_number(*s), angle && deg_);
    };
    take(f.tau, c.tau, false, deg);
    take(f.temp, c.temp, false, deg);
    take(f.r, c.r, false, deg);
    take(f.phi_sq, c.phi_sq, true, deg);
    take(f.mu, c.mu, false, deg);
    take(f.alpha, c.alpha, false, deg);
    take(f.phi, c.phi, true, deg);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

inline void add_config_to_manifest(RunManifest& m, const PhysicalConfig& c, bool with_tau) {
    if (with_tau) m.add("tau", c.tau);
    m.add("temp", c.temp).add("r", c.r).add("phi-sq", c.phi_sq).add("mu", c.mu).add("alpha", c.alpha).add("phi", c.phi);
}

/// Writes to the file named by `path`, or to `fallback` when the path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& body) {
    if (path.empty()) {
        body(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot open output file '" + path + "'");
    body(file);
}

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite value in ") + what);
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveArgs {
    PhysicsFlags physics;
    std::string method{"analytic"};
    std::string tau_max{"5"};
    std::size_t tau_points{101};
    double step{1e-4};
    bool deg{false};
    std::string out;
};

inline int run_evolve(const EvolveArgs& a, std::ostream& out) {
    const PhysicalConfig config = resolve(a.physics, PhysicalConfig{}, a.deg);
    const double tau_max = parse_number(a.tau_max);
    if (!(tau_max >= 0.0) || !std::isfinite(tau_max)) throw UsageError("--tau-max must be >= 0");
    if (tau_max > 0.0 && a.tau_points < 2) throw UsageError("--tau-points must be >= 2");
    const IntegratorSettings settings{a.step, IntegratorMethod::rk4};
    try {
        settings.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::vector<double> taus;
    if (tau_max == 0.0) {
        taus.push_back(0.0);
    } else {
        const AxisRange grid{Axis::tau, 0.0, tau_max, a.tau_points};
        for (std::size_t i = 0; i < a.tau_points; ++i) taus.push_back(grid.value(i));
    }

    std::vector<Operator4> states;
    if (a.method == "analytic") {
        for (double t : taus) states.push_back(analytic_state(config.with_tau(t)).matrix());
    } else {
        BranchPropagator prop(config, settings);
        for (double t : taus) {
            prop.advance_to(t);
            states.push_back(prop.mixed(config.mu).matrix());
        }
    }
    for (const auto& s : states) {
        if (!s.allFinite()) throw NumericError("non-finite density matrix");
    }

    RunManifest manifest("evolve");
    manifest.add("method", a.method).add("tau-max", tau_max).add("tau-points", static_cast<double>(a.tau_points));
    manifest.add("step", a.step);
    add_config_to_manifest(manifest, config, false);
    if (!a.out.empty()) manifest.add("out", a.out);

    emit(a.out, out, [&](std::ostream& os) {
        manifest.write(os);
        std::vector<std::string> cols{"tau"};
        for (int i = 1; i <= 4; ++i) {
            for (int j = 1; j <= 4; ++j) {
                const std::string base = "rho" + std::to_string(i) + std::to_string(j);
                cols.push_back(base + "_re");
                cols.push_back(base + "_im");
            }
        }
        cols.push_back("trace");
        cols.push_back("min_eig");
        CsvWriter csv(os);
        csv.header(cols);
        for (std::size_t k = 0; k < taus.size(); ++k) {
            const auto& s = states[k];
            csv.cell(taus[k]);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) csv.cell(s(i, j).real()).cell(s(i, j).imag());
            }
            csv.cell(s.trace().real()).cell(diagnose(s).min_eigenvalue);
            csv.end_row();
        }
    });
    return kOk;
}

// ---------------------------------------------------------------------------
// qfi

struct QfiArgs {
    PhysicsFlags physics;
    std::string method{"spectral"};
    std::string sweep;
    std::string sweep2;
    bool deg{false};
    std::string out;
};

inline int run_qfi(const QfiArgs& a, std::ostream& out) {
    const PhysicalConfig base = resolve(a.physics, PhysicalConfig{}, a.deg);
    const QfiMethod method = a.method == "closed" ? QfiMethod::closed : QfiMethod::spectral;

    std::vector<AxisRange> axes;
    if (!a.sweep.empty()) axes.push_back(parse_axis_range(a.sweep, a.deg));
    if (!a.sweep2.empty()) {
        if (axes.empty()) throw UsageError("--sweep2 needs --sweep");
        axes.push_back(parse_axis_range(a.sweep2, a.deg));
        if (axes[0].axis == axes[1].axis) throw UsageError("swept axes must differ");
    }

    struct Row {
        std::vector<double> coords;
        Qfim2 q;
        bool q_defined{true};
        std::optional<EstimationMetrics> bounds;
    };
    const std::size_t n1 = axes.empty() ? 1 : axes[0].count;
    const std::size_t n2 = axes.size() < 2 ? 1 : axes[1].count;
    std::vector<Row> rows = parallel_map<Row>(n1 * n2, [&](std::size_t k) {
        Row row;
        PhysicalConfig c = base;
        if (axes.empty()) {
            row.coords.push_back(c.tau);
        } else {
            const double v1 = axes[0].value(k / n2);
            set_axis(c, axes[0].axis, v1);
            row.coords.push_back(v1);
            if (axes.size() == 2) {
                const double v2 = axes[1].value(k % n2);
                set_axis(c, axes[1].axis, v2);
                row.coords.push_back(v2);
            }
        }
        try {
            row.q = qfim(c, method);
        } catch (const std::domain_error&) {
            // closed forms are undefined here (tau = 0 or a non-removable limit)
            row.q_defined = false;
            row.q = Qfim2{std::nan(""), std::nan(""), std::nan("")};
            return row;
        }
        try {
            row.bounds = variance_bounds(row.q);
        } catch (const std::domain_error&) {
        } catch (const std::invalid_argument&) {
        }
        return row;
    });
    for (const auto& row : rows) {
        if (!row.q_defined) continue;
        require_finite(row.q.f_phi, "f_phi");
        require_finite(row.q.f_mu, "f_mu");
        require_finite(row.q.f_muphi, "f_muphi");
    }

    RunManifest manifest("qfi");
    manifest.add("method", a.method);
    if (!axes.empty()) manifest.add("sweep", format_axis_range(axes[0]));
    if (axes.size() == 2) manifest.add("sweep2", format_axis_range(axes[1]));
    add_config_to_manifest(manifest, base, true);
    if (!a.out.empty()) manifest.add("out", a.out);

    emit(a.out, out, [&](std::ostream& os) {
        manifest.write(os);
        std::vector<std::string> cols;
        if (axes.empty()) cols.push_back("tau");
        for (const auto& ax : axes) cols.emplace_back(to_string(ax.axis));
        for (const char* c : {"f_phi", "f_mu", "f_muphi", "delta_ind", "delta_sim", "ratio_r", "valid"}) cols.push_back(c);
        CsvWriter csv(os);
        csv.header(cols);
        const double nan = std::nan("");
        for (const auto& row : rows) {
            for (double v : row.coords) csv.cell(v);
            csv.cell(row.q.f_phi).cell(row.q.f_mu).cell(row.q.f_muphi);
            if (row.bounds) {
                csv.cell(row.bounds->delta_ind).cell(row.bounds->delta_sim).cell(row.bounds->ratio_r).cell(1);
            } else {
                csv.cell(nan).cell(nan).cell(nan).cell(0);
            }
            csv.end_row();
        }
    });
    return kOk;
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
    PhysicsFlags physics;
    std::string target;
    std::string method{"spectral"};
    std::string sweep;
    std::string sweep2;
    bool verify{false};
    bool fig12{false};
    bool table1{false};
    double tolerance_steps{2.0};
    bool deg{false};
    std::string out;
    std::string report;
};

inline void write_table1(std::ostream& os, const Table1Report& r, const RunManifest& manifest) {
    manifest.write(os);
    CsvWriter csv(os);
    csv.header({"kind", "target", "regime", "mu", "phi", "argbest", "deviation_steps", "asserted", "pass"});
    auto cells = [&](const std::vector<Table1Cell>& list, const char* kind) {
        for (const auto& c : list) {
            for (std::size_t k = 0; k < c.phis.size(); ++k) {
                csv.raw(kind).raw(std::string(to_string(c.target))).raw(std::string(to_string(c.regime)));
                csv.cell(c.mu).cell(c.phis[k]).cell(c.argbest[k]).cell(c.deviation_steps[k]);
                csv.cell(c.asserted ? 1 : 0).cell(c.deviation_steps[k] <= r.tolerance_steps ? 1 : 0);
                csv.end_row();
            }
        }
    };
    cells(r.cells, "cell");
    cells(r.intermediate, "intermediate");
    for (const auto& row : r.coincidence) {
        csv.raw("coincidence").raw("inv_delta_sim").raw(std::string(to_string(regime_for(row.mu))));
        csv.cell(row.mu).cell(row.phi).cell(row.inv_delta_sim_argbest).cell(row.deviation_steps);
        csv.cell(1).cell(row.pass ? 1 : 0);
        csv.end_row();
    }
}

inline int run_table1(const ScanArgs& a, std::ostream& out, std::ostream& summary) {
    const std::size_t grid = a.sweep.empty() ? 721 : parse_axis_range(a.sweep, a.deg).count;
    if (grid < 360) throw UsageError("--table1 needs at least 360 grid points");
    const auto report = verify_table1(grid, a.tolerance_steps);
    RunManifest manifest("scan");
    manifest.add("table1", "1").add("sweep", format_axis_range({Axis::phi_sq, 0.0, kTwoPi, grid}));
    manifest.add("tolerance-steps", a.tolerance_steps);
    if (!a.out.empty()) manifest.add("out", a.out);
    emit(a.out, out, [&](std::ostream& os) { write_table1(os, report, manifest); });
    for (const auto& c : report.cells) {
        summary << "# table1 " << to_string(c.target) << ' ' << to_string(c.regime) << " max_deviation_steps="
                << format_double(c.max_deviation_steps) << ' ' << (c.pass ? "pass" : "fail") << '\n';
    }
    summary << "# table1 coincidence " << (report.coincidence_pass() ? "pass" : "fail") << '\n';
    summary << "# verify=" << (report.all_pass() ? "pass" : "fail") << '\n';
    return report.all_pass() ? kOk : kVerification;
}

/// `summary` receives the '# key=value' digest of the scan.
inline int run_scan(const ScanArgs& a, std::ostream& out, std::ostream& summary) {
    if (a.table1) return run_table1(a, out, summary);

    std::optional<ScanTarget> target = a.target.empty() && a.fig12 ? ScanTarget::ratio_r : parse_target(a.target);
    if (!target) throw UsageError("unknown or missing --target '" + a.target + "'");

    PhysicalConfig defaults;
    defaults.tau = 1.0;
    defaults.r = 1.0;
    defaults.temp = (*target == ScanTarget::f_mu_imp || *target == ScanTarget::f_mu) ? 1.0 : 0.3;
    if (a.fig12) defaults.mu = 0.1;
    const PhysicalConfig base = resolve(a.physics, defaults, a.deg);

    ScanSpec spec;
    spec.target = *target;
    spec.base = base;
    spec.method = a.method == "closed" ? QfiMethod::closed : QfiMethod::spectral;
    spec.sweep = a.sweep.empty() ? AxisRange{Axis::phi_sq, 0.0, kTwoPi, a.fig12 ? 121u : 721u}
                                 : parse_axis_range(a.sweep, a.deg);
    if (!a.sweep2.empty()) {
        spec.secondary = parse_axis_range(a.sweep2, a.deg);
    } else if (a.fig12) {
        spec.secondary = AxisRange{Axis::phi, 0.0, kTwoPi, 121};
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (a.verify && (spec.sweep.axis != Axis::phi_sq || spec.secondary || !has_prediction(spec.target))) {
        throw UsageError("--verify needs a single phi_sq sweep and a target with a phase-matching condition");
    }

    ScanResult result;
    try {
        result = scan(spec);
    } catch (const std::runtime_error& e) {
        throw NumericError(e.what());
    }

    RunManifest manifest("scan");
    manifest.add("target", std::string(to_string(spec.target))).add("method", a.method);
    manifest.add("sweep", format_axis_range(spec.sweep));
    if (spec.secondary) manifest.add("sweep2", format_axis_range(*spec.secondary));
    add_config_to_manifest(manifest, base, true);
    if (a.verify) manifest.add("verify", "1").add("tolerance-steps", a.tolerance_steps);
    if (!a.out.empty()) manifest.add("out", a.out);

    emit(a.out, out, [&](std::ostream& os) {
        manifest.write(os);
        std::vector<std::string> cols{std::string(to_string(spec.sweep.axis))};
        if (spec.secondary) cols.emplace_back(to_string(spec.secondary->axis));
        cols.emplace_back(to_string(spec.target));
        cols.emplace_back("valid");
        CsvWriter csv(os);
        csv.header(cols);
        for (const auto& p : result.grid) {
            csv.cell(p.primary);
            if (spec.secondary) csv.cell(p.secondary);
            csv.cell(p.value).cell(p.valid ? 1 : 0);
            csv.end_row();
        }
    });

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t valid = 0;
    for (const auto& p : result.grid) {
        if (!p.valid) continue;
        ++valid;
        lo = std::min(lo, p.value);
        hi = std::max(hi, p.value);
    }
    summary << "# summary target=" << to_string(spec.target) << '\n';
    summary << "# argbest_" << to_string(spec.sweep.axis) << '=' << format_double(result.argbest.primary) << '\n';
    if (spec.secondary)
        summary << "# argbest_" << to_string(spec.secondary->axis) << '=' << format_double(result.argbest.secondary)
                << '\n';
    summary << "# best_value=" << format_double(result.argbest.value) << '\n';
    summary << "# min_value=" << format_double(lo) << "\n# max_value=" << format_double(hi) << '\n';
    summary << "# valid_points=" << valid << '/' << result.grid.size() << '\n';

    int code = kOk;
    if (result.deviation) {
        summary << "# regime=" << to_string(*result.regime) << "\n# predicted=";
        for (std::size_t k = 0; k < result.predicted.size(); ++k)
            summary << (k ? ";" : "") << format_double(result.predicted[k]);
        const double steps = *result.deviation / result.step;
        summary << "\n# deviation_rad=" << format_double(*result.deviation) << "\n# deviation_steps="
                << format_double(steps) << '\n';
        if (a.verify) {
            const bool ok = steps <= a.tolerance_steps;
            summary << "# verify=" << (ok ? "pass" : "fail") << '\n';
            if (!ok) code = kVerification;
        }
    }
    return code;
}

// ---------------------------------------------------------------------------
// figure

struct FigureArgs {
    std::string name;
    std::string out_dir{"."};
    std::size_t tau_points{101};
    std::string tau_max{"5"};
    std::size_t grid{101};
    std::vector<std::string> family;
    bool deg{false};
};

inline std::string figure_csv_path(const std::string& out_dir, const std::string& name) {
    return (std::filesystem::path(out_dir) / (name + ".csv")).string();
}

inline int run_figure(const FigureArgs& a, std::ostream& out) {
    auto fig = find_figure(a.name);
    if (!fig) throw UsageError("unknown figure '" + a.name + "'");
    const std::string path = figure_csv_path(a.out_dir, a.name);
    std::filesystem::create_directories(a.out_dir);

    RunManifest manifest("figure");
    manifest.add("name", fig->name).add("kind", fig->kind == FigureKind::line ? "line" : "surface");
    add_config_to_manifest(manifest, fig->base, fig->kind == FigureKind::surface);

    if (fig->kind == FigureKind::line) {
        std::vector<double> family = fig->family;
        if (!a.family.empty()) {
            family.clear();
            for (const auto& s : a.family) family.push_back(to_radians(parse_number(s), a.deg && is_angular(fig->family_axis)));
        }
        const double tau_max = parse_number(a.tau_max);
        if (!(tau_max > 0.0)) throw UsageError("--tau-max must be > 0");
        if (a.tau_points < 2) throw UsageError("--tau-points must be >= 2");
        // validate family values through the usual config checks
        for (double v : family) {
            PhysicalConfig c = fig->base;
            set_axis(c, fig->family_axis, v);
            try {
                c.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
        const auto rows = compute_line(*fig, family, a.tau_points, tau_max);
        for (const auto& r : rows) {
            require_finite(r.q.f_phi, "f_phi");
            require_finite(r.q.f_mu, "f_mu");
        }
        std::string fam;
        for (std::size_t k = 0; k < family.size(); ++k) fam += (k ? "," : "") + format_double(family[k]);
        manifest.add("family-axis", std::string(to_string(fig->family_axis))).add("family", fam);
        manifest.add("plotted", fig->plotted).add("tau-max", tau_max).add("tau-points", static_cast<double>(a.tau_points));
        manifest.add("out-dir", a.out_dir);
        emit(path, out, [&](std::ostream& os) {
            manifest.write(os);
            CsvWriter csv(os);
            csv.header({std::string(to_string(fig->family_axis)), "tau", "f_phi", "f_mu", "f_muphi", "delta_ind",
                        "delta_sim", "ratio_r", "valid"});
            const double nan = std::nan("");
            for (const auto& r : rows) {
                csv.cell(r.family).cell(r.tau).cell(r.q.f_phi).cell(r.q.f_mu).cell(r.q.f_muphi);
                if (r.bounds) {
                    csv.cell(r.bounds->delta_ind).cell(r.bounds->delta_sim).cell(r.bounds->ratio_r).cell(1);
                } else {
                    csv.cell(nan).cell(nan).cell(nan).cell(0);
                }
                csv.end_row();
            }
        });
    } else {
        if (a.grid < 2) throw UsageError("--grid must be >= 2");
        const auto data = compute_surface(*fig, a.grid);
        manifest.add("target", std::string(to_string(fig->target)));
        AxisRange first = fig->first, second = fig->second;
        first.count = second.count = a.grid;
        manifest.add("axis1", format_axis_range(first)).add("axis2", format_axis_range(second));
        manifest.add("grid", static_cast<double>(a.grid)).add("out-dir", a.out_dir);
        emit(path, out, [&](std::ostream& os) {
            manifest.write(os);
            CsvWriter csv(os);
            std::vector<std::string> cols{std::string(to_string(first.axis)), std::string(to_string(second.axis)),
                                          std::string(to_string(fig->target))};
            if (fig->reference_plane) cols.emplace_back("reference");
            cols.emplace_back("valid");
            csv.header(cols);
            for (std::size_t k = 0; k < data.scan.grid.size(); ++k) {
                const auto& p = data.scan.grid[k];
                csv.cell(p.primary).cell(p.secondary).cell(p.value);
                if (fig->reference_plane) csv.cell(data.reference[k]);
                csv.cell(p.valid ? 1 : 0);
                csv.end_row();
            }
        });
    }
    out << path << '\n';
    return kOk;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& raw_args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    using namespace detail;
    CLI::App app{"sqzmet: two-qubit metrology in a correlated squeezed-thermal reservoir", "sqzmet"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.add_option("--config", "flat key=value file or a CSV manifest produced earlier");

    EvolveArgs ev;
    auto* evolve = app.add_subcommand("evolve", "time-evolve the probe state");
    add_physics_options(evolve, ev.physics, false);
    evolve->add_option("--method", ev.method)->check(CLI::IsMember({"analytic", "ode"}));
    evolve->add_option("--tau-max", ev.tau_max);
    evolve->add_option("--tau-points", ev.tau_points);
    evolve->add_option("--step", ev.step, "RK4 step for --method ode");
    evolve->add_flag("--deg", ev.deg, "angles in degrees");
    evolve->add_option("--out", ev.out);

    QfiArgs qa;
    auto* qfi = app.add_subcommand("qfi", "QFIM and variance bounds at a point or along a sweep");
    add_physics_options(qfi, qa.physics, true);
    qfi->add_option("--method", qa.method)->check(CLI::IsMember({"closed", "spectral"}));
    qfi->add_option("--sweep", qa.sweep, "axis:min:max:count");
    qfi->add_option("--sweep2", qa.sweep2, "axis:min:max:count");
    qfi->add_flag("--deg", qa.deg);
    qfi->add_option("--out", qa.out);

    ScanArgs sa;
    auto* sc = app.add_subcommand("scan", "grid scan with argbest and phase-matching check");
    add_physics_options(sc, sa.physics, true);
    sc->add_option("--target", sa.target);
    sc->add_option("--method", sa.method)->check(CLI::IsMember({"closed", "spectral"}));
    sc->add_option("--sweep", sa.sweep, "axis:min:max:count (default phi_sq:0:2pi:721)");
    sc->add_option("--sweep2", sa.sweep2);
    sc->add_flag("--verify", sa.verify, "exit 4 unless argbest is within tolerance of the predicted phase");
    sc->add_option("--tolerance-steps", sa.tolerance_steps);
    sc->add_flag("--fig12", sa.fig12, "R over the (phi_sq, phi) plane at the fig12 parameters");
    sc->add_flag("--table1", sa.table1, "verify every phase-matching cell");
    sc->add_flag("--deg", sa.deg);
    sc->add_option("--out", sa.out);
    sc->add_option("--report", sa.report, "write the summary block to this file");

    FigureArgs fa;
    auto* figure = app.add_subcommand("figure", "write the dataset behind one figure panel");
    figure->add_option("name,--name", fa.name, "figure panel, e.g. fig4b")->required();
    figure->add_option("--out-dir", fa.out_dir);
    figure->add_option("--tau-points", fa.tau_points);
    figure->add_option("--tau-max", fa.tau_max);
    figure->add_option("--grid", fa.grid);
    figure->add_option("--family", fa.family, "override the curve family")->delimiter(',');
    figure->add_flag("--deg", fa.deg);
    // descriptive manifest keys; fixed by the catalog, accepted and ignored on replay
    std::string descriptive;
    for (const char* key : {"--kind", "--tau", "--temp", "--r", "--phi-sq", "--mu", "--alpha", "--phi", "--family-axis",
                            "--plotted", "--target", "--axis1", "--axis2"})
        figure->add_option(key, descriptive)->group("");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kUsage;
        }
        if (evolve->parsed()) return run_evolve(ev, out);
        if (qfi->parsed()) return run_qfi(qa, out);
        if (figure->parsed()) return run_figure(fa, out);
        if (sc->parsed()) {
            if (sa.report.empty()) return run_scan(sa, out, sa.out.empty() ? err : out);
            std::ofstream rep(sa.report, std::ios::binary | std::ios::trunc);
            if (!rep) throw UsageError("cannot open report file '" + sa.report + "'");
            return run_scan(sa, out, rep);
        }
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const ClosedFormError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace sqzmet::cli
