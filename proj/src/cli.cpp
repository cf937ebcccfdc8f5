// cli.cpp

#include "hydroblow/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "hydroblow/errors.hpp"
#include "hydroblow/hydro2d.hpp"
#include "hydroblow/profile.hpp"
#include "hydroblow/reduced1d.hpp"

namespace hydroblow::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCommands[] = {"profile", "simulate1d", "simulate2d", "sweep"};

void build_app(CLI::App& app, RunConfig& c) {
    app.set_config("--config", "", "TOML/INI file with one [command] section per subcommand");
    app.allow_config_extras(false);
    app.require_subcommand(1);

    auto* p = app.add_subcommand("profile", "Build and certify a blowup profile");
    p->add_option("--m", c.profile.m, "nonlocal parameter (per arch when segments > 1)");
    p->add_option("--H", c.profile.H, "interval length");
    p->add_option("--N", c.profile.N, "grid intervals (per arch when segments > 1)");
    p->add_option("--grid", c.profile.grid, "chebyshev | uniform");
    p->add_option("--segments", c.profile.segments, "number of alternating arches");
    p->add_option("--residual-tol", c.profile.residual_tol, "certification tolerance");
    p->add_option("--out", c.profile.out, "output directory");

    auto* s1 = app.add_subcommand("simulate1d", "Integrate the reduced equation to blowup");
    s1->add_option("--m", c.simulate1d.m);
    s1->add_option("--H", c.simulate1d.H);
    s1->add_option("--N", c.simulate1d.N, "grid intervals");
    s1->add_option("--discretization", c.simulate1d.discretization, "chebyshev | sine | fd4");
    s1->add_option("--segments", c.simulate1d.segments, "arches of the initial profile");
    s1->add_option("--scale", c.simulate1d.scale, "initial data = scale * phi");
    s1->add_flag("--zero", c.simulate1d.zero, "start from W = 0");
    s1->add_option("--expect", c.simulate1d.expect, "auto | blowup | none");
    s1->add_option("--t-end", c.simulate1d.t_end);
    s1->add_option("--rel-tol", c.simulate1d.rel_tol);
    s1->add_option("--abs-tol", c.simulate1d.abs_tol);
    s1->add_option("--threshold", c.simulate1d.threshold, "blowup threshold on max|W|");
    s1->add_option("--snapshots", c.simulate1d.snapshots, "comma-separated snapshot times")
        ->delimiter(',');
    s1->add_option("--out", c.simulate1d.out);

    auto* s2 = app.add_subcommand("simulate2d", "Integrate the 2D channel system");
    s2->add_option("--m", c.simulate2d.m);
    s2->add_option("--H", c.simulate2d.H);
    s2->add_option("--L", c.simulate2d.L, "horizontal period");
    s2->add_option("--k", c.simulate2d.k, "wavenumber index of the initial data");
    s2->add_option("--k-max", c.simulate2d.k_max);
    s2->add_option("--Nz", c.simulate2d.Nz, "Chebyshev intervals in z");
    s2->add_option("--nu", c.simulate2d.nu, "artificial viscosity");
    s2->add_option("--filter", c.simulate2d.filter, "exponential filter strength, 0 = off");
    s2->add_option("--filter-order", c.simulate2d.filter_order);
    s2->add_option("--t-end", c.simulate2d.t_end);
    s2->add_option("--snapshot-dt", c.simulate2d.snapshot_dt);
    s2->add_option("--trace-tol", c.simulate2d.trace_tol, "allowed relative trace error");
    s2->add_option("--exhaustion", c.simulate2d.exhaustion, "top-mode energy fraction limit");
    s2->add_option("--rel-tol", c.simulate2d.rel_tol);
    s2->add_option("--abs-tol", c.simulate2d.abs_tol);
    s2->add_flag("--zero", c.simulate2d.zero, "start from u = 0");
    s2->add_option("--out", c.simulate2d.out);

    auto* sw = app.add_subcommand("sweep", "Profiles and 1D blowup times over a list of m");
    sw->add_option("--m-list", c.sweep.m_list, "comma-separated values of m")
        ->delimiter(',')
        ->check(CLI::Validator(
            [](std::string& v) { return v.empty() ? std::string("empty entry in the m list") : std::string(); },
            "M"))
        ->required();
    sw->add_option("--H", c.sweep.H);
    sw->add_option("--N", c.sweep.N, "profile intervals");
    sw->add_option("--N1d", c.sweep.N1d, "1D solver intervals");
    sw->add_option("--T-tol", c.sweep.T_tol, "allowed |T_est - 1|");
    sw->add_option("--t-short", c.sweep.t_short, "length of each 1D run");
    sw->add_option("--rel-tol", c.sweep.rel_tol);
    sw->add_option("--abs-tol", c.sweep.abs_tol);
    sw->add_option("--out", c.sweep.out);

    for (auto* sub : {p, s1, s2, sw}) sub->allow_config_extras(false);
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += io::format_double(v[i]);
    }
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os << text;
}

template <class F>
void write_with(const fs::path& path, F&& fill) {
    std::ostringstream ss;
    fill(ss);
    write_text(path, ss.str());
}

fs::path prepare_out(const std::string& dir) {
    if (dir.empty()) throw DomainError("output directory must not be empty");
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void require_range(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

profile::Profile make_profile(double m, double H, int N, int segments, profile::GridKind grid,
                              const profile::Tolerances& tol = {}) {
    require_range(segments >= 1, "segments must be >= 1");
    if (segments == 1) return profile::build_profile(profile::params_from_m(m, H, tol), N, grid, tol);
    require_range(grid == profile::GridKind::chebyshev, "glued profiles use the chebyshev grid");
    return profile::glue_sign_changing(m, H, segments, N, tol);
}

void write_metadata(const fs::path& dir, const RunConfig& cfg, const io::KeyValueDoc& results) {
    io::KeyValueDoc doc = to_doc(cfg);
    for (const auto& [k, v] : results.entries()) doc.set("result." + k, v);
    doc.write_file((dir / "metadata.txt").string());
}

// ---------------------------------------------------------------- profile

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
    const ProfileConfig& c = cfg.profile;
    require_range(c.N >= 16 && c.N <= 65536, "N must lie in [16, 65536]");
    profile::Tolerances tol;
    tol.residual = c.residual_tol;
    const auto grid = profile::grid_from_string(c.grid);
    const profile::Profile pr = make_profile(c.m, c.H, c.N, c.segments, grid, tol);
    const fs::path dir = prepare_out(c.out);
    const auto& P = pr.params;

    write_with(dir / "profile.csv", [&](std::ostream& os) { profile::write_csv(os, pr); });
    write_with(dir / "params.txt", [&](std::ostream& os) {
        profile::write_params(os, P);
        io::KeyValueDoc extra;
        extra.set("segments", pr.segments);
        extra.set("length", pr.length);
        extra.set("nonlocal_full", pr.nonlocal);
        extra.write(os);
    });

    io::KeyValueDoc cert;
    cert.set("status", std::string("certified"));
    cert.set("residual", pr.residual);
    cert.set("residual_local", pr.residual_local);
    cert.set("tolerance", pr.tolerance);
    cert.set("nonlocal", pr.nonlocal);
    cert.set("nonlocal_rel_error", std::fabs(pr.nonlocal - P.m * P.m) / (P.m * P.m));
    cert.set("root_sum_error", std::fabs(P.psi_plus + P.psi_minus - 1.0));
    cert.set("root_product_error", std::fabs(P.psi_plus * P.psi_minus + P.m * P.m));
    cert.set("delta2pq_error", std::fabs(P.delta * P.delta * P.p * P.q - P.m * P.m));
    cert.set("C_closed_form", P.H * std::sin(std::numbers::pi * P.q) / std::numbers::pi);
    cert.set("phi_max", profile::phi_max(pr));
    cert.set("sign_changes", profile::sign_changes(pr));
    cert.set("trivial", profile::is_trivial(pr));
    cert.write_file((dir / "certification.txt").string());
    write_metadata(dir, cfg, cert);

    out << "profile certified: residual=" << io::format_double(pr.residual)
        << " tolerance=" << io::format_double(pr.tolerance) << " psi_plus="
        << io::format_double(P.psi_plus) << " psi_minus=" << io::format_double(P.psi_minus)
        << " C=" << io::format_double(P.C) << '\n';
    return kOk;
}

// ------------------------------------------------------------- simulate1d

struct Run1D {
    reduced1d::Trajectory traj;
    bool fitted = false;
    reduced1d::BlowupFit fit;
    std::string fit_message;
};

Run1D run_1d(const reduced1d::Operator& op, const reduced1d::State1D& init, double t_end,
             const reduced1d::Controls& ctl) {
    Run1D r;
    r.traj = reduced1d::integrate(op, init, t_end, ctl);
    if (r.traj.reason != reduced1d::Termination::blowup) {
        r.fit_message = "threshold not reached by t_end";
        return r;
    }
    try {
        r.fit = reduced1d::estimate_blowup_time(
            reduced1d::select_fit_window(r.traj, ctl.blowup_threshold));
        r.fitted = true;
    } catch (const NoBlowupDetected& e) {
        r.fit_message = e.what();
    }
    return r;
}

int cmd_simulate1d(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Simulate1DConfig& c = cfg.simulate1d;
    require_range(c.N >= 8 && c.N <= 8192, "N must lie in [8, 8192]");
    require_range(c.scale > 0.0 && std::isfinite(c.scale), "scale must be positive");
    require_range(c.t_end > 0.0, "t-end must be positive");
    require_range(c.threshold > 0.0, "threshold must be positive");
    require_range(c.rel_tol > 0.0 && c.abs_tol > 0.0, "tolerances must be positive");
    require_range(c.expect == "auto" || c.expect == "blowup" || c.expect == "none",
                  "expect must be auto, blowup or none");
    const bool expect_blowup = c.expect == "blowup" || (c.expect == "auto" && !c.zero);

    const reduced1d::Operator op(c.N, c.H, reduced1d::discretization_from_string(c.discretization));
    std::optional<profile::Profile> pr;
    reduced1d::State1D init;
    if (c.zero) {
        require_range(c.H > 0.0, "H must be positive");
        init = op.make_state(Eigen::VectorXd::Zero(c.N + 1));
    } else {
        pr = make_profile(c.m, c.H, 128, c.segments, profile::GridKind::chebyshev);
        init = op.from_profile(*pr, c.scale);
    }

    reduced1d::Controls ctl;
    ctl.step.rel_tol = c.rel_tol;
    ctl.step.abs_tol = c.abs_tol;
    ctl.blowup_threshold = c.threshold;
    ctl.snapshot_times = c.snapshots;
    const Run1D run = run_1d(op, init, c.t_end, ctl);

    const fs::path dir = prepare_out(c.out);
    write_with(dir / "trajectory.csv", [&](std::ostream& os) {
        reduced1d::write_trajectory_csv(os, run.traj, pr ? &*pr : nullptr, c.scale);
    });

    io::KeyValueDoc res;
    res.set("termination", std::string(reduced1d::to_string(run.traj.reason)));
    res.set("t_final", run.traj.t_final);
    res.set("accepted_steps", static_cast<long long>(run.traj.accepted));
    res.set("max_compatibility", run.traj.max_compatibility);
    res.set("T_expected", 1.0 / c.scale);

    int status = kOk;
    std::string verdict;
    if (run.traj.reason == reduced1d::Termination::step_underflow) {
        verdict = "step_underflow";
        status = kStepUnderflow;
    } else if (run.fitted) {
        verdict = "blowup";
        status = expect_blowup ? kOk : kNoBlowup;
        write_with(dir / "fit.txt", [&](std::ostream& os) { reduced1d::write_fit(os, run.fit); });
        res.set("T_est", run.fit.T_est);
        res.set("r2", run.fit.r2);
    } else {
        verdict = "no_blowup";
        status = expect_blowup ? kNoBlowup : kOk;
        write_text(dir / "fit.txt", "verdict=no_blowup\nreason=" + run.fit_message + "\n");
    }
    res.set("verdict", verdict);
    res.set("status", status);
    write_metadata(dir, cfg, res);

    out << "simulate1d: termination=" << reduced1d::to_string(run.traj.reason)
        << " verdict=" << verdict;
    if (run.fitted)
        out << " T_est=" << io::format_double(run.fit.T_est) << " r2=" << io::format_double(run.fit.r2);
    out << '\n';
    if (status == kNoBlowup && !run.fit_message.empty()) err << run.fit_message << '\n';
    if (status == kStepUnderflow) err << "step size underflow before the blowup threshold\n";
    return status;
}

// ------------------------------------------------------------- simulate2d

int cmd_simulate2d(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Simulate2DConfig& c = cfg.simulate2d;
    require_range(c.k_max >= 3 && c.k_max <= 4096, "k-max must lie in [3, 4096]");
    require_range(c.Nz >= 8 && c.Nz <= 1024, "Nz must lie in [8, 1024]");
    require_range(c.t_end > 0.0 && c.snapshot_dt > 0.0, "t-end and snapshot-dt must be positive");
    require_range(c.nu >= 0.0 && c.filter >= 0.0, "nu and filter must be >= 0");
    require_range(c.trace_tol > 0.0 && c.exhaustion > 0.0, "trace-tol and exhaustion must be positive");
    require_range(c.rel_tol > 0.0 && c.abs_tol > 0.0, "tolerances must be positive");

    const hydro2d::Solver2D solver(c.L, c.H, c.k_max, c.Nz);
    std::optional<profile::Profile> pr;
    hydro2d::Field2D init;
    if (c.zero) {
        init = solver.zero_field(c.nu);
    } else {
        pr = profile::build_profile(profile::params_from_m(c.m, c.H), 128);
        init = solver.init_from_theorem(*pr, c.k, c.nu);
    }

    hydro2d::Controls2D ctl;
    ctl.step.rel_tol = c.rel_tol;
    ctl.step.abs_tol = c.abs_tol;
    ctl.filter_strength = c.filter;
    ctl.filter_order = c.filter_order;
    ctl.exhaustion_fraction = c.exhaustion;
    const auto n_snap = static_cast<int>(std::floor(c.t_end / c.snapshot_dt + 1e-9));
    for (int i = 1; i <= n_snap; ++i) ctl.snapshot_times.push_back(i * c.snapshot_dt);
    if (ctl.snapshot_times.empty() || ctl.snapshot_times.back() < c.t_end)
        ctl.snapshot_times.push_back(c.t_end);

    const hydro2d::Trajectory2D traj =
        hydro2d::integrate2d(solver, init, c.t_end, ctl, pr ? &*pr : nullptr);

    double worst = 0.0;
    for (const auto& s : traj.snapshots)
        if (std::isfinite(s.rel_error)) worst = std::max(worst, s.rel_error);

    int status = kOk;
    std::string verdict = "trace_matched";
    if (traj.reason == hydro2d::Termination2D::step_underflow) {
        status = kStepUnderflow;
        verdict = "step_underflow";
    } else if (traj.reason == hydro2d::Termination2D::resolution_exhausted &&
               traj.snapshots.size() < 2) {
        status = kResolutionExhausted;
        verdict = "exhausted_before_first_checkpoint";
    } else if (worst > c.trace_tol) {
        status = kCertification;
        verdict = "trace_mismatch";
    }

    const fs::path dir = prepare_out(c.out);
    write_with(dir / "trace.csv",
               [&](std::ostream& os) { hydro2d::write_trace_csv(os, traj, solver.z()); });
    write_with(dir / "energy.csv", [&](std::ostream& os) { hydro2d::write_energy_csv(os, traj); });

    io::KeyValueDoc res;
    res.set("termination", std::string(hydro2d::to_string(traj.reason)));
    res.set("t_final", traj.t_final);
    res.set("exhaustion_time", traj.exhaustion_time);
    res.set("last_checkpoint", traj.snapshots.back().t);
    res.set("max_trace_error", worst);
    res.set("max_energy_drift", traj.max_energy_drift);
    res.set("max_symmetry_residual", traj.max_symmetry_residual);
    res.set("retained_modes", solver.K());
    res.set("x_points", solver.M());
    res.set("accepted_steps", static_cast<long long>(traj.accepted));
    res.set("verdict", verdict);
    res.set("status", status);
    write_metadata(dir, cfg, res);

    out << "simulate2d: termination=" << hydro2d::to_string(traj.reason) << " verdict=" << verdict
        << " max_trace_error=" << io::format_double(worst)
        << " last_checkpoint=" << io::format_double(traj.snapshots.back().t) << '\n';
    if (status == kResolutionExhausted) err << "resolution exhausted before the first checkpoint\n";
    return status;
}

// ------------------------------------------------------------------ sweep

struct SweepRow {
    double m = 0.0;
    double psi_plus = NAN, psi_minus = NAN, C = NAN, C_closed = NAN, phi_max = NAN,
           residual = NAN, T_est = NAN, r2 = NAN;
    int status = kOk;
    std::string message;
};

SweepRow sweep_row(const SweepConfig& c, double m) {
    SweepRow row;
    row.m = m;
    try {
        const auto P = profile::params_from_m(m, c.H);
        row.psi_plus = P.psi_plus;
        row.psi_minus = P.psi_minus;
        row.C = P.C;
        row.C_closed = P.H * std::sin(std::numbers::pi * P.q) / std::numbers::pi;
        const auto pr = profile::build_profile(P, c.N);
        row.phi_max = profile::phi_max(pr);
        row.residual = pr.residual;

        const reduced1d::Operator op(c.N1d, c.H);
        reduced1d::Controls ctl;
        ctl.step.rel_tol = c.rel_tol;
        ctl.step.abs_tol = c.abs_tol;
        for (int i = 1; i <= 10; ++i) ctl.snapshot_times.push_back(0.1 * i * c.t_short);
        const auto traj = reduced1d::integrate(op, op.from_profile(pr), c.t_short, ctl);
        std::vector<reduced1d::Sample> samples;
        for (const auto& rec : traj.records) samples.push_back({rec.state.t, rec.max_abs_Wz});
        try {
            const auto fit = reduced1d::estimate_blowup_time(samples);
            row.T_est = fit.T_est;
            row.r2 = fit.r2;
            if (std::fabs(row.T_est - 1.0) > c.T_tol) {
                row.status = kCertification;
                row.message = "T_est outside tolerance";
            }
        } catch (const NoBlowupDetected& e) {
            row.status = kNoBlowup;
            row.message = e.what();
        }
    } catch (const CertificationError& e) {
        row.status = kCertification;
        row.message = e.what();
    } catch (const DomainError& e) {
        row.status = kDomain;
        row.message = e.what();
    } catch (const Error& e) {
        row.status = kCertification;
        row.message = e.what();
    }
    return row;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SweepConfig& c = cfg.sweep;
    if (c.m_list.empty()) {
        err << "sweep: the m list is empty\n";
        return kUsage;
    }
    require_range(c.N >= 16 && c.N1d >= 8, "N >= 16 and N1d >= 8 required");
    require_range(c.t_short > 0.0 && c.t_short < 1.0, "t-short must lie in (0, 1)");
    std::vector<std::future<SweepRow>> futures;
    futures.reserve(c.m_list.size());
    for (double m : c.m_list) futures.push_back(std::async(std::launch::async, sweep_row, c, m));
    std::vector<SweepRow> rows;
    for (auto& f : futures) rows.push_back(f.get());

    const fs::path dir = prepare_out(c.out);
    write_with(dir / "sweep.csv", [&](std::ostream& os) {
        io::write_header(os, {"m", "psi_plus", "psi_minus", "C", "C_closed", "phi_max", "residual",
                              "T_est", "r2", "status"});
        for (const auto& r : rows)
            io::write_row(os, {r.m, r.psi_plus, r.psi_minus, r.C, r.C_closed, r.phi_max, r.residual,
                               r.T_est, r.r2, static_cast<double>(r.status)});
    });

    int status = kOk;
    int failed = 0;
    for (const auto& r : rows) {
        if (r.status != kOk) {
            ++failed;
            if (status == kOk) status = r.status;
            err << "sweep row m=" << io::format_double(r.m) << " failed: " << r.message << '\n';
        }
    }
    io::KeyValueDoc res;
    res.set("rows", static_cast<long long>(rows.size()));
    res.set("failed_rows", failed);
    res.set("status", status);
    write_metadata(dir, cfg, res);
    out << "sweep: " << rows.size() << " rows, " << failed << " failed\n";
    return status;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Self-similar blowup profiles and 1D/2D blowup simulations", "hydroblow"};
    build_app(app, cfg);
    std::vector<std::string> rev(args.rbegin(), args.rend());  // CLI11 consumes from the back
    app.parse(rev);
    for (const char* name : kCommands)
        if (app.got_subcommand(name)) cfg.command = name;
    return cfg;
}

io::KeyValueDoc to_doc(const RunConfig& cfg) {
    io::KeyValueDoc d;
    d.set("command", cfg.command);
    if (cfg.command == "profile") {
        const auto& c = cfg.profile;
        d.set("m", c.m);
        d.set("H", c.H);
        d.set("N", c.N);
        d.set("grid", c.grid);
        d.set("segments", c.segments);
        d.set("residual-tol", c.residual_tol);
        d.set("out", c.out);
    } else if (cfg.command == "simulate1d") {
        const auto& c = cfg.simulate1d;
        d.set("m", c.m);
        d.set("H", c.H);
        d.set("N", c.N);
        d.set("discretization", c.discretization);
        d.set("segments", c.segments);
        d.set("scale", c.scale);
        d.set("zero", c.zero);
        d.set("expect", c.expect);
        d.set("t-end", c.t_end);
        d.set("rel-tol", c.rel_tol);
        d.set("abs-tol", c.abs_tol);
        d.set("threshold", c.threshold);
        d.set("snapshots", join(c.snapshots));
        d.set("out", c.out);
    } else if (cfg.command == "simulate2d") {
        const auto& c = cfg.simulate2d;
        d.set("m", c.m);
        d.set("H", c.H);
        d.set("L", c.L);
        d.set("k", c.k);
        d.set("k-max", c.k_max);
        d.set("Nz", c.Nz);
        d.set("nu", c.nu);
        d.set("filter", c.filter);
        d.set("filter-order", c.filter_order);
        d.set("t-end", c.t_end);
        d.set("snapshot-dt", c.snapshot_dt);
        d.set("trace-tol", c.trace_tol);
        d.set("exhaustion", c.exhaustion);
        d.set("rel-tol", c.rel_tol);
        d.set("abs-tol", c.abs_tol);
        d.set("zero", c.zero);
        d.set("out", c.out);
    } else if (cfg.command == "sweep") {
        const auto& c = cfg.sweep;
        d.set("m-list", join(c.m_list));
        d.set("H", c.H);
        d.set("N", c.N);
        d.set("N1d", c.N1d);
        d.set("T-tol", c.T_tol);
        d.set("t-short", c.t_short);
        d.set("rel-tol", c.rel_tol);
        d.set("abs-tol", c.abs_tol);
        d.set("out", c.out);
    }
    return d;
}

RunConfig from_doc(const io::KeyValueDoc& doc) {
    if (!doc.contains("command")) throw CLI::ValidationError("metadata", "missing command key");
    std::vector<std::string> args{doc.get("command")};
    for (const auto& [k, v] : doc.entries()) {
        if (k == "command" || k.rfind("result.", 0) == 0) continue;
        if (v.empty()) continue;  // an empty list: leave the default
        args.push_back("--" + k + "=" + v);
    }
    return parse_args(args);
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "profile") return cmd_profile(cfg, out);
        if (cfg.command == "simulate1d") return cmd_simulate1d(cfg, out, err);
        if (cfg.command == "simulate2d") return cmd_simulate2d(cfg, out, err);
        if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
        err << "unknown command: " << cfg.command << '\n';
        return kUsage;
    } catch (const CertificationError& e) {
        err << "certification failed: " << e.what() << '\n';
        return kCertification;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const GridMismatch& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kCertification;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const CLI::CallForHelp&) {
        CLI::App app{"Self-similar blowup profiles and 1D/2D blowup simulations", "hydroblow"};
        RunConfig dummy;
        build_app(app, dummy);
        const CLI::App* target = &app;
        for (const auto& a : args)
            if (auto* sub = app.get_subcommand_no_throw(a)) target = sub;
        out << target->help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    return execute(cfg, out, err);
}

}  // namespace hydroblow::cli
