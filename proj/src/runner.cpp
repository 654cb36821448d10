#include "onsflow/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "onsflow/io.hpp"
#include "onsflow/ops.hpp"

namespace onsflow {

namespace {

long long step_count(double t_end, double dt) {
    const double raw = t_end / dt;
    const long long n = std::llround(raw);
    if (n < 1 || std::fabs(n * dt - t_end) > 1e-8 * std::max(1.0, t_end))
        throw ConfigError("time.t_end must be an integral multiple of time.dt");
    return n;
}

double initial_mass(const ChnsState& st) { return field_integral(st.phi); }
double initial_mass(const ElState& st) { return inner(st.director, st.director); }

// Well-prepared initial velocity: the quasi-static Stokes balance of the
// initial force. With strongly damped velocity (large eta) an unbalanced
// start would plant a slowly decaying midpoint-rule oscillation.
void stokes_prepare(FaceVelocity& u, ScalarField& p, double rho, double eta,
                    const FaceVelocity& force, const SolverConfig& cfg) {
    const GridSpec& g = u.grid;
    const double k2min = 39.478 / std::max(g.lx * g.lx, g.ly * g.ly);
    const double alpha = 1e-3 * eta * k2min / rho + 1e-12;
    for (int it = 0; it < 4; ++it) {
        FaceVelocity rhs = lincomb(alpha * rho, u, 1.0, force);
        rhs = lincomb(1.0, rhs, -1.0, gradient_cc_to_face(p));
        auto [uh, rep] = solve_helmholtz_velocity(alpha * rho, eta, rhs, cfg, &u);
        ProjectionResult pr = project_velocity(uh, alpha * rho, cfg);
        u = std::move(pr.u);
        p = lincomb(1.0, p, 1.0, pr.dp);
    }
}

FaceVelocity initial_force(const ChnsState& st, const ChnsParams& prm) {
    ScalarField mu0 = chns_mu_half(st.phi, st.q, st.phi, prm);
    FaceVelocity f = face_scale_by_cc(st.phi, gradient_cc_to_face(mu0));
    f = lincomb(-prm.rho, convect_B(st.u, st.u), -1.0, f);
    return f;
}

FaceVelocity initial_force(const ElState& st, const ElParams& prm) {
    CCVectorField h0 = el_h_half(st.director, st.q, st.director, prm);
    FaceVelocity f = el_elastic_force(st.director, h0, prm.a);
    return lincomb(-prm.rho, convect_B(st.u, st.u), 1.0, f);
}

// Startup: the copy-primed history makes the first midpoint extrapolation
// only first-order accurate, which plants a slowly decaying velocity
// transient. One predicted trial step turns the synthetic previous level
// into a second-order extrapolation basis.
void synthesize_history(ChnsModel& model, ChnsState& st, double dt) {
    ChnsState probe = st;
    step_cn(model, probe, dt);
    st.u_prev = lincomb(2.0, st.u, -1.0, probe.u);
    st.phi_prev = lincomb(2.0, st.phi, -1.0, probe.phi);
    st.q_prev = lincomb(2.0, st.q, -1.0, probe.q);
    st.s_prev = 2.0 * st.s - probe.s;
}

void synthesize_history(ElModel& model, ElState& st, double dt) {
    ElState probe = st;
    step_cn(model, probe, dt);
    st.u_prev = lincomb(2.0, st.u, -1.0, probe.u);
    st.director_prev = lincomb(2.0, st.director, -1.0, probe.director);
    st.q_prev = lincomb(2.0, st.q, -1.0, probe.q);
    st.s_prev = 2.0 * st.s - probe.s;
}

struct OutputSink {
    std::filesystem::path dir;
    std::ofstream energy;
    const SimConfig* cfg = nullptr;
    double next_snapshot = 0.0;
    int snapshot_index = 0;

    void open(const SimConfig& c, const std::string& out_dir, double t_start) {
        cfg = &c;
        dir = out_dir;
        std::filesystem::create_directories(dir);
        energy.open(dir / "energy.csv");
        if (!energy) throw ContractError("cannot open energy.csv under '" + out_dir + "'");
        write_energy_header(energy);
        std::ofstream eff(dir / "effective.cfg");
        eff << c.echo();
        if (c.output.snapshot_interval > 0.0) {
            next_snapshot = 0.0;
            while (next_snapshot < t_start - 1e-12) next_snapshot += c.output.snapshot_interval;
        }
    }

    template <class State>
    bool snapshot_if_due(const State& st, bool force) {
        if (cfg->output.snapshot_interval <= 0.0) return false;
        if (!force && st.t + 1e-12 < next_snapshot) return false;
        Snapshot snap = make_snapshot(st);
        char name[64];
        std::snprintf(name, sizeof(name), "snap_%06d.%s", snapshot_index++,
                      cfg->output.snapshot_format.c_str());
        if (cfg->output.snapshot_format == "vtk")
            write_snapshot_vtk(snap, (dir / name).string());
        else
            write_snapshot_csv(snap, (dir / name).string());
        while (next_snapshot <= st.t + 1e-12) next_snapshot += cfg->output.snapshot_interval;
        return true;
    }

    template <class State>
    void checkpoint(const State& st, SchemeKind scheme, long long step) {
        write_checkpoint(checkpoint_of(st, scheme, step), (dir / "checkpoint.bin").string());
    }
};

template <class Model, class State>
RunResult run_loop(const SimConfig& cfg, Model& model, State& st, long long step0,
                   const std::string& out_dir) {
    RunResult result;
    OutputSink sink;
    sink.open(cfg, out_dir, st.t);

    const long long nsteps = step_count(cfg.t_end, cfg.dt);

    if (step0 == 0) {
        synthesize_history(model, st, cfg.dt);
        EnergyRecord rec;
        rec.t = 0.0;
        rec.total_energy = model.modified_energy(
            st, make_step_context(cfg.scheme, 0.0, cfg.dt, model.relax_time()));
        rec.s_value = st.s;
        rec.s_exact = 1.0;
        rec.mass = initial_mass(st);
        rec.div_inf = field_max_abs(divergence_face_to_cc(st.u));
        write_energy_row(sink.energy, rec);
        result.series.push_back(rec);
        sink.snapshot_if_due(st, true);
    }
    sink.checkpoint(st, cfg.scheme, step0);

    try {
        for (long long n = step0; n < nsteps; ++n) {
            const bool use_cn = (cfg.scheme == SchemeKind::CN) || n == 0;
            EnergyRecord rec =
                use_cn ? step_cn(model, st, cfg.dt) : step_bdf2(model, st, cfg.dt);
            result.series.push_back(rec);
            if ((n + 1) % cfg.output.series_interval == 0 || n + 1 == nsteps)
                write_energy_row(sink.energy, rec);
            const bool last = (n + 1 == nsteps);
            const bool snapped = sink.snapshot_if_due(st, last);
            if (snapped || last) sink.checkpoint(st, cfg.scheme, n + 1);
        }
    } catch (const std::exception& e) {
        std::cerr << "step failed: " << e.what() << "\n";
        sink.energy.flush();
        result.exit_code = 1;
        return result;
    }
    sink.energy.flush();
    return result;
}

}  // namespace

std::vector<DefectSpec> default_defects(const GridSpec& g) {
    // one +2, one -2, one +1, one -1 core stacked vertically mid-domain
    return {
        {0.5 * g.lx, 0.80 * g.ly, +2, 0.0},
        {0.5 * g.lx, 0.60 * g.ly, +1, 0.0},
        {0.5 * g.lx, 0.40 * g.ly, -1, 0.0},
        {0.5 * g.lx, 0.20 * g.ly, -2, 0.0},
    };
}

ChnsState build_initial_chns(const SimConfig& cfg) {
    const GridSpec& g = cfg.grid;
    ScalarField phi0(g, 1.0);
    if (cfg.ic.preset == "equilibrium") {
        phi0 = ScalarField(g, 1.0);
    } else if (cfg.ic.preset == "coarsening") {
        phi0 = chns_ic_coarsening(g, cfg.ic.slope, cfg.ic.noise, cfg.ic.seed);
    } else if (cfg.ic.preset == "ostwald") {
        phi0 = chns_ic_droplets(g, cfg.chns.eps);
    } else if (cfg.ic.preset == "smooth") {
        phi0 = chns_ic_smooth(g, cfg.ic.mean, cfg.ic.amp);
    } else {
        throw ConfigError("unknown chns ic.preset '" + cfg.ic.preset + "'");
    }
    FaceVelocity u0 =
        (cfg.ic.velocity == "vortex") ? velocity_ic_vortex(g, cfg.ic.vortex) : FaceVelocity(g);
    ChnsState st = chns_init(cfg.chns, g, phi0, u0, cfg.solver);
    if (cfg.ic.velocity == "stokes") {
        stokes_prepare(st.u, st.p, cfg.chns.rho, cfg.chns.eta, initial_force(st, cfg.chns),
                       cfg.solver);
        st.u_prev = st.u;
    }
    return st;
}

ElState build_initial_el(const SimConfig& cfg) {
    const GridSpec& g = cfg.grid;
    CCVectorField p0;
    if (cfg.ic.preset == "uniform") {
        p0 = el_ic_uniform(g);
    } else if (cfg.ic.preset == "smooth") {
        p0 = el_ic_smooth(g, cfg.ic.amp);
    } else if (cfg.ic.preset == "defects") {
        const auto defects =
            cfg.ic.defects.empty() ? default_defects(g) : parse_defect_list(cfg.ic.defects);
        p0 = seed_defects(g, defects, cfg.el.eps);
    } else {
        throw ConfigError("unknown el ic.preset '" + cfg.ic.preset + "'");
    }
    FaceVelocity u0 =
        (cfg.ic.velocity == "vortex") ? velocity_ic_vortex(g, cfg.ic.vortex) : FaceVelocity(g);
    ElState st = el_init(cfg.el, g, p0, u0, cfg.solver);
    if (cfg.ic.velocity == "stokes") {
        stokes_prepare(st.u, st.p_pressure, cfg.el.rho, cfg.el.eta, initial_force(st, cfg.el),
                       cfg.solver);
        st.u_prev = st.u;
    }
    return st;
}

RunResult run_simulation(const SimConfig& cfg, const std::string& out_dir,
                         const std::string& restart_path) {
    std::cout << cfg.echo();
    if (cfg.model == ModelKind::Chns) {
        ChnsModel model(cfg.chns, cfg.solver);
        ChnsState st;
        long long step0 = 0;
        if (restart_path.empty()) {
            st = build_initial_chns(cfg);
        } else {
            Checkpoint ck = read_checkpoint(restart_path);
            if (ck.model != ModelKind::Chns || !(ck.grid == cfg.grid))
                throw ConfigError("checkpoint does not match the configured model/grid");
            restore_state(ck, st);
            step0 = ck.step;
        }
        return run_loop(cfg, model, st, step0, out_dir);
    }
    ElModel model(cfg.el, cfg.solver);
    ElState st;
    long long step0 = 0;
    if (restart_path.empty()) {
        st = build_initial_el(cfg);
    } else {
        Checkpoint ck = read_checkpoint(restart_path);
        if (ck.model != ModelKind::El || !(ck.grid == cfg.grid))
            throw ConfigError("checkpoint does not match the configured model/grid");
        restore_state(ck, st);
        step0 = ck.step;
    }
    return run_loop(cfg, model, st, step0, out_dir);
}

ConvergenceTable refine_in_time(const SimConfig& cfg, double dt0, int kmax, double t_end) {
    auto run_one = [&](double dt) -> NamedFields {
        SimConfig c = cfg;
        c.dt = dt;
        c.t_end = t_end;
        const long long nsteps = step_count(t_end, dt);
        NamedFields out;
        if (c.model == ModelKind::Chns) {
            ChnsModel model(c.chns, c.solver);
            ChnsState st = build_initial_chns(c);
            synthesize_history(model, st, dt);
            for (long long n = 0; n < nsteps; ++n) {
                if (c.scheme == SchemeKind::CN || n == 0)
                    step_cn(model, st, dt);
                else
                    step_bdf2(model, st, dt);
            }
            out.scalars.emplace_back("phi", st.phi);
            out.faces.emplace_back("u", st.u);
        } else {
            ElModel model(c.el, c.solver);
            ElState st = build_initial_el(c);
            synthesize_history(model, st, dt);
            for (long long n = 0; n < nsteps; ++n) {
                if (c.scheme == SchemeKind::CN || n == 0)
                    step_cn(model, st, dt);
                else
                    step_bdf2(model, st, dt);
            }
            out.scalars.emplace_back("px", st.director.x);
            out.scalars.emplace_back("py", st.director.y);
            out.faces.emplace_back("u", st.u);
        }
        return out;
    };
    return refine_in_time_core(run_one, dt0, kmax);
}

}  // namespace onsflow
