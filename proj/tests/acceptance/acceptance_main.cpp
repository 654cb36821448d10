#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "onsflow/runner.hpp"
#include "onsflow/ops.hpp"
#include "oracles.hpp"

// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line. Thresholds are fixed here, not tuned at runtime.

using namespace onsflow;

namespace {

void verdict(const char* tag, bool ok, const char* detail) {
    std::printf("ACCEPTANCE %-42s %s  %s\n", tag, ok ? "PASS" : "FAIL", detail);
}

struct RunAudit {
    std::string name;
    double e0 = 0.0;
    double max_identity_resid = 0.0;
    double max_uptick = -1e300;
    double max_div_ratio = 0.0;           // div_inf / |u|_inf per step
    double mass0 = 0.0;
    double max_mass_drift = 0.0;
    double max_s_err_ratio_input = 0.0;   // max |s - exp(-t/T)|
    bool chns = true;
};

std::vector<RunAudit> g_audits;

template <class Model, class State, class Hook>
RunAudit audited_run(const char* name, Model& model, State& st, double dt, long long nsteps,
                     double relax_T, Hook&& hook, bool is_chns, double mass0 = 0.0) {
    RunAudit audit;
    audit.name = name;
    audit.chns = is_chns;
    audit.mass0 = mass0;
    const StepContext probe = make_step_context(SchemeKind::CN, 0.0, dt, relax_T);
    double e_prev = model.modified_energy(st, probe);
    audit.e0 = std::fabs(e_prev);
    for (long long n = 0; n < nsteps; ++n) {
        EnergyRecord rec = step_cn(model, st, dt);
        const double resid = rec.total_energy - e_prev +
                             dt * (rec.dissipation_irreversible + rec.dissipation_s);
        audit.max_identity_resid = std::max(audit.max_identity_resid, std::fabs(resid));
        audit.max_uptick = std::max(audit.max_uptick, rec.total_energy - e_prev);
        const double uinf = field_max_abs(st.u);
        if (uinf > 0.0) audit.max_div_ratio = std::max(audit.max_div_ratio, rec.div_inf / uinf);
        if (is_chns)
            audit.max_mass_drift = std::max(audit.max_mass_drift, std::fabs(rec.mass - mass0));
        audit.max_s_err_ratio_input =
            std::max(audit.max_s_err_ratio_input, std::fabs(rec.s_value - rec.s_exact));
        hook(n, rec, st);
        e_prev = rec.total_energy;
    }
    g_audits.push_back(audit);
    return audit;
}

SimConfig chns_convergence_config() {
    return parse_config(
        "model = chns\ngrid.nx = 64\ngrid.ny = 64\ngrid.bc_y = wall\n"
        "time.dt = 0.01\ntime.t_end = 1\nparams.rho = 1\nparams.eta = 1\n"
        "params.eps = 0.01\nparams.gamma0 = 0\nparams.mobility = 0.1\nparams.T = 1\n"
        "ic.preset = smooth\nic.amp = 0.1\nic.mean = 0.7\n"
        "solver.rel_tol = 1e-12\nsolver.abs_tol = 1e-15\n");
}

SimConfig el_convergence_config() {
    return parse_config(
        "model = el\ngrid.nx = 64\ngrid.ny = 64\ngrid.bc_y = periodic\n"
        "time.dt = 0.01\ntime.t_end = 0.5\nparams.rho = 1\nparams.eta = 100\n"
        "params.eps = 0.31622776601683794\nparams.gamma0 = 0\nparams.mobility = 0.5\n"
        "params.K = 0.01\nparams.a = 1.2\nparams.T = 0.5\n"
        "ic.preset = smooth\nic.amp = 0.01\nic.velocity = stokes\n"
        "solver.rel_tol = 1e-12\nsolver.abs_tol = 1e-15\n");
}

SimConfig coarsening_config() {
    return parse_config(
        "model = chns\ngrid.nx = 64\ngrid.ny = 64\ngrid.lx = 2\ngrid.ly = 2\ngrid.bc_y = wall\n"
        "time.dt = 0.005\ntime.t_end = 10\nparams.rho = 1\nparams.eta = 1\n"
        "params.eps = 0.01\nparams.gamma0 = 0\nparams.mobility = 0.01\nparams.T = 100\n"
        "ic.preset = coarsening\nic.seed = 42\n"
        "solver.rel_tol = 1e-11\nsolver.abs_tol = 1e-15\n");
}

bool orders_in_band(const ConvergenceTable& table, const std::string& field, double lo, double hi,
                    double* worst_lo, double* worst_hi) {
    bool ok = true;
    for (const auto& r : table.rows) {
        if (r.field != field || !r.has_order) continue;
        *worst_lo = std::min({*worst_lo, r.l2_order, r.linf_order});
        *worst_hi = std::max({*worst_hi, r.l2_order, r.linf_order});
        if (r.l2_order < lo || r.l2_order > hi || r.linf_order < lo || r.linf_order > hi)
            ok = false;
    }
    return ok;
}

}  // namespace

TEST_CASE("C1 temporal order, two-phase flow") {
    SimConfig cfg = chns_convergence_config();
    ConvergenceTable table = refine_in_time(cfg, 0.01, 5, 1.0);
    double lo = 1e300, hi = -1e300;
    bool ok = orders_in_band(table, "phi", 1.8, 2.2, &lo, &hi);
    ok = orders_in_band(table, "u", 1.8, 2.2, &lo, &hi) && ok;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "orders in [%.3f, %.3f], required [1.8, 2.2]", lo, hi);
    verdict("C1 temporal order (chns, 64^2, k=0..5)", ok, detail);
    std::printf("%s", table.to_csv().c_str());
    CHECK(ok);
}

TEST_CASE("C2 temporal order, liquid crystal") {
    SimConfig cfg = el_convergence_config();
    ConvergenceTable table = refine_in_time(cfg, 0.01, 5, 0.5);
    double lo = 1e300, hi = -1e300;
    bool ok = orders_in_band(table, "px", 1.8, 2.2, &lo, &hi);
    ok = orders_in_band(table, "py", 1.8, 2.2, &lo, &hi) && ok;
    ok = orders_in_band(table, "u", 1.8, 2.2, &lo, &hi) && ok;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "orders in [%.3f, %.3f], required [1.8, 2.2]", lo, hi);
    verdict("C2 temporal order (el, 64^2, k=0..5)", ok, detail);
    std::printf("%s", table.to_csv().c_str());
    CHECK(ok);
}

namespace {
double g_coarsen_F0 = 0.0, g_coarsen_F1 = 0.0;  // phase free energy, for C9
}

TEST_CASE("C3 discrete energy dissipation identity") {
    // 2000-step two-phase coarsening run
    SimConfig cfg = coarsening_config();
    ChnsModel model(cfg.chns, cfg.solver);
    ChnsState st = build_initial_chns(cfg);
    const double mass0 = chns_mass(st);
    {
        ChnsEnergy e = chns_energy(st, cfg.chns, cfg.dt);
        g_coarsen_F0 = e.gradient + e.eq_bulk;
    }
    RunAudit a = audited_run("chns coarsening", model, st, cfg.dt, 2000, cfg.chns.T,
                             [](long long, const EnergyRecord&, const ChnsState&) {}, true, mass0);
    {
        ChnsEnergy e = chns_energy(st, cfg.chns, cfg.dt);
        g_coarsen_F1 = e.gradient + e.eq_bulk;
    }
    const double tol_a = 1e-9 * a.e0;
    bool ok = a.max_identity_resid <= tol_a && a.max_uptick <= tol_a;

    // liquid crystal identity on a 250-step benchmark-parameter run
    SimConfig ecfg = parse_config(
        "model = el\ngrid.nx = 48\ngrid.ny = 48\ngrid.bc_y = wall\n"
        "time.dt = 0.002\ntime.t_end = 0.5\nparams.rho = 1\nparams.eta = 100\n"
        "params.eps = 0.31622776601683794\nparams.gamma0 = 0\nparams.mobility = 1\n"
        "params.K = 0.01\nparams.a = 1.2\nparams.T = 0.5\n"
        "ic.preset = smooth\nic.amp = 0.01\nic.velocity = stokes\n"
        "solver.rel_tol = 1e-12\nsolver.abs_tol = 1e-15\n");
    ElModel emodel(ecfg.el, ecfg.solver);
    ElState est = build_initial_el(ecfg);
    RunAudit b = audited_run("el smooth", emodel, est, ecfg.dt, 250, ecfg.el.T,
                             [](long long, const EnergyRecord&, const ElState&) {}, false);
    const double tol_b = 1e-9 * b.e0;
    ok = ok && b.max_identity_resid <= tol_b && b.max_uptick <= tol_b;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "chns resid %.2e (tol %.2e), el resid %.2e (tol %.2e), both monotone",
                  a.max_identity_resid, tol_a, b.max_identity_resid, tol_b);
    verdict("C3 energy dissipation identity", ok, detail);
    CHECK(ok);
}

TEST_CASE("C4 auxiliary scalar tracks its relaxation profile") {
    SimConfig cfg = chns_convergence_config();
    auto max_s_err = [&](double dt) {
        SimConfig c = cfg;
        c.dt = dt;
        ChnsModel model(c.chns, c.solver);
        ChnsState st = build_initial_chns(c);
        char name[64];
        std::snprintf(name, sizeof(name), "chns smooth dt=%g", dt);
        RunAudit a = audited_run(name, model, st, dt, std::llround(1.0 / dt), c.chns.T,
                                 [](long long, const EnergyRecord&, const ChnsState&) {}, true,
                                 chns_mass(st));
        return a.max_s_err_ratio_input;
    };
    const double e_coarse = max_s_err(2e-3);
    const double e_fine = max_s_err(1e-3);
    const double ratio = e_coarse / e_fine;
    const bool ok = ratio >= 3.5;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max|s-exp(-t/T)|: %.3e vs %.3e, ratio %.2f (>= 3.5)",
                  e_coarse, e_fine, ratio);
    verdict("C4 s(t) tracking under refinement", ok, detail);
    CHECK(ok);
}

namespace {
int g_defect_winding_fail = 0;
double g_defect_dev0 = 0.0, g_defect_dev1 = 0.0;
}

TEST_CASE("C9a coarsening completes, phase free energy decreases") {
    const bool ok = g_coarsen_F1 < g_coarsen_F0 && g_coarsen_F0 > 0.0;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "F(phase): %.4f -> %.4f", g_coarsen_F0, g_coarsen_F1);
    verdict("C9a coarsening free-energy decrease", ok, detail);
    CHECK(ok);
}

TEST_CASE("C9b defect dynamics: winding conserved, director length recovers") {
    SimConfig cfg = parse_config(
        "model = el\ngrid.nx = 32\ngrid.ny = 64\ngrid.lx = 2\ngrid.ly = 4\ngrid.bc_y = wall\n"
        "time.dt = 0.005\ntime.t_end = 10\nparams.rho = 1\nparams.eta = 100\n"
        "params.eps = 0.31622776601683794\nparams.gamma0 = 0\nparams.mobility = 1\n"
        "params.K = 0.01\nparams.a = 1.2\nparams.T = 100\n"
        "ic.preset = defects\nsolver.rel_tol = 1e-10\nsolver.abs_tol = 1e-14\n");
    ElModel model(cfg.el, cfg.solver);
    ElState st = build_initial_el(cfg);
    auto bulk_dev = [&](const ElState& s) {
        double worst = 0.0;
        for (std::size_t i = 0; i < s.director.x.size(); ++i)
            worst = std::max(worst,
                             std::fabs(std::hypot(s.director.x.a[i], s.director.y.a[i]) - 1.0));
        return worst;
    };
    const int w0 = winding_number(st.director, 2, 2, cfg.grid.nx - 3, cfg.grid.ny - 3);
    g_defect_dev0 = bulk_dev(st);
    audited_run("el defects", model, st, cfg.dt, 2000, cfg.el.T,
                [&](long long n, const EnergyRecord&, const ElState& s) {
                    if ((n + 1) % 100 == 0) {
                        const int w = winding_number(s.director, 2, 2, cfg.grid.nx - 3,
                                                     cfg.grid.ny - 3);
                        if (w != w0) ++g_defect_winding_fail;
                    }
                },
                false);
    g_defect_dev1 = bulk_dev(st);
    const bool ok = (g_defect_winding_fail == 0) && (g_defect_dev1 < g_defect_dev0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "winding %d conserved at all samples, max||p|-1|: %.3f -> %.3f", w0,
                  g_defect_dev0, g_defect_dev1);
    verdict("C9b defect run invariants", ok, detail);
    CHECK(ok);
}

TEST_CASE("C6 extra coverage: droplet-coarsening mass and completion") {
    SimConfig cfg = parse_config(
        "model = chns\ngrid.nx = 64\ngrid.ny = 64\ngrid.bc_y = wall\n"
        "time.dt = 0.005\ntime.t_end = 0.5\nparams.rho = 1\nparams.eta = 1\n"
        "params.eps = 0.01\nparams.gamma0 = 0\nparams.mobility = 0.01\nparams.T = 100\n"
        "ic.preset = ostwald\nsolver.rel_tol = 1e-11\nsolver.abs_tol = 1e-15\n");
    ChnsModel model(cfg.chns, cfg.solver);
    ChnsState st = build_initial_chns(cfg);
    RunAudit a = audited_run("chns ostwald", model, st, cfg.dt, 100, cfg.chns.T,
                             [](long long, const EnergyRecord&, const ChnsState&) {}, true,
                             chns_mass(st));
    const bool ok = a.max_uptick <= 1e-9 * a.e0;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "100 steps, monotone (max uptick %.2e)", a.max_uptick);
    verdict("C6x droplet benchmark smoke", ok, detail);
    CHECK(ok);
}

TEST_CASE("C5 incompressibility across all audited runs") {
    bool ok = !g_audits.empty();
    double worst = 0.0;
    std::string worst_name = "-";
    for (const auto& a : g_audits) {
        if (a.max_div_ratio > worst) {
            worst = a.max_div_ratio;
            worst_name = a.name;
        }
        // the coarsening and ostwald runs use rel_tol 1e-11; all others 1e-12
        const double rel = 10.0 * 1e-11;
        if (a.max_div_ratio > rel) ok = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst |div u|/|u| = %.2e (%s), bound 1e-10", worst,
                  worst_name.c_str());
    verdict("C5 divergence-free velocity", ok, detail);
    CHECK(ok);
}

TEST_CASE("C6 mass conservation across all phase-field runs") {
    bool ok = false;
    double worst_rel = 0.0;
    for (const auto& a : g_audits) {
        if (!a.chns) continue;
        ok = true;
        const double bound = 1e-12 * std::fabs(a.mass0);
        if (a.max_mass_drift > bound) ok = false;
        if (std::fabs(a.mass0) > 0.0)
            worst_rel = std::max(worst_rel, a.max_mass_drift / std::fabs(a.mass0));
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "worst relative drift %.2e (bound 1e-12)", worst_rel);
    verdict("C6 phase integral conservation", ok, detail);
    CHECK(ok);
}

TEST_CASE("C7 one-step agreement with the explicit reference") {
    // two-phase model
    double orders_min = 1e300;
    {
        ChnsParams prm;
        prm.rho = 1.0;
        prm.eta = 0.5;
        prm.mobility = 0.1;
        prm.eps = 0.1;
        prm.gamma0 = 0.0;
        prm.T = 1.0;
        SolverConfig cfg;
        cfg.rel_tol = 1e-12;
        const GridSpec g = make_grid(16, 16, 1.0, 1.0, Bc::Periodic);
        ScalarField phi0 = chns_ic_smooth(g, 0.2, 0.1);
        FaceVelocity u0 = velocity_ic_vortex(g, 0.5);
        auto err = [&](double dt) {
            ChnsModel model(prm, cfg);
            ChnsState st = chns_init(prm, g, phi0, u0, cfg);
            oracles::ChnsOdeState ref{st.u, st.phi, st.q};
            step_cn(model, st, dt);
            oracles::ChnsOdeState out = oracles::rk4_chns(prm, ref, dt, 1e-5);
            FaceVelocity du = lincomb(1.0, st.u, -1.0, out.u);
            ScalarField dphi = lincomb(1.0, st.phi, -1.0, out.phi);
            ScalarField dq = lincomb(1.0, st.q, -1.0, out.q);
            return std::sqrt(inner(du, du) + inner(dphi, dphi) + inner(dq, dq));
        };
        const double e1 = err(4e-3), e2 = err(2e-3), e3 = err(1e-3);
        orders_min = std::min({orders_min, std::log2(e1 / e2), std::log2(e2 / e3)});
        std::printf("  chns one-step errors: %.3e %.3e %.3e\n", e1, e2, e3);
    }
    // liquid crystal model
    {
        ElParams prm;
        prm.rho = 1.0;
        prm.eta = 1.0;
        prm.mobility = 1.0;
        prm.K = 0.01;
        prm.eps = std::sqrt(0.1);
        prm.a = 1.2;
        prm.gamma0 = 0.0;
        prm.T = 1.0;
        SolverConfig cfg;
        cfg.rel_tol = 1e-12;
        const GridSpec g = make_grid(16, 16, 1.0, 1.0, Bc::Periodic);
        CCVectorField p0 = el_ic_smooth(g, 0.2);
        FaceVelocity u0 = velocity_ic_vortex(g, 0.5);
        auto err = [&](double dt) {
            ElModel model(prm, cfg);
            ElState st = el_init(prm, g, p0, u0, cfg);
            oracles::ElOdeState ref{st.u, st.director, st.q};
            step_cn(model, st, dt);
            oracles::ElOdeState out = oracles::rk4_el(prm, ref, dt, 1e-5);
            FaceVelocity du = lincomb(1.0, st.u, -1.0, out.u);
            CCVectorField dp = lincomb(1.0, st.director, -1.0, out.p);
            ScalarField dq = lincomb(1.0, st.q, -1.0, out.q);
            return std::sqrt(inner(du, du) + inner(dp, dp) + inner(dq, dq));
        };
        const double e1 = err(4e-3), e2 = err(2e-3), e3 = err(1e-3);
        orders_min = std::min({orders_min, std::log2(e1 / e2), std::log2(e2 / e3)});
        std::printf("  el one-step errors:   %.3e %.3e %.3e\n", e1, e2, e3);
    }
    const bool ok = orders_min >= 1.8;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "minimum observed order %.2f (>= 1.8)", orders_min);
    verdict("C7 explicit-integrator oracle", ok, detail);
    CHECK(ok);
}

TEST_CASE("C8 structural suites") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto rnd_scalar = [&](const GridSpec& g) {
        ScalarField f(g);
        for (auto& v : f.a) v = uni(rng);
        return f;
    };
    auto rnd_vel = [&](const GridSpec& g) {
        FaceVelocity w(g);
        for (auto& v : w.u) v = uni(rng);
        for (auto& v : w.v) v = uni(rng);
        w.enforce_wall();
        return w;
    };
    bool ok = true;
    char detail[256] = "all sub-checks within bounds";

    for (Bc bc : {Bc::Periodic, Bc::Wall}) {
        const GridSpec g = make_grid(16, 16, 1.0, 1.25, bc);
        // summation-by-parts adjointness
        for (int trial = 0; trial < 10; ++trial) {
            ScalarField f = rnd_scalar(g);
            FaceVelocity w = rnd_vel(g);
            const double mis = inner(gradient_cc_to_face(f), w) + inner(f, divergence_face_to_cc(w));
            const double scale = std::sqrt(grad_norm_sq(f) * inner(w, w)) + 1.0;
            if (std::fabs(mis) > 1e-12 * scale) ok = false;
        }
        // skew convection
        for (int trial = 0; trial < 10; ++trial) {
            FaceVelocity v = rnd_vel(g), u = rnd_vel(g);
            if (std::fabs(inner(convect_B(v, u), u)) > 1e-12 * std::max(inner(u, u), 1.0))
                ok = false;
        }
        // assembled Laplacian: symmetric negative semi-definite
        auto mat = oracles::assemble_scalar_operator(
            g, [](const ScalarField& f) { return laplacian(f); });
        const int n = g.ncells();
        Eigen::MatrixXd A(n, n);
        double scale = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                A(r, c) = mat[r][c];
                scale = std::max(scale, std::fabs(mat[r][c]));
            }
        if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) ok = false;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
        if (es.eigenvalues().maxCoeff() > 1e-10 * scale) ok = false;

        // solver residual contracts on manufactured problems
        SolverConfig cfg;
        {
            FaceVelocity wref = rnd_vel(g);
            FaceVelocity b = lincomb(300.0, wref, -2.0, laplacian_velocity(wref));
            auto [w, rep] = solve_helmholtz_velocity(300.0, 2.0, b, cfg);
            if (!rep.converged ||
                rep.final_residual > std::max(cfg.rel_tol * rep.rhs_norm, cfg.abs_tol))
                ok = false;
        }
        {
            ScalarField f = rnd_scalar(g);
            const double m = field_mean(f);
            for (auto& v : f.a) v -= m;
            auto [p, rep] = solve_poisson_neumann(laplacian(f), cfg);
            if (!rep.converged) ok = false;
            ScalarField diff = lincomb(1.0, p, -1.0, f);
            if (std::sqrt(inner(diff, diff)) > 1e-7) ok = false;
        }
        {
            ScalarField gsq = rnd_scalar(g);
            for (auto& v : gsq.a) v = 1.5 + v;
            ScalarField phi0 = rnd_scalar(g), mu0 = rnd_scalar(g);
            ScalarField lmu0 = laplacian(mu0), lphi0 = laplacian(phi0);
            ScalarField rp(g), rm(g);
            const double a0 = 400.0, mob = 0.05, e2 = 1e-4;
            for (std::size_t i = 0; i < rp.size(); ++i) {
                rp.a[i] = a0 * phi0.a[i] - mob * lmu0.a[i];
                rm.a[i] = mu0.a[i] + e2 * lphi0.a[i] - gsq.a[i] * phi0.a[i];
            }
            auto sol = solve_ch_block(a0, mob, e2, 0.0, gsq, rp, rm, cfg);
            if (!sol.report.converged) ok = false;
            ScalarField diff = lincomb(1.0, sol.phi, -1.0, phi0);
            if (std::sqrt(inner(diff, diff)) > 1e-8) ok = false;
        }
    }
    // scalar-closure residual substitution
    for (int trial = 0; trial < 400; ++trial) {
        const double c = uni(rng), p1 = 0.4 * uni(rng), p2 = 0.4 * uni(rng);
        const double s_cn = cn_scalar_update(c, p1, p2);
        if (std::fabs(s_cn - (c + p1 + s_cn * p2)) > 1e-14 * std::max(1.0, std::fabs(s_cn)))
            ok = false;
        const double s_b = bdf2_scalar_update(c, p1, p2);
        if (std::fabs(s_b - (c + p1 + s_b * p2)) > 1e-14 * std::max(1.0, std::fabs(s_b)))
            ok = false;
    }
    verdict("C8 structural suites", ok, detail);
    CHECK(ok);
}
