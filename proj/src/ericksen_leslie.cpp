#include "onsflow/ericksen_leslie.hpp"

#include <cmath>
#include <cstring>

#include "onsflow/kernels.hpp"
#include "onsflow/ops.hpp"
#include "onsflow/spectral.hpp"

namespace onsflow {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPi = 3.14159265358979323846;

template <class F>
F hist_rhs(const F& cur, const F& prev, const StepContext& ctx) {
    const double a = 2.0 / ctx.dt;
    const double b = (ctx.scheme == SchemeKind::BDF2) ? -1.0 / (2.0 * ctx.dt) : 0.0;
    return lincomb(a, cur, b, prev);
}

FaceVelocity scaled(const FaceVelocity& f, double a) {
    FaceVelocity out = f;
    const auto& k = kernels::active();
    k.scale(a, out.u.data(), out.u.size());
    k.scale(a, out.v.data(), out.v.size());
    return out;
}

CCVectorField scaled(const CCVectorField& f, double a) {
    CCVectorField out = f;
    const auto& k = kernels::active();
    k.scale(a, out.x.data(), out.x.size());
    k.scale(a, out.y.data(), out.y.size());
    return out;
}

}  // namespace

CCVectorField el_h_half(const CCVectorField& p_half, const ScalarField& q_half,
                        const CCVectorField& p_bar, const ElParams& prm) {
    require_same_grid(p_half.grid(), q_half.grid, "el_h_half");
    require_same_grid(p_half.grid(), p_bar.grid(), "el_h_half");
    const double gfac = kSqrt2 / prm.eps;
    CCVectorField h;
    h.x = laplacian(p_half.x);
    h.y = laplacian(p_half.y);
    for (std::size_t i = 0; i < h.x.size(); ++i) {
        h.x.a[i] = prm.K * h.x.a[i] - prm.gamma0 * p_half.x.a[i] - q_half.a[i] * gfac * p_bar.x.a[i];
        h.y.a[i] = prm.K * h.y.a[i] - prm.gamma0 * p_half.y.a[i] - q_half.a[i] * gfac * p_bar.y.a[i];
    }
    return h;
}

CCVectorField el_transport(const FaceVelocity& w, const CCVectorField& p_bar, double a) {
    require_same_grid(w.grid, p_bar.grid(), "el_transport");
    const GridSpec& g = w.grid;
    CCVectorField wcc = cc_velocity(w);
    Tensor2Field gv = velocity_gradient(w);
    ScalarField dxp1 = dx_cc(p_bar.x), dyp1 = dy_cc(p_bar.x);
    ScalarField dxp2 = dx_cc(p_bar.y), dyp2 = dy_cc(p_bar.y);
    const double cp = 0.5 * (1.0 + a), cm = 0.5 * (1.0 - a);
    CCVectorField out(g);
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        const double adv1 = wcc.x.a[i] * dxp1.a[i] + wcc.y.a[i] * dyp1.a[i];
        const double adv2 = wcc.x.a[i] * dxp2.a[i] + wcc.y.a[i] * dyp2.a[i];
        const double m11 = a * gv.xx.a[i];
        const double m12 = cp * gv.xy.a[i] - cm * gv.yx.a[i];
        const double m21 = cp * gv.yx.a[i] - cm * gv.xy.a[i];
        const double m22 = a * gv.yy.a[i];
        out.x.a[i] = adv1 - (m11 * p_bar.x.a[i] + m12 * p_bar.y.a[i]);
        out.y.a[i] = adv2 - (m21 * p_bar.x.a[i] + m22 * p_bar.y.a[i]);
    }
    return out;
}

namespace {

// Adjoint of el_transport in the velocity slot: face field f with
// <el_transport(w), h> = <w, f> for all w.
FaceVelocity transport_adjoint(const CCVectorField& h, const CCVectorField& p_bar, double a) {
    const GridSpec& g = p_bar.grid();
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const double cp = 0.5 * (1.0 + a), cm = 0.5 * (1.0 - a);

    ScalarField dxp1 = dx_cc(p_bar.x), dyp1 = dy_cc(p_bar.x);
    ScalarField dxp2 = dx_cc(p_bar.y), dyp2 = dy_cc(p_bar.y);

    ScalarField c_ax(g), c_ay(g), c11(g), c12(g), c21(g), c22(g);
    for (std::size_t i = 0; i < c_ax.size(); ++i) {
        const double h1 = h.x.a[i], h2 = h.y.a[i];
        c_ax.a[i] = h1 * dxp1.a[i] + h2 * dxp2.a[i];
        c_ay.a[i] = h1 * dyp1.a[i] + h2 * dyp2.a[i];
        c11.a[i] = a * h1 * p_bar.x.a[i];
        c12.a[i] = cp * h1 * p_bar.y.a[i] - cm * h2 * p_bar.x.a[i];
        c21.a[i] = cp * h2 * p_bar.x.a[i] - cm * h1 * p_bar.y.a[i];
        c22.a[i] = a * h2 * p_bar.y.a[i];
    }
    ScalarField dy_c12 = dy_cc(c12);
    ScalarField dx_c21 = dx_cc(c21);

    FaceVelocity f(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int im = (i == 0) ? nx - 1 : i - 1;
            f.ux(i, j) = 0.5 * (c_ax.at(im, j) + c_ax.at(i, j)) +
                         (c11.at(i, j) - c11.at(im, j)) * ihx +
                         0.5 * (dy_c12.at(im, j) + dy_c12.at(i, j));
        }
    if (g.wall_y()) {
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int jm = j - 1;
                f.vy(i, j) = 0.5 * (c_ay.at(i, jm) + c_ay.at(i, j)) +
                             0.5 * (dx_c21.at(i, jm) + dx_c21.at(i, j)) +
                             (c22.at(i, j) - c22.at(i, jm)) * ihy;
            }
    } else {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int jm = (j == 0) ? ny - 1 : j - 1;
                f.vy(i, j) = 0.5 * (c_ay.at(i, jm) + c_ay.at(i, j)) +
                             0.5 * (dx_c21.at(i, jm) + dx_c21.at(i, j)) +
                             (c22.at(i, j) - c22.at(i, jm)) * ihy;
            }
    }
    f.enforce_wall();
    return f;
}

}  // namespace

FaceVelocity el_elastic_force(const CCVectorField& p_bar, const CCVectorField& h_bar, double a) {
    return scaled(transport_adjoint(h_bar, p_bar, a), -1.0);
}

DirectorSolveResult solve_director_block(double a0, const ElParams& prm, const CCVectorField& g,
                                         const CCVectorField& rhs, const SolverConfig& cfg,
                                         const CCVectorField* guess) {
    if (!(a0 > 0.0)) throw ContractError("solve_director_block: a0 must be positive");
    const GridSpec& grid = rhs.grid();
    const std::size_t nc = rhs.x.size();
    const std::size_t n = 2 * nc;
    const double m = prm.mobility;
    const double shift = a0 + m * prm.gamma0;

    std::vector<double> b(n), x(n, 0.0);
    std::memcpy(b.data(), rhs.x.data(), nc * sizeof(double));
    std::memcpy(b.data() + nc, rhs.y.data(), nc * sizeof(double));
    if (guess) {
        std::memcpy(x.data(), guess->x.data(), nc * sizeof(double));
        std::memcpy(x.data() + nc, guess->y.data(), nc * sizeof(double));
    }

    std::vector<double> lap(n);
    ApplyFn apply = [&](const double* in, double* out) {
        detail::lap_cc(grid, in, lap.data());
        detail::lap_cc(grid, in + nc, lap.data() + nc);
        for (std::size_t i = 0; i < nc; ++i) {
            const double gdotp = g.x.a[i] * in[i] + g.y.a[i] * in[nc + i];
            out[i] = shift * in[i] - m * prm.K * lap[i] + m * gdotp * g.x.a[i];
            out[nc + i] = shift * in[nc + i] - m * prm.K * lap[nc + i] + m * gdotp * g.y.a[i];
        }
    };

    // scalar Helmholtz inverse per component; the rank-one coupling is left
    // to the Krylov iteration
    SpectralHelmholtz inv(grid, SpectralHelmholtz::Layout::Cell);
    ApplyFn precond = [&](const double* in, double* out) {
        inv.solve(shift, m * prm.K, in, out);
        inv.solve(shift, m * prm.K, in + nc, out + nc);
    };

    SolveReport rep = bicgstab(n, apply, &precond, b.data(), x.data(), cfg);
    if (!rep.converged)
        throw SolverError("director block solve did not converge", rep.iterations,
                          rep.final_residual);

    DirectorSolveResult res{CCVectorField(grid), rep};
    std::memcpy(res.p.x.data(), x.data(), nc * sizeof(double));
    std::memcpy(res.p.y.data(), x.data() + nc, nc * sizeof(double));
    return res;
}

ElState el_init(const ElParams& prm, const GridSpec& g, const CCVectorField& director0,
                const FaceVelocity& u0, const SolverConfig& cfg) {
    prm.validate();
    g.validate();
    require_same_grid(g, director0.grid(), "el_init");
    require_same_grid(g, u0.grid, "el_init");

    ElState st;
    st.grid = g;
    st.director = director0;
    st.u = u0;
    st.u.enforce_wall();
    st.p_pressure = ScalarField(g);

    ScalarField div0 = divergence_face_to_cc(st.u);
    if (field_max_abs(div0) > 1e-12 * std::max(1.0, field_max_abs(st.u))) {
        auto [psi, rep] = solve_poisson_neumann(div0, cfg);
        st.u = lincomb(1.0, st.u, -1.0, gradient_cc_to_face(psi));
        st.u.enforce_wall();
    }

    st.q = ScalarField(g);
    const double c = 1.0 / (kSqrt2 * prm.eps);
    for (std::size_t i = 0; i < st.q.size(); ++i) {
        const double n2 = director0.x.a[i] * director0.x.a[i] + director0.y.a[i] * director0.y.a[i];
        st.q.a[i] = c * (n2 - 1.0 - prm.eps * prm.eps * prm.gamma0);
    }

    // consistent initial pressure from the t = 0 momentum balance
    {
        CCVectorField h0 = el_h_half(st.director, st.q, st.director, prm);
        FaceVelocity f = lincomb(-prm.rho, convect_B(st.u, st.u), prm.eta, laplacian_velocity(st.u));
        f = lincomb(1.0, f, 1.0, el_elastic_force(st.director, h0, prm.a));
        ScalarField rhs = divergence_face_to_cc(f);
        if (field_max_abs(rhs) > 0.0) {
            auto [p0, rep] = solve_poisson_neumann(rhs, cfg);
            st.p_pressure = std::move(p0);
        }
    }

    st.s = st.s_prev = 1.0;
    st.t = 0.0;
    st.u_prev = st.u;
    st.director_prev = st.director;
    st.q_prev = st.q;
    return st;
}

ElEnergy el_energy(const ElState& st, const ElParams& prm, double dt) {
    ElEnergy e;
    e.kinetic = 0.5 * prm.rho * inner(st.u, st.u);
    e.pressure_aux = dt * dt / (8.0 * prm.rho) * grad_norm_sq(st.p_pressure);
    e.elastic = 0.5 * prm.K * (grad_norm_sq(st.director.x) + grad_norm_sq(st.director.y));
    e.eq_bulk = 0.5 * prm.gamma0 * inner(st.director, st.director) + 0.5 * inner(st.q, st.q);
    e.s_sq = 0.5 * st.s * st.s;
    e.a0_offset = st.grid.area() * (prm.eps * prm.eps * prm.gamma0 * prm.gamma0 / 4.0 +
                                    prm.gamma0 / 2.0);
    e.total = e.kinetic + e.pressure_aux + e.elastic + e.eq_bulk + e.s_sq - e.a0_offset;
    return e;
}

ElModel::Work ElModel::prepare(const State& st, const StepContext& ctx) const {
    Work w;
    w.p_bar = lincomb(ctx.w_cur, st.director, ctx.w_prev, st.director_prev);
    w.q_bar = lincomb(ctx.w_cur, st.q, ctx.w_prev, st.q_prev);
    w.u_bar = lincomb(ctx.w_cur, st.u, ctx.w_prev, st.u_prev);
    w.h_bar = el_h_half(w.p_bar, w.q_bar, w.p_bar, prm_);
    w.gvec = scaled(w.p_bar, kSqrt2 / prm_.eps);
    w.r_p = el_transport(w.u_bar, w.p_bar, prm_.a);
    FaceVelocity conv = convect_B(w.u_bar, w.u_bar);
    FaceVelocity force = el_elastic_force(w.p_bar, w.h_bar, prm_.a);
    w.r_u = lincomb(prm_.rho, conv, -1.0, force);
    return w;
}

ElModel::Partial ElModel::solve_irreversible_part(const State& st, const Work& w,
                                                  const StepContext& ctx) const {
    Partial part;
    CCVectorField rhs = hist_rhs(st.director, st.director_prev, ctx);
    CCVectorField pa = st.director;
    ScalarField qa = st.q;
    if (ctx.scheme == SchemeKind::BDF2) {
        pa = lincomb(4.0 / 3.0, st.director, -1.0 / 3.0, st.director_prev);
        qa = lincomb(4.0 / 3.0, st.q, -1.0 / 3.0, st.q_prev);
    }
    for (std::size_t i = 0; i < rhs.x.size(); ++i) {
        const double gdotpa = w.gvec.x.a[i] * pa.x.a[i] + w.gvec.y.a[i] * pa.y.a[i];
        const double coef = prm_.mobility * (qa.a[i] - gdotpa);
        rhs.x.a[i] -= coef * w.gvec.x.a[i];
        rhs.y.a[i] -= coef * w.gvec.y.a[i];
    }
    auto ds = solve_director_block(ctx.mass_coeff, prm_, w.gvec, rhs, cfg_, &st.director);
    part.p = std::move(ds.p);
    // molecular field from its defining formula on the solved director
    part.h = CCVectorField(st.grid);
    {
        ScalarField l1 = laplacian(part.p.x), l2 = laplacian(part.p.y);
        for (std::size_t i = 0; i < l1.size(); ++i) {
            const double gdotdp = w.gvec.x.a[i] * (part.p.x.a[i] - pa.x.a[i]) +
                                  w.gvec.y.a[i] * (part.p.y.a[i] - pa.y.a[i]);
            const double qh = qa.a[i] + gdotdp;
            part.h.x.a[i] = prm_.K * l1.a[i] - prm_.gamma0 * part.p.x.a[i] - qh * w.gvec.x.a[i];
            part.h.y.a[i] = prm_.K * l2.a[i] - prm_.gamma0 * part.p.y.a[i] - qh * w.gvec.y.a[i];
        }
    }

    FaceVelocity rhs_u = hist_rhs(st.u, st.u_prev, ctx);
    rhs_u = lincomb(prm_.rho, rhs_u, -1.0, gradient_cc_to_face(st.p_pressure));
    auto hv = solve_helmholtz_velocity(prm_.rho * ctx.mass_coeff, prm_.eta, rhs_u, cfg_, &st.u);
    part.u = std::move(hv.first);
    return part;
}

ElModel::Partial ElModel::solve_reversible_forced_part(const State& st, const Work& w,
                                                       const StepContext& ctx) const {
    Partial part;
    CCVectorField rhs = scaled(w.r_p, -ctx.exp_rid);
    auto ds = solve_director_block(ctx.mass_coeff, prm_, w.gvec, rhs, cfg_, nullptr);
    part.p = std::move(ds.p);
    part.h = CCVectorField(st.grid);
    {
        ScalarField l1 = laplacian(part.p.x), l2 = laplacian(part.p.y);
        for (std::size_t i = 0; i < l1.size(); ++i) {
            const double gdotp = w.gvec.x.a[i] * part.p.x.a[i] + w.gvec.y.a[i] * part.p.y.a[i];
            part.h.x.a[i] = prm_.K * l1.a[i] - prm_.gamma0 * part.p.x.a[i] - gdotp * w.gvec.x.a[i];
            part.h.y.a[i] = prm_.K * l2.a[i] - prm_.gamma0 * part.p.y.a[i] - gdotp * w.gvec.y.a[i];
        }
    }
    FaceVelocity rhs_u = scaled(w.r_u, -ctx.exp_rid);
    auto hv = solve_helmholtz_velocity(prm_.rho * ctx.mass_coeff, prm_.eta, rhs_u, cfg_, nullptr);
    part.u = std::move(hv.first);
    return part;
}

PairingScalars ElModel::reversible_pairing(const State&, const Work& w, const Partial& p1,
                                           const Partial& p2, const StepContext& ctx) const {
    PairingScalars pr;
    pr.with_psi1 = ctx.pair_scale * (inner(p1.u, w.r_u) - inner(p1.h, w.r_p));
    pr.with_psi2 = ctx.pair_scale * (inner(p2.u, w.r_u) - inner(p2.h, w.r_p));
    return pr;
}

StepStats ElModel::assemble(State& st, const Work& w, const Partial& p1, const Partial& p2,
                            double s_val, const StepContext& ctx) {
    const bool cn = ctx.scheme == SchemeKind::CN;
    CCVectorField p_mid = lincomb(1.0, p1.p, s_val, p2.p);
    FaceVelocity uhat_mid = lincomb(1.0, p1.u, s_val, p2.u);
    CCVectorField p_new = cn ? lincomb(2.0, p_mid, -1.0, st.director) : p_mid;
    FaceVelocity uhat_new = cn ? lincomb(2.0, uhat_mid, -1.0, st.u) : uhat_mid;

    ScalarField q_new(st.grid);
    if (cn) {
        for (std::size_t i = 0; i < q_new.size(); ++i) {
            const double gd = w.gvec.x.a[i] * (p_new.x.a[i] - st.director.x.a[i]) +
                              w.gvec.y.a[i] * (p_new.y.a[i] - st.director.y.a[i]);
            q_new.a[i] = st.q.a[i] + gd;
        }
    } else {
        for (std::size_t i = 0; i < q_new.size(); ++i) {
            const double qt = (4.0 * st.q.a[i] - st.q_prev.a[i]) / 3.0;
            const double ptx = (4.0 * st.director.x.a[i] - st.director_prev.x.a[i]) / 3.0;
            const double pty = (4.0 * st.director.y.a[i] - st.director_prev.y.a[i]) / 3.0;
            const double gd = w.gvec.x.a[i] * (p_new.x.a[i] - ptx) +
                              w.gvec.y.a[i] * (p_new.y.a[i] - pty);
            q_new.a[i] = qt + gd;
        }
    }

    ProjectionResult proj = project_velocity(uhat_new, prm_.rho * ctx.mass_coeff, cfg_);
    FaceVelocity u_new = std::move(proj.u);
    ScalarField p_pres_new = lincomb(1.0, st.p_pressure, 1.0, proj.dp);

    StepStats stats;
    {
        CCVectorField p_h = cn ? lincomb(0.5, p_new, 0.5, st.director) : p_new;
        ScalarField q_h = cn ? lincomb(0.5, q_new, 0.5, st.q) : q_new;
        CCVectorField h_h = el_h_half(p_h, q_h, w.p_bar, prm_);
        FaceVelocity uhat_h = cn ? lincomb(0.5, uhat_new, 0.5, st.u) : uhat_new;
        stats.diss_irreversible =
            prm_.mobility * inner(h_h, h_h) + prm_.eta * grad_norm_sq(uhat_h);

        if (check_residuals && cn) {
            const double a0 = ctx.mass_coeff, e = ctx.exp_rid;
            double rp2 = 0.0, sp2 = 0.0;
            for (std::size_t i = 0; i < q_new.size(); ++i) {
                const double rx = a0 * (p_h.x.a[i] - st.director.x.a[i]) +
                                  s_val * e * w.r_p.x.a[i] - prm_.mobility * h_h.x.a[i];
                const double ry = a0 * (p_h.y.a[i] - st.director.y.a[i]) +
                                  s_val * e * w.r_p.y.a[i] - prm_.mobility * h_h.y.a[i];
                rp2 += rx * rx + ry * ry;
                sp2 += a0 * a0 * (1.0 + st.director.x.a[i] * st.director.x.a[i] +
                                  st.director.y.a[i] * st.director.y.a[i]);
            }
            const double s_res =
                std::fabs(a0 * (s_val - st.s) + s_val / ctx.relax_T -
                          e * (inner(uhat_h, w.r_u) - inner(h_h, w.r_p))) /
                (a0 * std::max(std::fabs(st.s), 1.0));
            last_residual = std::max(std::sqrt(rp2 / sp2), s_res);
        }
    }
    stats.div_inf = proj.div_inf;
    stats.mass = inner(st.director, st.director);  // tracked, not conserved

    st.director_prev = std::move(st.director);
    st.q_prev = std::move(st.q);
    st.u_prev = std::move(st.u);
    st.director = std::move(p_new);
    st.q = std::move(q_new);
    st.u = std::move(u_new);
    st.p_pressure = std::move(p_pres_new);
    return stats;
}

double ElModel::modified_energy(const State& st, const StepContext& ctx) const {
    if (ctx.scheme == SchemeKind::CN) return el_energy(st, prm_, ctx.dt).total;
    auto quad = [&](const FaceVelocity& u, const CCVectorField& p, const ScalarField& q) {
        return prm_.rho * inner(u, u) +
               prm_.K * (grad_norm_sq(p.x) + grad_norm_sq(p.y)) +
               prm_.gamma0 * inner(p, p) + inner(q, q);
    };
    FaceVelocity u2 = lincomb(2.0, st.u, -1.0, st.u_prev);
    CCVectorField p2 = lincomb(2.0, st.director, -1.0, st.director_prev);
    ScalarField q2 = lincomb(2.0, st.q, -1.0, st.q_prev);
    const double s2 = 2.0 * st.s - st.s_prev;
    return 0.25 * (quad(st.u, st.director, st.q) + quad(u2, p2, q2)) +
           0.25 * (st.s * st.s + s2 * s2);
}

EnergyRecord el_step(ElState& st, const ElParams& prm, double dt, const SolverConfig& cfg,
                     SchemeKind scheme) {
    ElModel model(prm, cfg);
    return scheme == SchemeKind::CN ? step_cn(model, st, dt) : step_bdf2(model, st, dt);
}

// --- defects ----------------------------------------------------------------

CCVectorField seed_defects(const GridSpec& g, const std::vector<DefectSpec>& defects, double eps) {
    for (const auto& d : defects) {
        if (d.cx < 0.0 || d.cx > g.lx || d.cy < 0.0 || d.cy > g.ly)
            throw ContractError("seed_defects: core center outside the domain");
        if (d.k == 0 || d.k < -2 || d.k > 2)
            throw ContractError("seed_defects: winding index must be in {-2,-1,1,2}");
    }
    CCVectorField p(g, 1.0, 0.0);
    if (defects.empty()) return p;
    const double r_taper = 2.0 * eps;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.cell_x(i), y = g.cell_y(j);
            double theta = 0.0, amp = 1.0;
            for (const auto& d : defects) {
                theta += d.k * std::atan2(y - d.cy, x - d.cx) + d.theta0;
                const double r = std::hypot(x - d.cx, y - d.cy);
                if (r < r_taper) {
                    const double sfrac = r / r_taper;
                    amp *= sfrac * sfrac * (3.0 - 2.0 * sfrac);
                }
            }
            p.x.at(i, j) = amp * std::cos(theta);
            p.y.at(i, j) = amp * std::sin(theta);
        }
    return p;
}

int winding_number(const CCVectorField& p, int i0, int j0, int i1, int j1) {
    const GridSpec& g = p.grid();
    if (i0 < 0 || j0 < 0 || i1 >= g.nx || j1 >= g.ny || i0 >= i1 || j0 >= j1)
        throw ContractError("winding_number: bad loop rectangle");
    std::vector<std::pair<int, int>> loop;
    for (int i = i0; i < i1; ++i) loop.emplace_back(i, j0);
    for (int j = j0; j < j1; ++j) loop.emplace_back(i1, j);
    for (int i = i1; i > i0; --i) loop.emplace_back(i, j1);
    for (int j = j1; j > j0; --j) loop.emplace_back(i0, j);
    loop.emplace_back(i0, j0);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
        const double ax = p.x.at(loop[k].first, loop[k].second);
        const double ay = p.y.at(loop[k].first, loop[k].second);
        const double bx = p.x.at(loop[k + 1].first, loop[k + 1].second);
        const double by = p.y.at(loop[k + 1].first, loop[k + 1].second);
        total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

CCVectorField el_ic_smooth(const GridSpec& g, double amp) {
    // cos(2 pi y / ly) has zero normal derivative at the walls, so the same
    // profile serves both boundary settings
    CCVectorField p(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double cx = std::cos(2.0 * kPi * g.cell_x(i) / g.lx);
            const double cy = std::cos(2.0 * kPi * g.cell_y(j) / g.ly);
            p.x.at(i, j) = amp * cy * cx;
            p.y.at(i, j) = amp * cx * cy;
        }
    return p;
}

CCVectorField el_ic_uniform(const GridSpec& g) { return CCVectorField(g, 1.0, 0.0); }

}  // namespace onsflow
