#include "onsflow/linsolve.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include "onsflow/kernels.hpp"
#include "onsflow/ops.hpp"

namespace onsflow {

namespace {

double nrm2(const double* x, std::size_t n) {
    return std::sqrt(kernels::active().dot(x, x, n));
}

}  // namespace

SolveReport bicgstab(std::size_t n, const ApplyFn& apply_op, const ApplyFn* precond,
                     const double* b, double* x, const SolverConfig& cfg) {
    cfg.validate();
    const auto& k = kernels::active();
    std::vector<double> r(n), rhat(n), p(n), v(n), s(n), t(n), y(n), z(n), tmp(n);

    const double bnorm = nrm2(b, n);
    const double tol = std::max(cfg.rel_tol * bnorm, cfg.abs_tol);
    // the recursion residual drifts from the true one near round-off; aim a
    // little lower and verify against the true residual between sweeps
    const double inner_tol = 0.5 * tol;

    SolveReport rep;
    rep.rhs_norm = bnorm;

    auto true_residual = [&]() {
        apply_op(x, tmp.data());
        k.lincomb2(tmp.data(), 1.0, b, -1.0, tmp.data(), n);
        return nrm2(tmp.data(), n);
    };

    rep.final_residual = true_residual();
    if (rep.final_residual <= tol) {
        rep.converged = true;
        return rep;
    }

    const int max_outer = 4;
    for (int outer = 0; outer < max_outer && rep.iterations < cfg.max_iter; ++outer) {
        apply_op(x, tmp.data());
        k.lincomb2(r.data(), 1.0, b, -1.0, tmp.data(), n);
        double rnorm = nrm2(r.data(), n);
        if (rnorm <= tol) break;
        std::memcpy(rhat.data(), r.data(), n * sizeof(double));
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        bool breakdown = false;
        int shadow_resets = 0;

        while (rep.iterations < cfg.max_iter && !breakdown) {
            ++rep.iterations;
            double rho_new = k.dot(rhat.data(), r.data(), n);
            if (std::fabs(rho_new) < 1e-300 * std::max(1.0, rnorm * rnorm)) {
                if (++shadow_resets > 8) break;
                std::memcpy(rhat.data(), r.data(), n * sizeof(double));
                rho_new = rnorm * rnorm;
                std::fill(p.begin(), p.end(), 0.0);
                std::fill(v.begin(), v.end(), 0.0);
                rho = 1.0;
                alpha = 1.0;
                omega = 1.0;
            }
            const double beta = (rho_new / rho) * (alpha / omega);
            // p = r + beta*(p - omega*v)
            k.lincomb3(p.data(), 1.0, r.data(), beta, p.data(), -beta * omega, v.data(), n);
            if (precond)
                (*precond)(p.data(), y.data());
            else
                std::memcpy(y.data(), p.data(), n * sizeof(double));
            apply_op(y.data(), v.data());
            const double den = k.dot(rhat.data(), v.data(), n);
            if (den == 0.0) break;
            alpha = rho_new / den;
            k.lincomb2(s.data(), 1.0, r.data(), -alpha, v.data(), n);
            if (nrm2(s.data(), n) <= inner_tol) {
                k.axpy(alpha, y.data(), x, n);
                break;
            }
            if (precond)
                (*precond)(s.data(), z.data());
            else
                std::memcpy(z.data(), s.data(), n * sizeof(double));
            apply_op(z.data(), t.data());
            const double tt = k.dot(t.data(), t.data(), n);
            omega = (tt > 0.0) ? k.dot(t.data(), s.data(), n) / tt : 0.0;
            k.axpy(alpha, y.data(), x, n);
            if (omega != 0.0) k.axpy(omega, z.data(), x, n);
            k.lincomb2(r.data(), 1.0, s.data(), -omega, t.data(), n);
            rnorm = nrm2(r.data(), n);
            if (rnorm <= inner_tol) break;
            if (omega == 0.0) breakdown = true;
            rho = rho_new;
        }

        rep.final_residual = true_residual();
        if (rep.final_residual <= tol) break;
    }

    rep.final_residual = true_residual();
    rep.converged = rep.final_residual <= tol;
    return rep;
}

// ---------------------------------------------------------------------------

std::pair<FaceVelocity, SolveReport> solve_helmholtz_velocity(double alpha, double eta,
                                                              const FaceVelocity& rhs,
                                                              const SolverConfig& cfg,
                                                              const FaceVelocity* guess) {
    if (!(alpha > 0.0)) throw ContractError("solve_helmholtz_velocity: alpha must be positive");
    if (eta < 0.0) throw ContractError("solve_helmholtz_velocity: eta must be nonnegative");
    const GridSpec& g = rhs.grid;
    const std::size_t nu = rhs.u.size(), nv = rhs.v.size(), n = nu + nv;

    std::vector<double> b(n), x(n, 0.0);
    std::memcpy(b.data(), rhs.u.data(), nu * sizeof(double));
    std::memcpy(b.data() + nu, rhs.v.data(), nv * sizeof(double));
    if (guess) {
        require_same_grid(g, guess->grid, "solve_helmholtz_velocity guess");
        std::memcpy(x.data(), guess->u.data(), nu * sizeof(double));
        std::memcpy(x.data() + nu, guess->v.data(), nv * sizeof(double));
    }
    // wall faces are fixed at zero
    if (g.wall_y()) {
        for (int i = 0; i < g.nx; ++i) {
            b[nu + i] = 0.0;
            b[nu + static_cast<std::size_t>(g.ny) * g.nx + i] = 0.0;
            x[nu + i] = 0.0;
            x[nu + static_cast<std::size_t>(g.ny) * g.nx + i] = 0.0;
        }
    }

    std::vector<double> lap(n);
    ApplyFn apply = [&](const double* in, double* out) {
        detail::lap_xface(g, in, lap.data());
        detail::lap_yface(g, in + nu, lap.data() + nu);
        kernels::active().lincomb2(out, alpha, in, -eta, lap.data(), n);
    };

    SpectralHelmholtz pu(g, SpectralHelmholtz::Layout::XFace);
    SpectralHelmholtz pv(g, SpectralHelmholtz::Layout::YFace);
    ApplyFn precond = [&](const double* in, double* out) {
        pu.solve(alpha, eta, in, out);
        pv.solve(alpha, eta, in + nu, out + nu);
    };

    SolveReport rep = bicgstab(n, apply, &precond, b.data(), x.data(), cfg);
    if (!rep.converged)
        throw SolverError("velocity Helmholtz solve did not converge", rep.iterations,
                          rep.final_residual);

    FaceVelocity out(g);
    std::memcpy(out.u.data(), x.data(), nu * sizeof(double));
    std::memcpy(out.v.data(), x.data() + nu, nv * sizeof(double));
    out.enforce_wall();
    return {std::move(out), rep};
}

std::pair<ScalarField, SolveReport> solve_poisson_neumann(const ScalarField& rhs,
                                                          const SolverConfig& cfg,
                                                          const ScalarField* guess) {
    const GridSpec& g = rhs.grid;
    const std::size_t n = rhs.size();
    const double volume = g.cell_volume();

    const double rhs_integral = kernels::sum_compensated(rhs.data(), n) * volume;
    const double rhs_norm = nrm2(rhs.data(), n) * std::sqrt(volume);
    const double compat_tol = 1e-7 * (rhs_norm + 1.0) + 100.0 * cfg.abs_tol;
    if (std::fabs(rhs_integral) > compat_tol)
        throw ContractError("solve_poisson_neumann: incompatible rhs, integral = " +
                            std::to_string(rhs_integral));

    std::vector<double> b(rhs.a);
    const double mean_b = kernels::sum_compensated(b.data(), n) / n;
    for (auto& q : b) q -= mean_b;

    std::vector<double> x(n, 0.0);
    if (guess) {
        require_same_grid(g, guess->grid, "solve_poisson_neumann guess");
        std::memcpy(x.data(), guess->data(), n * sizeof(double));
        const double mx = kernels::sum_compensated(x.data(), n) / n;
        for (auto& q : x) q -= mx;
    }

    ApplyFn apply = [&](const double* in, double* out) { detail::lap_cc(g, in, out); };
    SpectralHelmholtz inv(g, SpectralHelmholtz::Layout::Cell);
    ApplyFn precond = [&](const double* in, double* out) {
        inv.solve(0.0, -1.0, in, out, /*pin_mean=*/true);
        const double m = kernels::active().sum(out, n) / n;
        for (std::size_t q = 0; q < n; ++q) out[q] -= m;
    };

    SolveReport rep = bicgstab(n, apply, &precond, b.data(), x.data(), cfg);
    if (!rep.converged)
        throw SolverError("pressure Poisson solve did not converge", rep.iterations,
                          rep.final_residual);

    ScalarField out(g);
    const double mx = kernels::sum_compensated(x.data(), n) / n;
    for (std::size_t q = 0; q < n; ++q) out.a[q] = x[q] - mx;
    return {std::move(out), rep};
}

ChBlockResult solve_ch_block(double a0, double m, double eps2, double gamma0,
                             const ScalarField& gsq, const ScalarField& rhs_phi,
                             const ScalarField& rhs_mu, const SolverConfig& cfg,
                             const ScalarField* guess) {
    if (!(a0 > 0.0)) throw ContractError("solve_ch_block: a0 must be positive");
    if (m < 0.0) throw ContractError("solve_ch_block: mobility must be nonnegative");
    if (!(eps2 > 0.0)) throw ContractError("solve_ch_block: eps2 must be positive");
    require_same_grid(gsq.grid, rhs_phi.grid, "solve_ch_block");
    require_same_grid(gsq.grid, rhs_mu.grid, "solve_ch_block");
    const GridSpec& g = gsq.grid;
    const std::size_t n = gsq.size();
    for (std::size_t q = 0; q < n; ++q)
        if (gsq.a[q] < -1e-14) throw ContractError("solve_ch_block: gsq must be >= 0 pointwise");

    ChBlockResult res{ScalarField(g), ScalarField(g), {}};

    auto recover_mu = [&](const ScalarField& phi) {
        // mu = rhs_mu - eps2*Lap(phi) + (gamma0 + gsq)*phi
        ScalarField lp = laplacian(phi);
        ScalarField mu(g);
        for (std::size_t q = 0; q < n; ++q)
            mu.a[q] = rhs_mu.a[q] - eps2 * lp.a[q] + (gamma0 + gsq.a[q]) * phi.a[q];
        return mu;
    };

    if (m == 0.0) {
        // rows decouple: phi from the first, mu explicit from the second
        for (std::size_t q = 0; q < n; ++q) res.phi.a[q] = rhs_phi.a[q] / a0;
        res.mu = recover_mu(res.phi);
        res.report.converged = true;
        res.report.final_residual = 0.0;
        return res;
    }

    // eliminated operator: a0*phi + m*eps2*Lap^2(phi) - m*Lap((gamma0+gsq)*phi)
    std::vector<double> t1(n), t2(n), t3(n);
    ApplyFn apply = [&](const double* in, double* out) {
        detail::lap_cc(g, in, t1.data());
        detail::lap_cc(g, t1.data(), t2.data());
        for (std::size_t q = 0; q < n; ++q) t1[q] = (gamma0 + gsq.a[q]) * in[q];
        detail::lap_cc(g, t1.data(), t3.data());
        for (std::size_t q = 0; q < n; ++q)
            out[q] = a0 * in[q] + m * eps2 * t2[q] - m * t3[q];
    };

    // pointwise symbol-diagonal preconditioner
    const double hx2 = g.hx() * g.hx(), hy2 = g.hy() * g.hy();
    const double d = -(2.0 / hx2 + 2.0 / hy2);
    const double d2 = d * d + 2.0 / (hx2 * hx2) + 2.0 / (hy2 * hy2);
    std::vector<double> dinv(n);
    for (std::size_t q = 0; q < n; ++q)
        dinv[q] = 1.0 / (a0 + m * eps2 * d2 - m * d * (gamma0 + gsq.a[q]));
    ApplyFn precond = [&](const double* in, double* out) {
        kernels::active().mul_ew(out, in, dinv.data(), n);
    };

    // b = rhs_phi + m*Lap(rhs_mu)
    std::vector<double> b(n);
    detail::lap_cc(g, rhs_mu.data(), t1.data());
    for (std::size_t q = 0; q < n; ++q) b[q] = rhs_phi.a[q] + m * t1[q];

    std::vector<double> x(n, 0.0);
    if (guess) std::memcpy(x.data(), guess->data(), n * sizeof(double));

    SolveReport rep = bicgstab(n, apply, &precond, b.data(), x.data(), cfg);
    if (!rep.converged)
        throw SolverError("phase-field block solve did not converge", rep.iterations,
                          rep.final_residual);

    std::memcpy(res.phi.data(), x.data(), n * sizeof(double));
    res.mu = recover_mu(res.phi);
    res.report = rep;
    return res;
}

ProjectionResult project_velocity(const FaceVelocity& uhat, double rho_mass,
                                  const SolverConfig& cfg) {
    if (!(rho_mass > 0.0)) throw ContractError("project_velocity: rho_mass must be positive");
    const GridSpec& g = uhat.grid;
    ProjectionResult res{uhat, ScalarField(g), 0.0};
    const auto& k = kernels::active();
    const int max_passes = 3;
    for (int pass = 0; pass < max_passes; ++pass) {
        ScalarField div = divergence_face_to_cc(res.u);
        res.div_inf = field_max_abs(div);
        const double target = 5.0 * cfg.rel_tol * field_max_abs(res.u);
        if (pass > 0 && res.div_inf <= target) break;
        if (res.div_inf == 0.0) break;
        k.scale(rho_mass, div.data(), div.size());
        auto [dp, rep] = solve_poisson_neumann(div, cfg);
        FaceVelocity gdp = gradient_cc_to_face(dp);
        res.u = lincomb(1.0, res.u, -1.0 / rho_mass, gdp);
        res.u.enforce_wall();
        res.dp = (pass == 0) ? std::move(dp) : lincomb(1.0, res.dp, 1.0, dp);
        res.div_inf = field_max_abs(divergence_face_to_cc(res.u));
        if (res.div_inf <= target) break;
    }
    return res;
}

}  // namespace onsflow
