#include "oracles.hpp"

#include <complex>

#include "onsflow/linsolve.hpp"
#include "onsflow/ops.hpp"

namespace oracles {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

SolverConfig tight_cfg() {
    SolverConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-15;
    return cfg;
}

FaceVelocity leray_project(const FaceVelocity& f) {
    ScalarField div = divergence_face_to_cc(f);
    if (field_max_abs(div) == 0.0) return f;
    auto [psi, rep] = solve_poisson_neumann(div, tight_cfg());
    FaceVelocity out = lincomb(1.0, f, -1.0, gradient_cc_to_face(psi));
    out.enforce_wall();
    return out;
}

struct ChnsDeriv {
    FaceVelocity du;
    ScalarField dphi, dq;
};

ChnsDeriv chns_rhs(const ChnsParams& prm, const ChnsOdeState& y) {
    ChnsDeriv d;
    ScalarField mu = laplacian(y.phi);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double g = kSqrt2 * y.phi.a[i];
        mu.a[i] = -prm.eps * prm.eps * mu.a[i] + prm.gamma0 * y.phi.a[i] + y.q.a[i] * g;
    }
    // d phi = -div(u phi) + M lap(mu)
    ScalarField conv = convect_scalar(y.u, y.phi);
    ScalarField lmu = laplacian(mu);
    d.dphi = ScalarField(y.phi.grid);
    for (std::size_t i = 0; i < d.dphi.size(); ++i)
        d.dphi.a[i] = -conv.a[i] + prm.mobility * lmu.a[i];
    // d q = g(phi) d phi
    d.dq = ScalarField(y.phi.grid);
    for (std::size_t i = 0; i < d.dq.size(); ++i)
        d.dq.a[i] = kSqrt2 * y.phi.a[i] * d.dphi.a[i];
    // rho du = P[-rho B(u,u) + eta lap(u) - phi grad(mu)]
    FaceVelocity conv_u = convect_B(y.u, y.u);
    FaceVelocity visc = laplacian_velocity(y.u);
    FaceVelocity cap = face_scale_by_cc(y.phi, gradient_cc_to_face(mu));
    FaceVelocity force = lincomb(-prm.rho, conv_u, prm.eta, visc);
    force = lincomb(1.0, force, -1.0, cap);
    force = leray_project(force);
    d.du = lincomb(1.0 / prm.rho, force, 0.0, force);
    return d;
}

ChnsOdeState axpy_state(const ChnsOdeState& y, double a, const ChnsDeriv& d) {
    ChnsOdeState out = y;
    out.u = lincomb(1.0, y.u, a, d.du);
    out.phi = lincomb(1.0, y.phi, a, d.dphi);
    out.q = lincomb(1.0, y.q, a, d.dq);
    return out;
}

struct ElDeriv {
    FaceVelocity du;
    CCVectorField dp;
    ScalarField dq;
};

ElDeriv el_rhs(const ElParams& prm, const ElOdeState& y) {
    ElDeriv d;
    CCVectorField h;
    h.x = laplacian(y.p.x);
    h.y = laplacian(y.p.y);
    const double gfac = kSqrt2 / prm.eps;
    for (std::size_t i = 0; i < h.x.size(); ++i) {
        h.x.a[i] = prm.K * h.x.a[i] - prm.gamma0 * y.p.x.a[i] - y.q.a[i] * gfac * y.p.x.a[i];
        h.y.a[i] = prm.K * h.y.a[i] - prm.gamma0 * y.p.y.a[i] - y.q.a[i] * gfac * y.p.y.a[i];
    }
    CCVectorField transport = el_transport(y.u, y.p, prm.a);
    d.dp = CCVectorField(y.q.grid);
    for (std::size_t i = 0; i < d.dp.x.size(); ++i) {
        d.dp.x.a[i] = -transport.x.a[i] + prm.mobility * h.x.a[i];
        d.dp.y.a[i] = -transport.y.a[i] + prm.mobility * h.y.a[i];
    }
    d.dq = ScalarField(y.q.grid);
    for (std::size_t i = 0; i < d.dq.size(); ++i)
        d.dq.a[i] = gfac * (y.p.x.a[i] * d.dp.x.a[i] + y.p.y.a[i] * d.dp.y.a[i]);
    FaceVelocity conv_u = convect_B(y.u, y.u);
    FaceVelocity visc = laplacian_velocity(y.u);
    FaceVelocity force = el_elastic_force(y.p, h, prm.a);
    FaceVelocity rhs = lincomb(-prm.rho, conv_u, prm.eta, visc);
    rhs = lincomb(1.0, rhs, 1.0, force);
    rhs = leray_project(rhs);
    d.du = lincomb(1.0 / prm.rho, rhs, 0.0, rhs);
    return d;
}

ElOdeState axpy_state(const ElOdeState& y, double a, const ElDeriv& d) {
    ElOdeState out = y;
    out.u = lincomb(1.0, y.u, a, d.du);
    out.p = lincomb(1.0, y.p, a, d.dp);
    out.q = lincomb(1.0, y.q, a, d.dq);
    return out;
}

}  // namespace

ChnsOdeState rk4_chns(const ChnsParams& prm, ChnsOdeState y, double t_end, double dt) {
    const long long n = std::llround(t_end / dt);
    y.u = leray_project(y.u);
    for (long long k = 0; k < n; ++k) {
        const ChnsDeriv k1 = chns_rhs(prm, y);
        const ChnsDeriv k2 = chns_rhs(prm, axpy_state(y, 0.5 * dt, k1));
        const ChnsDeriv k3 = chns_rhs(prm, axpy_state(y, 0.5 * dt, k2));
        const ChnsDeriv k4 = chns_rhs(prm, axpy_state(y, dt, k3));
        const double c = dt / 6.0;
        y.u = lincomb(1.0, y.u, c, k1.du);
        y.u = lincomb(1.0, y.u, 2.0 * c, k2.du);
        y.u = lincomb(1.0, y.u, 2.0 * c, k3.du);
        y.u = lincomb(1.0, y.u, c, k4.du);
        y.phi = lincomb(1.0, y.phi, c, k1.dphi);
        y.phi = lincomb(1.0, y.phi, 2.0 * c, k2.dphi);
        y.phi = lincomb(1.0, y.phi, 2.0 * c, k3.dphi);
        y.phi = lincomb(1.0, y.phi, c, k4.dphi);
        y.q = lincomb(1.0, y.q, c, k1.dq);
        y.q = lincomb(1.0, y.q, 2.0 * c, k2.dq);
        y.q = lincomb(1.0, y.q, 2.0 * c, k3.dq);
        y.q = lincomb(1.0, y.q, c, k4.dq);
    }
    return y;
}

ElOdeState rk4_el(const ElParams& prm, ElOdeState y, double t_end, double dt) {
    const long long n = std::llround(t_end / dt);
    y.u = leray_project(y.u);
    for (long long k = 0; k < n; ++k) {
        const ElDeriv k1 = el_rhs(prm, y);
        const ElDeriv k2 = el_rhs(prm, axpy_state(y, 0.5 * dt, k1));
        const ElDeriv k3 = el_rhs(prm, axpy_state(y, 0.5 * dt, k2));
        const ElDeriv k4 = el_rhs(prm, axpy_state(y, dt, k3));
        const double c = dt / 6.0;
        y.u = lincomb(1.0, y.u, c, k1.du);
        y.u = lincomb(1.0, y.u, 2.0 * c, k2.du);
        y.u = lincomb(1.0, y.u, 2.0 * c, k3.du);
        y.u = lincomb(1.0, y.u, c, k4.du);
        y.p = lincomb(1.0, y.p, c, k1.dp);
        y.p = lincomb(1.0, y.p, 2.0 * c, k2.dp);
        y.p = lincomb(1.0, y.p, 2.0 * c, k3.dp);
        y.p = lincomb(1.0, y.p, c, k4.dp);
        y.q = lincomb(1.0, y.q, c, k1.dq);
        y.q = lincomb(1.0, y.q, 2.0 * c, k2.dq);
        y.q = lincomb(1.0, y.q, 2.0 * c, k3.dq);
        y.q = lincomb(1.0, y.q, c, k4.dq);
    }
    return y;
}

std::vector<std::vector<double>> assemble_scalar_operator(
    const GridSpec& g, const std::function<ScalarField(const ScalarField&)>& op) {
    const int n = g.ncells();
    std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
    for (int c = 0; c < n; ++c) {
        ScalarField e(g);
        e.a[c] = 1.0;
        ScalarField col = op(e);
        for (int r = 0; r < n; ++r) mat[r][c] = col.a[r];
    }
    return mat;
}

void dft_ch_block_solve(const GridSpec& g, double a0, double m, double eps2, double gamma0,
                        double gsq_const, const ScalarField& rhs_phi, const ScalarField& rhs_mu,
                        ScalarField& phi, ScalarField& mu) {
    using cplx = std::complex<double>;
    const int nx = g.nx, ny = g.ny;
    const double pi = 3.14159265358979323846;
    auto dft = [&](const ScalarField& f, std::vector<cplx>& out) {
        out.assign(static_cast<std::size_t>(nx) * ny, {0.0, 0.0});
        for (int ky = 0; ky < ny; ++ky)
            for (int kx = 0; kx < nx; ++kx) {
                cplx acc(0.0, 0.0);
                for (int j = 0; j < ny; ++j)
                    for (int i = 0; i < nx; ++i) {
                        const double ang = -2.0 * pi * (double(kx) * i / nx + double(ky) * j / ny);
                        acc += f.at(i, j) * cplx(std::cos(ang), std::sin(ang));
                    }
                out[static_cast<std::size_t>(ky) * nx + kx] = acc;
            }
    };
    std::vector<cplx> fphi, fmu;
    dft(rhs_phi, fphi);
    dft(rhs_mu, fmu);
    std::vector<cplx> xphi(fphi.size()), xmu(fmu.size());
    for (int ky = 0; ky < ny; ++ky)
        for (int kx = 0; kx < nx; ++kx) {
            const double lam = -((2.0 - 2.0 * std::cos(2.0 * pi * kx / nx)) / (g.hx() * g.hx()) +
                                 (2.0 - 2.0 * std::cos(2.0 * pi * ky / ny)) / (g.hy() * g.hy()));
            const std::size_t q = static_cast<std::size_t>(ky) * nx + kx;
            const double det = a0 + m * lam * (eps2 * lam - gamma0 - gsq_const);
            xphi[q] = (fphi[q] + m * lam * fmu[q]) / det;
            xmu[q] = (a0 * fmu[q] - (eps2 * lam - gamma0 - gsq_const) * fphi[q]) / det;
        }
    auto idft = [&](const std::vector<cplx>& f, ScalarField& out) {
        out = ScalarField(g);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                cplx acc(0.0, 0.0);
                for (int ky = 0; ky < ny; ++ky)
                    for (int kx = 0; kx < nx; ++kx) {
                        const double ang = 2.0 * pi * (double(kx) * i / nx + double(ky) * j / ny);
                        acc += f[static_cast<std::size_t>(ky) * nx + kx] *
                               cplx(std::cos(ang), std::sin(ang));
                    }
                out.at(i, j) = acc.real() / (nx * ny);
            }
    };
    idft(xphi, phi);
    idft(xmu, mu);
}

}  // namespace oracles
