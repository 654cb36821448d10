#include "onsflow/ops.hpp"

#include <cmath>

#include "onsflow/kernels.hpp"

namespace onsflow {

namespace {
inline std::size_t idx(const GridSpec& g, int i, int j) {
    return static_cast<std::size_t>(j) * g.nx + i;
}
inline int wrap(int i, int n) { return (i % n + n) % n; }
}  // namespace

namespace detail {

// Cell-centered Laplacian: periodic x, y per grid (wrap or zero-flux ghosts).
void lap_cc(const GridSpec& g, const double* f, double* out) {
    const auto& k = kernels::active();
    const int nx = g.nx, ny = g.ny;
    const double cx = 1.0 / (g.hx() * g.hx());
    const double cy = 1.0 / (g.hy() * g.hy());
    const double c0 = -2.0 * cx - 2.0 * cy;
    for (int j = 0; j < ny; ++j) {
        const double* mid = f + idx(g, 0, j);
        const double* ym;
        const double* yp;
        double cym = cy, cyp = cy;
        if (g.wall_y()) {
            ym = (j == 0) ? mid : f + idx(g, 0, j - 1);
            yp = (j == ny - 1) ? mid : f + idx(g, 0, j + 1);
        } else {
            ym = f + idx(g, 0, wrap(j - 1, ny));
            yp = f + idx(g, 0, wrap(j + 1, ny));
        }
        double* o = out + idx(g, 0, j);
        k.stencil5(o, c0, cx, cym, cyp, mid, ym, yp, nx);
        o[0] = c0 * mid[0] + cx * (mid[nx - 1] + mid[1]) + cym * ym[0] + cyp * yp[0];
        o[nx - 1] =
            c0 * mid[nx - 1] + cx * (mid[nx - 2] + mid[0]) + cym * ym[nx - 1] + cyp * yp[nx - 1];
    }
}

// x-face Laplacian (u component): periodic x; wall rows use odd ghost
// reflection so the tangential velocity vanishes at the wall itself.
void lap_xface(const GridSpec& g, const double* f, double* out) {
    const auto& k = kernels::active();
    const int nx = g.nx, ny = g.ny;
    const double cx = 1.0 / (g.hx() * g.hx());
    const double cy = 1.0 / (g.hy() * g.hy());
    const double c0 = -2.0 * cx - 2.0 * cy;
    for (int j = 0; j < ny; ++j) {
        const double* mid = f + idx(g, 0, j);
        const double* ym;
        const double* yp;
        double cym = cy, cyp = cy;
        if (g.wall_y()) {
            if (j == 0) {
                ym = mid;
                cym = -cy;
            } else {
                ym = f + idx(g, 0, j - 1);
            }
            if (j == ny - 1) {
                yp = mid;
                cyp = -cy;
            } else {
                yp = f + idx(g, 0, j + 1);
            }
        } else {
            ym = f + idx(g, 0, wrap(j - 1, ny));
            yp = f + idx(g, 0, wrap(j + 1, ny));
        }
        double* o = out + idx(g, 0, j);
        k.stencil5(o, c0, cx, cym, cyp, mid, ym, yp, nx);
        o[0] = c0 * mid[0] + cx * (mid[nx - 1] + mid[1]) + cym * ym[0] + cyp * yp[0];
        o[nx - 1] =
            c0 * mid[nx - 1] + cx * (mid[nx - 2] + mid[0]) + cym * ym[nx - 1] + cyp * yp[nx - 1];
    }
}

// y-face Laplacian (v component). Wall faces are fixed zero degrees of
// freedom: output rows 0 and ny are zeroed, interior rows read them as data.
void lap_yface(const GridSpec& g, const double* f, double* out) {
    const auto& k = kernels::active();
    const int nx = g.nx;
    const double cx = 1.0 / (g.hx() * g.hx());
    const double cy = 1.0 / (g.hy() * g.hy());
    const double c0 = -2.0 * cx - 2.0 * cy;
    if (g.wall_y()) {
        const int nvy = g.ny + 1;
        for (int i = 0; i < nx; ++i) {
            out[idx(g, i, 0)] = 0.0;
            out[idx(g, i, nvy - 1)] = 0.0;
        }
        for (int j = 1; j < nvy - 1; ++j) {
            const double* mid = f + idx(g, 0, j);
            const double* ym = f + idx(g, 0, j - 1);
            const double* yp = f + idx(g, 0, j + 1);
            double* o = out + idx(g, 0, j);
            k.stencil5(o, c0, cx, cy, cy, mid, ym, yp, nx);
            o[0] = c0 * mid[0] + cx * (mid[nx - 1] + mid[1]) + cy * (ym[0] + yp[0]);
            o[nx - 1] =
                c0 * mid[nx - 1] + cx * (mid[nx - 2] + mid[0]) + cy * (ym[nx - 1] + yp[nx - 1]);
        }
    } else {
        const int ny = g.ny;
        for (int j = 0; j < ny; ++j) {
            const double* mid = f + idx(g, 0, j);
            const double* ym = f + idx(g, 0, wrap(j - 1, ny));
            const double* yp = f + idx(g, 0, wrap(j + 1, ny));
            double* o = out + idx(g, 0, j);
            k.stencil5(o, c0, cx, cy, cy, mid, ym, yp, nx);
            o[0] = c0 * mid[0] + cx * (mid[nx - 1] + mid[1]) + cy * (ym[0] + yp[0]);
            o[nx - 1] =
                c0 * mid[nx - 1] + cx * (mid[nx - 2] + mid[0]) + cy * (ym[nx - 1] + yp[nx - 1]);
        }
    }
}

}  // namespace detail

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    detail::lap_cc(f.grid, f.data(), out.data());
    return out;
}

FaceVelocity gradient_cc_to_face(const ScalarField& f) {
    const GridSpec& g = f.grid;
    FaceVelocity out(g);
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    for (int j = 0; j < ny; ++j) {
        out.ux(0, j) = (f.at(0, j) - f.at(nx - 1, j)) * ihx;
        for (int i = 1; i < nx; ++i) out.ux(i, j) = (f.at(i, j) - f.at(i - 1, j)) * ihx;
    }
    if (g.wall_y()) {
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i) out.vy(i, j) = (f.at(i, j) - f.at(i, j - 1)) * ihy;
        // wall faces stay zero: no normal flux
    } else {
        for (int j = 0; j < ny; ++j) {
            const int jm = wrap(j - 1, ny);
            for (int i = 0; i < nx; ++i) out.vy(i, j) = (f.at(i, j) - f.at(i, jm)) * ihy;
        }
    }
    return out;
}

ScalarField divergence_face_to_cc(const FaceVelocity& w) {
    const GridSpec& g = w.grid;
    ScalarField out(g);
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    for (int j = 0; j < ny; ++j) {
        const int jp = g.wall_y() ? j + 1 : wrap(j + 1, ny);
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            out.at(i, j) = (w.ux(ip, j) - w.ux(i, j)) * ihx + (w.vy(i, jp) - w.vy(i, j)) * ihy;
        }
    }
    return out;
}

FaceVelocity laplacian_velocity(const FaceVelocity& w) {
    FaceVelocity out(w.grid);
    detail::lap_xface(w.grid, w.u.data(), out.u.data());
    detail::lap_yface(w.grid, w.v.data(), out.v.data());
    return out;
}

double inner(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid, g.grid, "inner(scalar)");
    return kernels::active().dot(f.data(), g.data(), f.size()) * f.grid.cell_volume();
}

double inner(const FaceVelocity& a, const FaceVelocity& b) {
    require_same_grid(a.grid, b.grid, "inner(face)");
    const auto& k = kernels::active();
    double s = k.dot(a.u.data(), b.u.data(), a.u.size()) + k.dot(a.v.data(), b.v.data(), a.v.size());
    return s * a.grid.cell_volume();
}

double inner(const CCVectorField& a, const CCVectorField& b) {
    return inner(a.x, b.x) + inner(a.y, b.y);
}

double grad_norm_sq(const ScalarField& f) {
    FaceVelocity gf = gradient_cc_to_face(f);
    return inner(gf, gf);
}

double grad_norm_sq(const FaceVelocity& w) {
    const GridSpec& g = w.grid;
    const int nx = g.nx, ny = g.ny;
    const double cx = 1.0 / (g.hx() * g.hx());
    const double cy = 1.0 / (g.hy() * g.hy());
    double acc = 0.0;
    // u component: periodic x pairs
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            const double d = w.ux(ip, j) - w.ux(i, j);
            acc += cx * d * d;
        }
    if (g.wall_y()) {
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double d = w.ux(i, j + 1) - w.ux(i, j);
                acc += cy * d * d;
            }
        // odd-ghost wall contribution of the tangential component
        for (int i = 0; i < nx; ++i)
            acc += cy * 2.0 * (w.ux(i, 0) * w.ux(i, 0) + w.ux(i, ny - 1) * w.ux(i, ny - 1));
    } else {
        for (int j = 0; j < ny; ++j) {
            const int jp = wrap(j + 1, ny);
            for (int i = 0; i < nx; ++i) {
                const double d = w.ux(i, jp) - w.ux(i, j);
                acc += cy * d * d;
            }
        }
    }
    // v component
    const int nvy = g.nvy();
    for (int j = 0; j < nvy; ++j)
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            const double d = w.vy(ip, j) - w.vy(i, j);
            acc += cx * d * d;
        }
    if (g.wall_y()) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double d = w.vy(i, j + 1) - w.vy(i, j);
                acc += cy * d * d;
            }
    } else {
        for (int j = 0; j < ny; ++j) {
            const int jp = wrap(j + 1, ny);
            for (int i = 0; i < nx; ++i) {
                const double d = w.vy(i, jp) - w.vy(i, j);
                acc += cy * d * d;
            }
        }
    }
    return acc * g.cell_volume();
}

FaceVelocity face_scale_by_cc(const ScalarField& f, const FaceVelocity& w) {
    require_same_grid(f.grid, w.grid, "face_scale_by_cc");
    const GridSpec& g = f.grid;
    FaceVelocity out(g);
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j) {
        out.ux(0, j) = 0.5 * (f.at(nx - 1, j) + f.at(0, j)) * w.ux(0, j);
        for (int i = 1; i < nx; ++i)
            out.ux(i, j) = 0.5 * (f.at(i - 1, j) + f.at(i, j)) * w.ux(i, j);
    }
    if (g.wall_y()) {
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                out.vy(i, j) = 0.5 * (f.at(i, j - 1) + f.at(i, j)) * w.vy(i, j);
    } else {
        for (int j = 0; j < ny; ++j) {
            const int jm = wrap(j - 1, ny);
            for (int i = 0; i < nx; ++i)
                out.vy(i, j) = 0.5 * (f.at(i, jm) + f.at(i, j)) * w.vy(i, j);
        }
    }
    return out;
}

ScalarField convect_scalar(const FaceVelocity& u, const ScalarField& f) {
    return divergence_face_to_cc(face_scale_by_cc(f, u));
}

CCVectorField cc_velocity(const FaceVelocity& w) {
    const GridSpec& g = w.grid;
    CCVectorField out(g);
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            out.x.at(i, j) = 0.5 * (w.ux(i, j) + w.ux(ip, j));
        }
    for (int j = 0; j < ny; ++j) {
        const int jp = g.wall_y() ? j + 1 : wrap(j + 1, ny);
        for (int i = 0; i < nx; ++i) out.y.at(i, j) = 0.5 * (w.vy(i, j) + w.vy(i, jp));
    }
    return out;
}

ScalarField dx_cc(const ScalarField& f) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const int nx = g.nx, ny = g.ny;
    const double c = 0.5 / g.hx();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            const int im = (i == 0) ? nx - 1 : i - 1;
            out.at(i, j) = c * (f.at(ip, j) - f.at(im, j));
        }
    return out;
}

ScalarField dy_cc(const ScalarField& f) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const int nx = g.nx, ny = g.ny;
    const double c = 0.5 / g.hy();
    for (int j = 0; j < ny; ++j) {
        int jm = j - 1, jp = j + 1;
        if (g.wall_y()) {
            if (jm < 0) jm = 0;           // even reflection: zero normal derivative
            if (jp > ny - 1) jp = ny - 1;
        } else {
            jm = wrap(jm, ny);
            jp = wrap(jp, ny);
        }
        for (int i = 0; i < nx; ++i) out.at(i, j) = c * (f.at(i, jp) - f.at(i, jm));
    }
    return out;
}

// Centered y-derivative of a cell-centered field derived from a no-slip
// tangential velocity: odd reflection at walls.
static ScalarField dy_cc_odd(const ScalarField& f) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const int nx = g.nx, ny = g.ny;
    const double c = 0.5 / g.hy();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double fm, fp;
            if (g.wall_y()) {
                fm = (j == 0) ? -f.at(i, 0) : f.at(i, j - 1);
                fp = (j == ny - 1) ? -f.at(i, ny - 1) : f.at(i, j + 1);
            } else {
                fm = f.at(i, wrap(j - 1, ny));
                fp = f.at(i, wrap(j + 1, ny));
            }
            out.at(i, j) = c * (fp - fm);
        }
    }
    return out;
}

Tensor2Field velocity_gradient(const FaceVelocity& w) {
    const GridSpec& g = w.grid;
    Tensor2Field t(g);
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    for (int j = 0; j < ny; ++j) {
        const int jp = g.wall_y() ? j + 1 : wrap(j + 1, ny);
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            t.xx.at(i, j) = (w.ux(ip, j) - w.ux(i, j)) * ihx;
            t.yy.at(i, j) = (w.vy(i, jp) - w.vy(i, j)) * ihy;
        }
    }
    CCVectorField cc = cc_velocity(w);
    t.xy = dy_cc_odd(cc.x);
    t.yx = dx_cc(cc.y);
    return t;
}

std::pair<Tensor2Field, Tensor2Field> strain_and_vorticity(const FaceVelocity& w) {
    Tensor2Field gvel = velocity_gradient(w);
    const GridSpec& g = w.grid;
    Tensor2Field d(g), om(g);
    const std::size_t n = gvel.xx.size();
    for (std::size_t q = 0; q < n; ++q) {
        d.xx.a[q] = gvel.xx.a[q];
        d.yy.a[q] = gvel.yy.a[q];
        d.xy.a[q] = 0.5 * (gvel.xy.a[q] + gvel.yx.a[q]);
        d.yx.a[q] = d.xy.a[q];
        om.xx.a[q] = 0.0;
        om.yy.a[q] = 0.0;
        om.xy.a[q] = 0.5 * (gvel.xy.a[q] - gvel.yx.a[q]);
        om.yx.a[q] = -om.xy.a[q];
    }
    return {d, om};
}

// --- skew-symmetric convection -------------------------------------------
//
// F(v)u below is the conservative flux divergence of (v u) on the staggered
// layout; F^T(v) is its exact transpose under the face inner product, which
// is a consistent discretization of -v.grad. convect_B returns
// (F - F^T)/2 u, so the trilinear form vanishes identically on its last two
// arguments.

namespace {

struct NodeSampler {
    // velocity samples at grid nodes (corners), with odd ghosts for the
    // tangential component at walls
    const FaceVelocity& w;
    int nx, ny;
    bool wall;
    NodeSampler(const FaceVelocity& f)
        : w(f), nx(f.grid.nx), ny(f.grid.ny), wall(f.grid.wall_y()) {}
    int nrows() const { return wall ? ny + 1 : ny; }
    double u_node(int i, int n) const {  // x-velocity at node (i,n)
        if (wall) {
            if (n == 0 || n == ny) return 0.0;
            return 0.5 * (w.ux(i, n - 1) + w.ux(i, n));
        }
        return 0.5 * (w.ux(i, wrap(n - 1, ny)) + w.ux(i, wrap(n, ny)));
    }
    double v_node(int i, int n) const {  // y-velocity at node (i,n)
        const int im = (i == 0) ? nx - 1 : i - 1;
        const int nn = wall ? n : wrap(n, ny);
        return 0.5 * (w.vy(im, nn) + w.vy(i, nn));
    }
};

FaceVelocity conv_flux_div(const FaceVelocity& v, const FaceVelocity& u) {
    const GridSpec& g = v.grid;
    FaceVelocity out(g);
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const bool wall = g.wall_y();
    CCVectorField vcc = cc_velocity(v);
    CCVectorField ucc = cc_velocity(u);
    NodeSampler vs(v), us(u);

    // x component: d/dx (vx ux)|cc + d/dy (vy ux)|node
    const int nrows = vs.nrows();
    std::vector<double> fxy(static_cast<std::size_t>(nx) * nrows);
    for (int n = 0; n < nrows; ++n)
        for (int i = 0; i < nx; ++i)
            fxy[static_cast<std::size_t>(n) * nx + i] = vs.v_node(i, n) * us.u_node(i, n);
    for (int j = 0; j < ny; ++j) {
        const int np = wall ? j + 1 : wrap(j + 1, ny);
        for (int i = 0; i < nx; ++i) {
            const int im = (i == 0) ? nx - 1 : i - 1;
            const double fxx_e = vcc.x.at(i, j) * ucc.x.at(i, j);
            const double fxx_w = vcc.x.at(im, j) * ucc.x.at(im, j);
            const double fn = fxy[static_cast<std::size_t>(np) * nx + i];
            const double fs = fxy[static_cast<std::size_t>(j) * nx + i];
            out.ux(i, j) = (fxx_e - fxx_w) * ihx + (fn - fs) * ihy;
        }
    }

    // y component: d/dx (vx uy)|node + d/dy (vy uy)|cc
    const int jlo = wall ? 1 : 0;
    const int jhi = wall ? ny : ny;  // wall: faces 1..ny-1; periodic: 0..ny-1
    for (int j = jlo; j < jhi; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int ip = (i + 1 == nx) ? 0 : i + 1;
            const double fyx_e = vs.u_node(ip, j) * us.v_node(ip, j);
            const double fyx_w = vs.u_node(i, j) * us.v_node(i, j);
            int jc = j, jm = j - 1;
            if (!wall) jm = wrap(j - 1, ny);
            const double fyy_n = vcc.y.at(i, jc) * ucc.y.at(i, jc);
            const double fyy_s = vcc.y.at(i, jm) * ucc.y.at(i, jm);
            out.vy(i, j) = (fyx_e - fyx_w) * ihx + (fyy_n - fyy_s) * ihy;
        }
    }
    out.enforce_wall();
    return out;
}

// Exact transpose of conv_flux_div in its transported argument.
FaceVelocity conv_flux_div_transpose(const FaceVelocity& v, const FaceVelocity& w) {
    const GridSpec& g = v.grid;
    FaceVelocity out(g);
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const bool wall = g.wall_y();
    CCVectorField vcc = cc_velocity(v);
    NodeSampler vs(v);

    // fxx chain: cells scatter into the two x-faces of the interpolation
    for (int j = 0; j < ny; ++j)
        for (int c = 0; c < nx; ++c) {
            const int cp = (c + 1 == nx) ? 0 : c + 1;
            const double m = vcc.x.at(c, j) * (w.ux(c, j) - w.ux(cp, j)) * ihx;
            out.ux(c, j) += 0.5 * m;
            out.ux(cp, j) += 0.5 * m;
        }
    // fxy chain: nodes scatter into the two x-faces, odd ghosts at walls
    const int nrows = vs.nrows();
    for (int n = 0; n < nrows; ++n)
        for (int i = 0; i < nx; ++i) {
            double wlo, whi;
            if (wall) {
                wlo = (n - 1 >= 0) ? w.ux(i, n - 1) : 0.0;
                whi = (n <= ny - 1) ? w.ux(i, n) : 0.0;
            } else {
                wlo = w.ux(i, wrap(n - 1, ny));
                whi = w.ux(i, n);
            }
            const double m = vs.v_node(i, n) * (wlo - whi) * ihy;
            if (wall) {
                if (n - 1 >= 0)
                    out.ux(i, n - 1) += 0.5 * m;
                else
                    out.ux(i, 0) -= 0.5 * m;
                if (n <= ny - 1)
                    out.ux(i, n) += 0.5 * m;
                else
                    out.ux(i, ny - 1) -= 0.5 * m;
            } else {
                out.ux(i, wrap(n - 1, ny)) += 0.5 * m;
                out.ux(i, n) += 0.5 * m;
            }
        }
    // fyx chain: nodes scatter into the two y-faces of the x-interpolation
    const int jlo = wall ? 0 : 0;
    const int jhi = wall ? ny + 1 : ny;
    for (int n = jlo; n < jhi; ++n)
        for (int i = 0; i < nx; ++i) {
            const int im = (i == 0) ? nx - 1 : i - 1;
            // pairing of fyx(i,n) with the w y-faces it feeds
            double wm, wc;
            wm = w.vy(im, n);
            wc = w.vy(i, n);
            const double m = vs.u_node(i, n) * (wm - wc) * ihx;
            out.vy(im, n) += 0.5 * m;
            out.vy(i, n) += 0.5 * m;
        }
    // fyy chain: cells scatter into the two y-faces of the interpolation
    for (int jc = 0; jc < ny; ++jc)
        for (int i = 0; i < nx; ++i) {
            const int jp = wall ? jc + 1 : wrap(jc + 1, ny);
            const double m = vcc.y.at(i, jc) * (w.vy(i, jc) - w.vy(i, jp)) * ihy;
            out.vy(i, jc) += 0.5 * m;
            out.vy(i, jp) += 0.5 * m;
        }
    out.enforce_wall();
    return out;
}

}  // namespace

FaceVelocity convect_B(const FaceVelocity& v, const FaceVelocity& u) {
    require_same_grid(v.grid, u.grid, "convect_B");
    FaceVelocity fwd = conv_flux_div(v, u);
    FaceVelocity bwd = conv_flux_div_transpose(v, u);
    FaceVelocity out(v.grid);
    const auto& k = kernels::active();
    k.lincomb2(out.u.data(), 0.5, fwd.u.data(), -0.5, bwd.u.data(), out.u.size());
    k.lincomb2(out.v.data(), 0.5, fwd.v.data(), -0.5, bwd.v.data(), out.v.size());
    return out;
}

ScalarField lincomb(double a, const ScalarField& f, double b, const ScalarField& g) {
    require_same_grid(f.grid, g.grid, "lincomb(scalar)");
    ScalarField out(f.grid);
    kernels::active().lincomb2(out.data(), a, f.data(), b, g.data(), out.size());
    return out;
}

FaceVelocity lincomb(double a, const FaceVelocity& f, double b, const FaceVelocity& g) {
    require_same_grid(f.grid, g.grid, "lincomb(face)");
    FaceVelocity out(f.grid);
    const auto& k = kernels::active();
    k.lincomb2(out.u.data(), a, f.u.data(), b, g.u.data(), out.u.size());
    k.lincomb2(out.v.data(), a, f.v.data(), b, g.v.data(), out.v.size());
    return out;
}

CCVectorField lincomb(double a, const CCVectorField& f, double b, const CCVectorField& g) {
    CCVectorField out;
    out.x = lincomb(a, f.x, b, g.x);
    out.y = lincomb(a, f.y, b, g.y);
    return out;
}

ScalarField mul(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid, g.grid, "mul");
    ScalarField out(f.grid);
    kernels::active().mul_ew(out.data(), f.data(), g.data(), out.size());
    return out;
}

double field_max_abs(const ScalarField& f) {
    return kernels::active().max_abs(f.data(), f.size());
}

double field_max_abs(const FaceVelocity& w) {
    const auto& k = kernels::active();
    return std::max(k.max_abs(w.u.data(), w.u.size()), k.max_abs(w.v.data(), w.v.size()));
}

double field_integral(const ScalarField& f) {
    return kernels::sum_compensated(f.data(), f.size()) * f.grid.cell_volume();
}

double field_mean(const ScalarField& f) { return field_integral(f) / f.grid.area(); }

}  // namespace onsflow
