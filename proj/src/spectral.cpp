#include "onsflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <vector>

namespace onsflow {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuf {
    double* r = nullptr;
    fftw_complex* c = nullptr;
    FftwBuf(std::size_t nr, std::size_t nc) {
        r = fftw_alloc_real(nr);
        c = fftw_alloc_complex(nc);
    }
    ~FftwBuf() {
        fftw_free(r);
        fftw_free(c);
    }
};

// Solves the tridiagonal system with constant off-diagonal `off`, diagonal
// diag[], for two right-hand sides (re, im) with stride `stride`.
void thomas2(const std::vector<double>& diag, double off, double* re, double* im, int n,
             int stride) {
    if (n == 1) {
        re[0] /= diag[0];
        im[0] /= diag[0];
        return;
    }
    std::vector<double> cp(n);
    double d = diag[0];
    cp[0] = off / d;
    re[0] /= d;
    im[0] /= d;
    for (int r = 1; r < n; ++r) {
        d = diag[r] - off * cp[r - 1];
        cp[r] = off / d;
        const std::size_t q = static_cast<std::size_t>(r) * stride;
        const std::size_t qm = q - stride;
        re[q] = (re[q] - off * re[qm]) / d;
        im[q] = (im[q] - off * im[qm]) / d;
    }
    for (int r = n - 2; r >= 0; --r) {
        const std::size_t q = static_cast<std::size_t>(r) * stride;
        const std::size_t qp = q + stride;
        re[q] -= cp[r] * re[qp];
        im[q] -= cp[r] * im[qp];
    }
}

// Cyclic tridiagonal (periodic y) via Sherman-Morrison around thomas2.
void thomas2_cyclic(const std::vector<double>& diag, double off, double* re, double* im, int n,
                    int stride) {
    if (n == 1) {
        const double d = diag[0] + 2.0 * off;
        re[0] /= d;
        im[0] /= d;
        return;
    }
    if (n == 2) {
        // wrap makes the corner coupling merge with the band: full 2x2 solve
        const double a = diag[0], b = 2.0 * off, c = 2.0 * off, dd = diag[1];
        const double det = a * dd - b * c;
        const double r0 = re[0], r1 = re[static_cast<std::size_t>(stride)];
        const double i0 = im[0], i1 = im[static_cast<std::size_t>(stride)];
        re[0] = (dd * r0 - b * r1) / det;
        re[static_cast<std::size_t>(stride)] = (a * r1 - c * r0) / det;
        im[0] = (dd * i0 - b * i1) / det;
        im[static_cast<std::size_t>(stride)] = (a * i1 - c * i0) / det;
        return;
    }
    const double gamma = -diag[0];
    std::vector<double> dmod(diag);
    dmod[0] = diag[0] - gamma;
    dmod[n - 1] = diag[n - 1] - off * off / gamma;
    // z solves T z = u with u = (gamma, 0, ..., 0, off)
    std::vector<double> zre(static_cast<std::size_t>(n) * stride, 0.0);
    std::vector<double> zim(static_cast<std::size_t>(n) * stride, 0.0);
    zre[0] = gamma;
    zre[static_cast<std::size_t>(n - 1) * stride] = off;
    thomas2(dmod, off, zre.data(), zim.data(), n, stride);
    thomas2(dmod, off, re, im, n, stride);
    const double v0 = 1.0, vn = off / gamma;
    const std::size_t qn = static_cast<std::size_t>(n - 1) * stride;
    const double denom = 1.0 + v0 * zre[0] + vn * zre[qn];
    const double facr = (v0 * re[0] + vn * re[qn]) / denom;
    const double faci = (v0 * im[0] + vn * im[qn]) / denom;
    for (int r = 0; r < n; ++r) {
        const std::size_t q = static_cast<std::size_t>(r) * stride;
        re[q] -= facr * zre[q];
        im[q] -= faci * zre[q];
    }
}

}  // namespace

SpectralHelmholtz::SpectralHelmholtz(const GridSpec& g, Layout lay) : g_(g), lay_(lay) {
    rows_ = g.ny;
    row_off_ = 0;
    if (lay == Layout::YFace) {
        if (g.wall_y()) {
            rows_ = g.ny - 1;  // interior faces only
            row_off_ = 1;
        } else {
            rows_ = g.ny;
        }
    }
    const int nx = g.nx;
    const int nxc = nx / 2 + 1;
    FftwBuf probe(static_cast<std::size_t>(rows_) * nx, static_cast<std::size_t>(rows_) * nxc);
    std::lock_guard<std::mutex> lock(plan_mutex());
    int n[] = {nx};
    fwd_ = fftw_plan_many_dft_r2c(1, n, rows_, probe.r, nullptr, 1, nx, probe.c, nullptr, 1, nxc,
                                  FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft_c2r(1, n, rows_, probe.c, nullptr, 1, nxc, probe.r, nullptr, 1, nx,
                                  FFTW_ESTIMATE);
}

SpectralHelmholtz::~SpectralHelmholtz() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void SpectralHelmholtz::solve(double alpha, double c, const double* b, double* x,
                              bool pin_mean) const {
    const int nx = g_.nx;
    const int nxc = nx / 2 + 1;
    const double hy2 = g_.hy() * g_.hy();
    const double hx2 = g_.hx() * g_.hx();
    const bool wall = g_.wall_y();

    // Identity rows outside the transform (wall faces of v): alpha * x = b.
    if (lay_ == Layout::YFace && wall) {
        for (int i = 0; i < nx; ++i) {
            x[i] = b[i] / alpha;
            x[static_cast<std::size_t>(g_.ny) * nx + i] = b[static_cast<std::size_t>(g_.ny) * nx + i] / alpha;
        }
    }

    FftwBuf buf(static_cast<std::size_t>(rows_) * nx, static_cast<std::size_t>(rows_) * nxc);
    const double* bsrc = b + static_cast<std::size_t>(row_off_) * nx;
    for (std::size_t q = 0; q < static_cast<std::size_t>(rows_) * nx; ++q) buf.r[q] = bsrc[q];
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), buf.r, buf.c);

    const bool periodic_y = !wall;
    std::vector<double> diag(rows_);
    for (int m = 0; m < nxc; ++m) {
        const double lx = (2.0 - 2.0 * std::cos(2.0 * M_PI * m / nx)) / hx2;
        const double base = alpha + c * lx;
        double* re = &buf.c[m][0];
        double* im = &buf.c[m][1];
        const int stride = 2 * nxc;  // complex rows interleave re/im

        // assemble per-row diagonal of base + c * (1D -d2/dy2 with BCs)
        for (int r = 0; r < rows_; ++r) diag[r] = base + c * 2.0 / hy2;
        if (!periodic_y) {
            if (lay_ == Layout::Cell) {
                diag[0] = base + c * 1.0 / hy2;
                diag[rows_ - 1] = base + c * 1.0 / hy2;
            } else if (lay_ == Layout::XFace) {
                diag[0] = base + c * 3.0 / hy2;
                diag[rows_ - 1] = base + c * 3.0 / hy2;
            }
            // YFace wall keeps 2/hy^2 rows (Dirichlet neighbors)
        }
        const double off = -c / hy2;

        const bool zero_flux_kernel =
            (periodic_y || lay_ == Layout::Cell) && lay_ != Layout::YFace;
        const bool singular = pin_mean && m == 0 && std::fabs(base) < 1e-300 && zero_flux_kernel;
        if (singular) {
            // pin the last row to zero, solve the reduced system, demean
            if (rows_ > 1) {
                std::vector<double> dred(diag.begin(), diag.end() - 1);
                if (periodic_y) {
                    // dropping the pinned row removes the corner couplings
                    thomas2(dred, off, re, im, rows_ - 1, stride);
                } else {
                    thomas2(dred, off, re, im, rows_ - 1, stride);
                }
                re[static_cast<std::size_t>(rows_ - 1) * stride] = 0.0;
                im[static_cast<std::size_t>(rows_ - 1) * stride] = 0.0;
            }
            double mre = 0.0, mim = 0.0;
            for (int r = 0; r < rows_; ++r) {
                mre += re[static_cast<std::size_t>(r) * stride];
                mim += im[static_cast<std::size_t>(r) * stride];
            }
            mre /= rows_;
            mim /= rows_;
            for (int r = 0; r < rows_; ++r) {
                re[static_cast<std::size_t>(r) * stride] -= mre;
                im[static_cast<std::size_t>(r) * stride] -= mim;
            }
        } else if (periodic_y) {
            thomas2_cyclic(diag, off, re, im, rows_, stride);
        } else {
            thomas2(diag, off, re, im, rows_, stride);
        }
    }

    fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), buf.c, buf.r);
    double* xdst = x + static_cast<std::size_t>(row_off_) * nx;
    const double scale = 1.0 / nx;
    for (std::size_t q = 0; q < static_cast<std::size_t>(rows_) * nx; ++q) xdst[q] = buf.r[q] * scale;
}

}  // namespace onsflow
