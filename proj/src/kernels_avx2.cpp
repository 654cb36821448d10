#include "onsflow/kernels.hpp"

#include <immintrin.h>

#include <cmath>

// AVX2/FMA variants. Loops process 4 doubles per lane set with scalar tails.
// Reductions keep four independent accumulators combined in a fixed order so
// results are reproducible run to run on the same machine.

namespace onsflow::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

double v_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double v_sum(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double v_max_abs(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, _mm256_and_pd(mask, _mm256_loadu_pd(x + i)));
    double out = 0.0;
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, m);
    for (int k = 0; k < 4; ++k) out = std::max(out, tmp[k]);
    for (; i < n; ++i) out = std::max(out, std::fabs(x[i]));
    return out;
}

void v_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void v_scale(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void v_lincomb2(double* z, double a, const double* x, double b, const double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), r);
        _mm256_storeu_pd(z + i, r);
    }
    for (; i < n; ++i) z[i] = a * x[i] + b * y[i];
}

void v_lincomb3(double* z, double a, const double* x, double b, const double* y,
                double c, const double* w, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b), vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), r);
        r = _mm256_fmadd_pd(vc, _mm256_loadu_pd(w + i), r);
        _mm256_storeu_pd(z + i, r);
    }
    for (; i < n; ++i) z[i] = a * x[i] + b * y[i] + c * w[i];
}

void v_mul_ew(double* z, const double* x, const double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) z[i] = x[i] * y[i];
}

void v_fmadd_ew(double* z, double c, const double* x, const double* y, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(z + i, _mm256_fmadd_pd(vc, xy, _mm256_loadu_pd(z + i)));
    }
    for (; i < n; ++i) z[i] += c * x[i] * y[i];
}

void v_stencil5(double* out, double c0, double cx, double cym, double cyp,
                const double* mid, const double* ym, const double* yp, std::size_t n) {
    if (n < 2) return;
    const __m256d v0 = _mm256_set1_pd(c0), vx = _mm256_set1_pd(cx);
    const __m256d vm = _mm256_set1_pd(cym), vp = _mm256_set1_pd(cyp);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d west = _mm256_loadu_pd(mid + i - 1);
        __m256d east = _mm256_loadu_pd(mid + i + 1);
        __m256d r = _mm256_mul_pd(v0, _mm256_loadu_pd(mid + i));
        r = _mm256_fmadd_pd(vx, _mm256_add_pd(west, east), r);
        r = _mm256_fmadd_pd(vm, _mm256_loadu_pd(ym + i), r);
        r = _mm256_fmadd_pd(vp, _mm256_loadu_pd(yp + i), r);
        _mm256_storeu_pd(out + i, r);
    }
    for (; i + 1 < n; ++i)
        out[i] = c0 * mid[i] + cx * (mid[i - 1] + mid[i + 1]) + cym * ym[i] + cyp * yp[i];
}

}  // namespace

const KernelTable& avx2_impl_table() {
    static const KernelTable t = {
        v_dot, v_sum, v_max_abs,
        v_axpy, v_scale, v_lincomb2, v_lincomb3, v_mul_ew, v_fmadd_ew,
        v_stencil5,
        "avx2",
    };
    return t;
}

}  // namespace onsflow::kernels
