#include "onsflow/kernels.hpp"

#include <cmath>

namespace onsflow::kernels {
namespace {

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double s_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double s_max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scale(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_lincomb2(double* z, double a, const double* x, double b, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i];
}

void s_lincomb3(double* z, double a, const double* x, double b, const double* y,
                double c, const double* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i] + c * w[i];
}

void s_mul_ew(double* z, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void s_fmadd_ew(double* z, double c, const double* x, const double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] += c * x[i] * y[i];
}

void s_stencil5(double* out, double c0, double cx, double cym, double cyp,
                const double* mid, const double* ym, const double* yp, std::size_t n) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = c0 * mid[i] + cx * (mid[i - 1] + mid[i + 1]) + cym * ym[i] + cyp * yp[i];
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t = {
        s_dot, s_sum, s_max_abs,
        s_axpy, s_scale, s_lincomb2, s_lincomb3, s_mul_ew, s_fmadd_ew,
        s_stencil5,
        "scalar",
    };
    return t;
}

double sum_compensated(const double* x, std::size_t n) {
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = acc + x[i];
        if (std::fabs(acc) >= std::fabs(x[i]))
            comp += (acc - t) + x[i];
        else
            comp += (x[i] - t) + acc;
        acc = t;
    }
    return acc + comp;
}

}  // namespace onsflow::kernels
