#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops used by the field operators and Krylov solvers.
// Every kernel exists as a scalar reference implementation and, on x86-64, an
// AVX2 variant. The active table is chosen once at startup from cpuid and can
// be overridden with ONSAGER_FLOW_SIMD=scalar|avx2|auto (or force_isa()).
// The two variants are equivalence-tested against each other; reductions may
// differ by reassociation round-off only.

namespace onsflow::kernels {

struct KernelTable {
    // reductions
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    // vector updates
    void (*axpy)(double a, const double* x, double* y, std::size_t n);           // y += a*x
    void (*scale)(double a, double* x, std::size_t n);                           // x *= a
    void (*lincomb2)(double* z, double a, const double* x,
                     double b, const double* y, std::size_t n);                  // z = a*x + b*y
    void (*lincomb3)(double* z, double a, const double* x, double b, const double* y,
                     double c, const double* w, std::size_t n);                  // z = a*x + b*y + c*w
    void (*mul_ew)(double* z, const double* x, const double* y, std::size_t n);  // z = x .* y
    void (*fmadd_ew)(double* z, double c, const double* x,
                     const double* y, std::size_t n);                            // z += c * x .* y
    // 5-point stencil row sweep, interior columns i in [1, n-1):
    //   out[i] = c0*mid[i] + cx*(mid[i-1] + mid[i+1]) + cym*ym[i] + cyp*yp[i]
    // Edge columns (periodic wrap) are handled by the caller.
    void (*stencil5)(double* out, double c0, double cx, double cym, double cyp,
                     const double* mid, const double* ym, const double* yp, std::size_t n);
    const char* name;
};

enum class Isa { Auto, Scalar, Avx2 };

const KernelTable& scalar_table();
// Returns the AVX2 table when the binary carries it and the CPU supports it,
// otherwise the scalar table.
const KernelTable& avx2_table();
bool avx2_available();

// Active table (resolved once; honors ONSAGER_FLOW_SIMD on first use).
const KernelTable& active();
// Test hook: force a specific path. Throws if the path is unavailable.
void force_isa(Isa isa);
std::string active_name();

// Compensated (Neumaier) summation; always the same scalar code path
// regardless of the active table. Used where absolute drift matters
// (mass bookkeeping).
double sum_compensated(const double* x, std::size_t n);

}  // namespace onsflow::kernels
