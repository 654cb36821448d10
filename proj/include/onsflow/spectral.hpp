#pragma once

#include "onsflow/grid.hpp"

// Exact inverse of the constant-coefficient Helmholtz operator
// (alpha - c*Lap) on one staggered component: FFT along the periodic x
// direction, independent tridiagonal solves along y. Used as the
// preconditioner inside BiCGStab for the velocity and pressure solves; with
// constant coefficients it is exact, so the Krylov loop converges in a
// couple of iterations and provides the residual guarantee.

namespace onsflow {

class SpectralHelmholtz {
  public:
    enum class Layout { Cell, XFace, YFace };

    SpectralHelmholtz(const GridSpec& g, Layout lay);
    ~SpectralHelmholtz();
    SpectralHelmholtz(const SpectralHelmholtz&) = delete;
    SpectralHelmholtz& operator=(const SpectralHelmholtz&) = delete;

    // Solves (alpha - c*Lap) x = b. Arrays use the natural field storage of
    // the layout (YFace includes wall rows when the grid has walls; they are
    // treated as alpha*x = b identity rows).
    // pin_mean: handle the constant nullspace of the singular alpha == 0,
    // zero-flux case by returning the mean-zero solution.
    void solve(double alpha, double c, const double* b, double* x, bool pin_mean = false) const;

    static Layout cell() { return Layout::Cell; }

  private:
    GridSpec g_;
    Layout lay_;
    int rows_;       // rows entering the transform
    int row_off_;    // first transformed row in field storage (YFace wall: 1)
    void* fwd_ = nullptr;  // fftw plans (type-erased to keep fftw out of headers)
    void* bwd_ = nullptr;
};

}  // namespace onsflow
