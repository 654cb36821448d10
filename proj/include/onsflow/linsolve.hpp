#pragma once

#include <functional>
#include <utility>

#include "onsflow/grid.hpp"
#include "onsflow/spectral.hpp"

// Krylov solves for the elliptic problems of one time step: the velocity
// Helmholtz systems, the pressure Poisson problem (zero-mean nullspace), and
// the coupled fourth-order phase-field block. All use preconditioned
// BiCGStab with a fixed iteration order, so results are deterministic for
// identical inputs. Reported residuals are re-evaluated from scratch after
// the iteration finishes.

namespace onsflow {

struct SolverConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_iter = 10000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw ContractError("SolverConfig: tolerances must be positive");
        if (max_iter < 1) throw ContractError("SolverConfig: max_iter must be >= 1");
    }
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    double rhs_norm = 0.0;
    bool converged = false;
};

using ApplyFn = std::function<void(const double* x, double* y)>;

// Preconditioned BiCGStab on flat arrays; x carries the initial guess.
// `precond` may be null (identity). The report's final_residual comes from a
// true-residual evaluation of the returned x.
SolveReport bicgstab(std::size_t n, const ApplyFn& apply_op, const ApplyFn* precond,
                     const double* b, double* x, const SolverConfig& cfg);

// (alpha - eta*Lap) w = rhs on both velocity components, no-slip walls.
std::pair<FaceVelocity, SolveReport> solve_helmholtz_velocity(double alpha, double eta,
                                                              const FaceVelocity& rhs,
                                                              const SolverConfig& cfg,
                                                              const FaceVelocity* guess = nullptr);

// Lap p = rhs with zero-flux/periodic boundaries; returns the zero-mean
// solution. rhs must be compatible (near-zero integral).
std::pair<ScalarField, SolveReport> solve_poisson_neumann(const ScalarField& rhs,
                                                          const SolverConfig& cfg,
                                                          const ScalarField* guess = nullptr);

struct ChBlockResult {
    ScalarField phi;
    ScalarField mu;
    SolveReport report;
};

// Coupled half-step phase-field block
//     a0*phi - m*Lap(mu)                          = rhs_phi
//     mu + eps2*Lap(phi) - gamma0*phi - gsq*phi   = rhs_mu
// solved by eliminating mu, then recovering it from the second row exactly.
ChBlockResult solve_ch_block(double a0, double m, double eps2, double gamma0,
                             const ScalarField& gsq, const ScalarField& rhs_phi,
                             const ScalarField& rhs_mu, const SolverConfig& cfg,
                             const ScalarField* guess = nullptr);

struct ProjectionResult {
    FaceVelocity u;
    ScalarField dp;  // pressure increment
    double div_inf = 0.0;
};

// Projection onto the discretely divergence-free space:
//   Lap(dp) = rho_mass * div(uhat),  u = uhat - grad(dp)/rho_mass,
// refined until the residual divergence sits safely below the solver
// tolerance relative to |u|_inf.
ProjectionResult project_velocity(const FaceVelocity& uhat, double rho_mass,
                                  const SolverConfig& cfg);

}  // namespace onsflow
