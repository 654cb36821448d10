#pragma once

#include "onsflow/eqrid.hpp"
#include "onsflow/grid.hpp"
#include "onsflow/linsolve.hpp"

// Two-phase incompressible flow: Cahn-Hilliard transport coupled to
// Navier-Stokes, in quadratized-energy form with the reversible couplings
// decoupled through the auxiliary scalar. One step costs two phase-field
// block solves, two velocity Helmholtz solves, a closed-form scalar update,
// and one pressure projection.

namespace onsflow {

struct ChnsParams {
    double rho = 1.0;       // density
    double eta = 1.0;       // viscosity
    double mobility = 0.01; // Cahn-Hilliard mobility
    double eps = 0.01;      // interface width
    double gamma0 = 0.0;    // quadratization regularization
    double T = 1.0;         // relaxation constant of the auxiliary scalar

    void validate() const {
        if (!(rho > 0.0) || !(eta > 0.0) || !(mobility > 0.0) || !(eps > 0.0))
            throw ContractError("ChnsParams: rho, eta, mobility, eps must be positive");
        if (gamma0 < 0.0) throw ContractError("ChnsParams: gamma0 must be >= 0");
        if (!(T > 0.0)) throw ContractError("ChnsParams: T must be positive");
    }
};

struct ChnsState {
    GridSpec grid;
    FaceVelocity u;
    ScalarField p;    // pressure (zero mean)
    ScalarField phi;  // phase variable
    ScalarField q;    // quadratization auxiliary
    double s = 1.0, s_prev = 1.0, t = 0.0;
    // one history level for the extrapolated coefficients
    FaceVelocity u_prev;
    ScalarField phi_prev, q_prev;
    double mass0 = 0.0;  // pinned phase integral
};

struct ChnsEnergy {
    double total = 0.0;
    double kinetic = 0.0;       // rho/2 ||u||^2
    double gradient = 0.0;      // eps^2/2 ||grad phi||^2
    double eq_bulk = 0.0;       // <gamma0/2 phi^2 + q^2/2, 1>
    double pressure_aux = 0.0;  // dt^2/(8 rho) ||grad p||^2
    double s_sq = 0.0;          // s^2/2
};

// Consistent initialization: q from its definition, zero pressure, s = 1,
// u0 projected onto the discretely divergence-free space if needed, history
// primed by copying level zero.
ChnsState chns_init(const ChnsParams& prm, const GridSpec& g, const ScalarField& phi0,
                    const FaceVelocity& u0, const SolverConfig& cfg = {});

// Chemical potential at the half step:
// mu = -eps^2 Lap(phi) + gamma0 phi + q * g(phi_bar), g(x) = sqrt(2) x.
ScalarField chns_mu_half(const ScalarField& phi_half, const ScalarField& q_half,
                         const ScalarField& phi_bar, const ChnsParams& prm);

ChnsEnergy chns_energy(const ChnsState& st, const ChnsParams& prm, double dt);

// Conserved phase integral <phi, 1>.
double chns_mass(const ChnsState& st);

class ChnsModel {
  public:
    using State = ChnsState;

    struct Work {
        ScalarField phi_bar, q_bar, mu_bar;
        FaceVelocity u_bar;
        ScalarField gbar;   // g(phi_bar)
        ScalarField gsq;    // g(phi_bar)^2
        ScalarField r_phi;  // div(u_bar phi_bar)
        FaceVelocity r_u;   // rho B(u_bar, u_bar) + phi_bar grad(mu_bar)
    };
    struct Partial {
        ScalarField phi, mu;
        FaceVelocity u;
    };

    ChnsModel(const ChnsParams& prm, const SolverConfig& cfg) : prm_(prm), cfg_(cfg) {
        prm_.validate();
        cfg_.validate();
    }

    double relax_time() const { return prm_.T; }
    Work prepare(const State& st, const StepContext& ctx) const;
    Partial solve_irreversible_part(const State& st, const Work& w, const StepContext& ctx) const;
    Partial solve_reversible_forced_part(const State& st, const Work& w,
                                         const StepContext& ctx) const;
    PairingScalars reversible_pairing(const State& st, const Work& w, const Partial& p1,
                                      const Partial& p2, const StepContext& ctx) const;
    StepStats assemble(State& st, const Work& w, const Partial& p1, const Partial& p2,
                       double s_val, const StepContext& ctx);
    double modified_energy(const State& st, const StepContext& ctx) const;

    // When set, assemble() additionally substitutes the assembled half-step
    // fields back into the coupled equations and records the worst relative
    // residual (midpoint scheme only).
    bool check_residuals = false;
    double last_residual = 0.0;

  private:
    ChnsParams prm_;
    SolverConfig cfg_;
};

// Convenience: one step with a transient model instance.
EnergyRecord chns_step(ChnsState& st, const ChnsParams& prm, double dt, const SolverConfig& cfg,
                       SchemeKind scheme = SchemeKind::CN);

// Initial conditions used by the shipped benchmark presets.
ScalarField chns_ic_coarsening(const GridSpec& g, double slope, double noise,
                               unsigned long long seed);
ScalarField chns_ic_droplets(const GridSpec& g, double eps);
ScalarField chns_ic_smooth(const GridSpec& g, double mean, double amp);
FaceVelocity velocity_ic_vortex(const GridSpec& g, double amp);

}  // namespace onsflow
