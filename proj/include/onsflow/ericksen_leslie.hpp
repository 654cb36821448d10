#pragma once

#include <vector>

#include "onsflow/eqrid.hpp"
#include "onsflow/grid.hpp"
#include "onsflow/linsolve.hpp"

// Nematic liquid crystal hydrodynamics: director relaxation under the
// one-constant elastic energy, coupled to incompressible flow. The elastic
// force on the fluid is built as the exact discrete negative adjoint of the
// director transport/rotation operator, so the discrete reversible power
// exchange cancels identically and the modified energy balance closes.

namespace onsflow {

struct ElParams {
    double rho = 1.0;      // density
    double eta = 1.0;      // viscosity
    double mobility = 1.0; // director relaxation mobility
    double K = 0.01;       // elastic constant
    double eps = 0.1;      // defect core length scale
    double a = 1.0;        // molecular geometry parameter
    double gamma0 = 0.0;   // quadratization regularization
    double T = 1.0;        // relaxation constant of the auxiliary scalar

    void validate() const {
        if (!(rho > 0.0) || !(eta > 0.0) || !(mobility > 0.0) || !(K > 0.0) || !(eps > 0.0))
            throw ContractError("ElParams: rho, eta, mobility, K, eps must be positive");
        if (gamma0 < 0.0) throw ContractError("ElParams: gamma0 must be >= 0");
        if (!(T > 0.0)) throw ContractError("ElParams: T must be positive");
    }
};

struct ElState {
    GridSpec grid;
    FaceVelocity u;
    ScalarField p_pressure;
    CCVectorField director;
    ScalarField q;
    double s = 1.0, s_prev = 1.0, t = 0.0;
    FaceVelocity u_prev;
    CCVectorField director_prev;
    ScalarField q_prev;
};

struct ElEnergy {
    double total = 0.0;
    double kinetic = 0.0;
    double elastic = 0.0;       // K/2 ||grad p||^2
    double eq_bulk = 0.0;       // <gamma0/2 |p|^2 + q^2/2, 1>
    double pressure_aux = 0.0;  // dt^2/(8 rho) ||grad p||^2 (hydrodynamic pressure)
    double s_sq = 0.0;
    double a0_offset = 0.0;     // |domain| (eps^2 gamma0^2/4 + gamma0/2)
};

ElState el_init(const ElParams& prm, const GridSpec& g, const CCVectorField& director0,
                const FaceVelocity& u0, const SolverConfig& cfg = {});

// Molecular field h = K Lap(p) - gamma0 p - q g(p_bar), g(p) = sqrt(2)/eps p.
CCVectorField el_h_half(const CCVectorField& p_half, const ScalarField& q_half,
                        const CCVectorField& p_bar, const ElParams& prm);

// Director transport/rotation operator T(w) = (w.grad)p - (W(w) + a D(w)) p
// evaluated at cell centers, linear in the face velocity w.
CCVectorField el_transport(const FaceVelocity& w, const CCVectorField& p_bar, double a);

// Exact negative adjoint of el_transport in its velocity argument:
// <el_elastic_force(p,h), w> = -<h, el_transport(w, p)> for all w.
// Consistent with div(stress) - h.grad(p) of the continuous model.
FaceVelocity el_elastic_force(const CCVectorField& p_bar, const CCVectorField& h_bar, double a);

ElEnergy el_energy(const ElState& st, const ElParams& prm, double dt);

struct DirectorSolveResult {
    CCVectorField p;
    SolveReport report;
};

// (a0 + M gamma0) p - M K Lap(p) + M (g.p) g = rhs, the per-cell rank-one
// coupled director system, preconditioned by the scalar constant-coefficient
// Helmholtz inverse.
DirectorSolveResult solve_director_block(double a0, const ElParams& prm, const CCVectorField& g,
                                         const CCVectorField& rhs, const SolverConfig& cfg,
                                         const CCVectorField* guess = nullptr);

class ElModel {
  public:
    using State = ElState;

    struct Work {
        CCVectorField p_bar, h_bar, gvec;
        ScalarField q_bar;
        FaceVelocity u_bar;
        CCVectorField r_p;  // transport forcing at extrapolated fields
        FaceVelocity r_u;   // rho B(u_bar,u_bar) - elastic force(p_bar, h_bar)
    };
    struct Partial {
        CCVectorField p, h;
        FaceVelocity u;
    };

    ElModel(const ElParams& prm, const SolverConfig& cfg) : prm_(prm), cfg_(cfg) {
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

    bool check_residuals = false;
    double last_residual = 0.0;

  private:
    ElParams prm_;
    SolverConfig cfg_;
};

EnergyRecord el_step(ElState& st, const ElParams& prm, double dt, const SolverConfig& cfg,
                     SchemeKind scheme = SchemeKind::CN);

// --- defect seeding and diagnostics ---------------------------------------

struct DefectSpec {
    double cx = 0.0, cy = 0.0;  // core position
    int k = 1;                  // winding index, in {-2,-1,1,2}
    double theta0 = 0.0;        // phase offset
};

// Director field with the prescribed defects: angle sum of atan2 windings,
// amplitude smoothly tapered to zero over radius 2*eps around each core.
CCVectorField seed_defects(const GridSpec& g, const std::vector<DefectSpec>& defects, double eps);

// Total winding of the director along the counterclockwise rectangle of cell
// centers (i0..i1) x (j0..j1); returns the nearest integer of the accumulated
// angle / 2 pi.
int winding_number(const CCVectorField& p, int i0, int j0, int i1, int j1);

CCVectorField el_ic_smooth(const GridSpec& g, double amp);
CCVectorField el_ic_uniform(const GridSpec& g);

}  // namespace onsflow
