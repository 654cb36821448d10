#pragma once

#include <cmath>
#include <concepts>

#include "onsflow/errors.hpp"

// Generic semi-implicit time integration for quadratized-energy models with
// decoupled reversible dynamics. A model supplies two linear sub-solves (the
// dissipative part and the explicitly forced reversible part), the pairing
// scalars of the auxiliary-variable closure, and the affine assembly of the
// full update; the stepper owns the scalar closure and bookkeeping. Both a
// midpoint (CN) and a two-level BDF2 variant are provided; BDF2 runs
// bootstrap their first step with CN.

namespace onsflow {

enum class SchemeKind { CN, BDF2 };

// Per-step diagnostics row.
struct EnergyRecord {
    double t = 0.0;
    double total_energy = 0.0;
    double dissipation_irreversible = 0.0;
    double dissipation_s = 0.0;
    double s_value = 0.0;
    double s_exact = 0.0;
    double mass = 0.0;
    double div_inf = 0.0;
};

struct StepContext {
    SchemeKind scheme = SchemeKind::CN;
    double dt = 0.0;
    double mass_coeff = 0.0;  // 2/dt (CN half step) or 3/(2 dt) (BDF2)
    double t_force = 0.0;     // where extrapolated forcings are evaluated
    double exp_rid = 1.0;     // e^{t_force / T}
    double relax_T = 1.0;
    double w_cur = 1.0, w_prev = 0.0;  // extrapolation weights for history
    double pair_scale = 0.0;           // exp_rid / (mass_coeff + 1/T)
};

StepContext make_step_context(SchemeKind scheme, double t, double dt, double relax_T);

// Reference relaxation profile of the auxiliary scalar (diagnostics only).
double exact_s(double t, double T);

// Closed-form updates of the auxiliary scalar: s = (c_n + pair1)/(1 - pair2).
// Throws StepSizeError when the denominator is within 1e-8 of zero.
double cn_scalar_update(double c_n, double pair1, double pair2);
double bdf2_scalar_update(double c_n, double pair1, double pair2);

struct PairingScalars {
    double with_psi1 = 0.0;  // <L psi_1, F3>
    double with_psi2 = 0.0;  // <L psi_2, F3>
};

struct StepStats {
    double diss_irreversible = 0.0;
    double div_inf = 0.0;
    double mass = 0.0;
};

template <class M>
concept EqRidModel = requires(M m, typename M::State st, const typename M::State& cst,
                              const typename M::Work& w, const typename M::Partial& p,
                              const StepContext& ctx, double s) {
    { m.relax_time() } -> std::convertible_to<double>;
    { m.prepare(cst, ctx) } -> std::same_as<typename M::Work>;
    { m.solve_irreversible_part(cst, w, ctx) } -> std::same_as<typename M::Partial>;
    { m.solve_reversible_forced_part(cst, w, ctx) } -> std::same_as<typename M::Partial>;
    { m.reversible_pairing(cst, w, p, p, ctx) } -> std::same_as<PairingScalars>;
    { m.assemble(st, w, p, p, s, ctx) } -> std::same_as<StepStats>;
    { m.modified_energy(cst, ctx) } -> std::convertible_to<double>;
};

// One step of the midpoint scheme. The state advances in place, including its
// history level and the auxiliary scalar.
template <class Model>
    requires EqRidModel<Model>
EnergyRecord step_cn(Model& model, typename Model::State& st, double dt) {
    if (!(dt > 0.0)) throw ContractError("step_cn: dt must be positive");
    const StepContext ctx = make_step_context(SchemeKind::CN, st.t, dt, model.relax_time());
    const auto work = model.prepare(st, ctx);
    const auto psi1 = model.solve_irreversible_part(st, work, ctx);
    const auto psi2 = model.solve_reversible_forced_part(st, work, ctx);
    const PairingScalars pr = model.reversible_pairing(st, work, psi1, psi2, ctx);
    const double c_n = ctx.mass_coeff * st.s / (ctx.mass_coeff + 1.0 / ctx.relax_T);
    const double s_mid = cn_scalar_update(c_n, pr.with_psi1, pr.with_psi2);
    const double s_new = 2.0 * s_mid - st.s;
    const StepStats stats = model.assemble(st, work, psi1, psi2, s_mid, ctx);
    st.s_prev = st.s;
    st.s = s_new;
    st.t += dt;

    EnergyRecord rec;
    rec.t = st.t;
    rec.total_energy = model.modified_energy(st, ctx);
    rec.dissipation_irreversible = stats.diss_irreversible;
    rec.dissipation_s = s_mid * s_mid / ctx.relax_T;
    rec.s_value = st.s;
    rec.s_exact = exact_s(st.t, ctx.relax_T);
    rec.mass = stats.mass;
    rec.div_inf = stats.div_inf;
    return rec;
}

// One BDF2 step; requires a valid history level (prime it with one CN step).
template <class Model>
    requires EqRidModel<Model>
EnergyRecord step_bdf2(Model& model, typename Model::State& st, double dt) {
    if (!(dt > 0.0)) throw ContractError("step_bdf2: dt must be positive");
    const StepContext ctx = make_step_context(SchemeKind::BDF2, st.t, dt, model.relax_time());
    const auto work = model.prepare(st, ctx);
    const auto psi1 = model.solve_irreversible_part(st, work, ctx);
    const auto psi2 = model.solve_reversible_forced_part(st, work, ctx);
    const PairingScalars pr = model.reversible_pairing(st, work, psi1, psi2, ctx);
    const double c_n = ((4.0 * st.s - st.s_prev) / (2.0 * dt)) / (ctx.mass_coeff + 1.0 / ctx.relax_T);
    const double s_new = bdf2_scalar_update(c_n, pr.with_psi1, pr.with_psi2);
    const StepStats stats = model.assemble(st, work, psi1, psi2, s_new, ctx);
    st.s_prev = st.s;
    st.s = s_new;
    st.t += dt;

    EnergyRecord rec;
    rec.t = st.t;
    rec.total_energy = model.modified_energy(st, ctx);
    rec.dissipation_irreversible = stats.diss_irreversible;
    rec.dissipation_s = s_new * s_new / ctx.relax_T;
    rec.s_value = st.s;
    rec.s_exact = exact_s(st.t, ctx.relax_T);
    rec.mass = stats.mass;
    rec.div_inf = stats.div_inf;
    return rec;
}

}  // namespace onsflow
