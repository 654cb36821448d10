#include "onsflow/eqrid.hpp"

#include <cmath>
#include <string>

namespace onsflow {

StepContext make_step_context(SchemeKind scheme, double t, double dt, double relax_T) {
    if (!(relax_T > 0.0)) throw ContractError("relaxation time must be positive");
    StepContext ctx;
    ctx.scheme = scheme;
    ctx.dt = dt;
    ctx.relax_T = relax_T;
    if (scheme == SchemeKind::CN) {
        ctx.mass_coeff = 2.0 / dt;
        ctx.t_force = t + 0.5 * dt;
        ctx.w_cur = 1.5;
        ctx.w_prev = -0.5;
    } else {
        ctx.mass_coeff = 3.0 / (2.0 * dt);
        ctx.t_force = t + dt;
        ctx.w_cur = 2.0;
        ctx.w_prev = -1.0;
    }
    ctx.exp_rid = std::exp(ctx.t_force / relax_T);
    ctx.pair_scale = ctx.exp_rid / (ctx.mass_coeff + 1.0 / relax_T);
    return ctx;
}

double exact_s(double t, double T) {
    if (!(T > 0.0)) throw ContractError("exact_s: T must be positive");
    return std::exp(-t / T);
}

namespace {
double scalar_update(double c_n, double pair1, double pair2, const char* who) {
    const double den = 1.0 - pair2;
    if (std::fabs(den) < 1e-8)
        throw StepSizeError(std::string(who) +
                            ": near-singular scalar closure (|1 - pair2| = " +
                            std::to_string(std::fabs(den)) + "); reduce the time step");
    return (c_n + pair1) / den;
}
}  // namespace

double cn_scalar_update(double c_n, double pair1, double pair2) {
    return scalar_update(c_n, pair1, pair2, "cn_scalar_update");
}

double bdf2_scalar_update(double c_n, double pair1, double pair2) {
    return scalar_update(c_n, pair1, pair2, "bdf2_scalar_update");
}

}  // namespace onsflow
