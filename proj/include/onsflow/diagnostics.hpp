#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "onsflow/eqrid.hpp"
#include "onsflow/grid.hpp"

// Error norms, temporal-refinement studies against the adjacent finer run,
// and energy-series verification.

namespace onsflow {

struct FieldError {
    double l2 = 0.0;
    double linf = 0.0;
};

FieldError field_error(const ScalarField& a, const ScalarField& b);
FieldError field_error(const FaceVelocity& a, const FaceVelocity& b);
FieldError field_error(const CCVectorField& a, const CCVectorField& b);

struct ConvergenceRow {
    std::string field;
    double dt = 0.0;
    double l2_error = 0.0;
    double linf_error = 0.0;
    double l2_order = 0.0;   // valid when has_order
    double linf_order = 0.0;
    bool has_order = false;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::string to_csv() const;
    // smallest observed order over rows of one field (l2 and linf)
    std::pair<double, double> order_range(const std::string& field) const;
};

// End-of-run fields of one refinement member, compared across dt levels.
struct NamedFields {
    std::vector<std::pair<std::string, ScalarField>> scalars;
    std::vector<std::pair<std::string, FaceVelocity>> faces;
};

// Runs the supplied simulation at dt0 / 2^k for k = 0..kmax (optionally in
// parallel across runs, capped by ONSAGER_FLOW_THREADS) and tabulates
// adjacent-pair errors with observed orders. Throws if two adjacent runs are
// bitwise identical (degenerate input) or if any run fails.
ConvergenceTable refine_in_time_core(const std::function<NamedFields(double)>& run, double dt0,
                                     int kmax);

struct MonotoneReport {
    bool monotone = true;
    int first_uptick = -1;
    double max_uptick = 0.0;              // most positive energy increment
    double max_identity_residual = 0.0;   // |dE + dt * dissipation|
    double max_s_error = 0.0;             // max |s - exp(-t/T)| proxy from records
};

// Flags any step with E^{n+1} - E^n > tol and accumulates the residual of the
// discrete dissipation identity dE + dt*(diss_irr + diss_s) = 0.
MonotoneReport assert_energy_monotone(const std::vector<EnergyRecord>& series, double tol);

int thread_cap();  // ONSAGER_FLOW_THREADS, default hardware concurrency

}  // namespace onsflow
