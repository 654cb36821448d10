#include "onsflow/diagnostics.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "onsflow/kernels.hpp"
#include "onsflow/ops.hpp"

namespace onsflow {

FieldError field_error(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid, "field_error");
    ScalarField d = lincomb(1.0, a, -1.0, b);
    FieldError e;
    e.l2 = std::sqrt(inner(d, d));
    e.linf = field_max_abs(d);
    return e;
}

FieldError field_error(const FaceVelocity& a, const FaceVelocity& b) {
    require_same_grid(a.grid, b.grid, "field_error");
    FaceVelocity d = lincomb(1.0, a, -1.0, b);
    FieldError e;
    e.l2 = std::sqrt(inner(d, d));
    e.linf = field_max_abs(d);
    return e;
}

FieldError field_error(const CCVectorField& a, const CCVectorField& b) {
    CCVectorField d = lincomb(1.0, a, -1.0, b);
    FieldError e;
    e.l2 = std::sqrt(inner(d, d));
    e.linf = std::max(field_max_abs(d.x), field_max_abs(d.y));
    return e;
}

std::string ConvergenceTable::to_csv() const {
    std::string out = "field,dt,l2_error,linf_error,l2_order,linf_order\n";
    char buf[256];
    for (const auto& r : rows) {
        if (r.has_order)
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.4f,%.4f\n", r.field.c_str(),
                          r.dt, r.l2_error, r.linf_error, r.l2_order, r.linf_order);
        else
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,,\n", r.field.c_str(), r.dt,
                          r.l2_error, r.linf_error);
        out += buf;
    }
    return out;
}

std::pair<double, double> ConvergenceTable::order_range(const std::string& field) const {
    double lo2 = 1e300, loi = 1e300;
    for (const auto& r : rows)
        if (r.field == field && r.has_order) {
            lo2 = std::min(lo2, r.l2_order);
            loi = std::min(loi, r.linf_order);
        }
    return {lo2, loi};
}

int thread_cap() {
    const char* env = std::getenv("ONSAGER_FLOW_THREADS");
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (env) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return cap;
}

ConvergenceTable refine_in_time_core(const std::function<NamedFields(double)>& run, double dt0,
                                     int kmax) {
    if (!(dt0 > 0.0)) throw ContractError("refine_in_time: dt0 must be positive");
    if (kmax < 2) throw ContractError("refine_in_time: kmax must be >= 2");

    const int nruns = kmax + 1;
    std::vector<NamedFields> results(nruns);
    std::vector<std::string> failures(nruns);

    std::atomic<int> next{0};
    const int nthreads = std::min(thread_cap(), nruns);
    auto worker = [&]() {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= nruns) return;
            try {
                results[k] = run(dt0 / std::pow(2.0, k));
            } catch (const std::exception& e) {
                failures[k] = e.what();
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (int k = 0; k < nruns; ++k)
        if (!failures[k].empty())
            throw ContractError("refine_in_time: run k=" + std::to_string(k) +
                                " failed (partial table discarded): " + failures[k]);

    // adjacent-pair errors per tracked field
    struct Series {
        std::string name;
        std::vector<FieldError> errs;
    };
    std::vector<Series> series;
    const auto& ref = results[0];
    for (const auto& [name, f] : ref.scalars) series.push_back({name, {}});
    for (const auto& [name, f] : ref.faces) series.push_back({name, {}});

    for (int k = 0; k + 1 < nruns; ++k) {
        std::size_t si = 0;
        for (std::size_t q = 0; q < ref.scalars.size(); ++q, ++si)
            series[si].errs.push_back(
                field_error(results[k].scalars[q].second, results[k + 1].scalars[q].second));
        for (std::size_t q = 0; q < ref.faces.size(); ++q, ++si)
            series[si].errs.push_back(
                field_error(results[k].faces[q].second, results[k + 1].faces[q].second));
    }

    ConvergenceTable table;
    for (const auto& s : series) {
        for (int k = 0; k < static_cast<int>(s.errs.size()); ++k) {
            if (s.errs[k].l2 == 0.0 || s.errs[k].linf == 0.0)
                throw ContractError("refine_in_time: zero adjacent error for field '" + s.name +
                                    "' at k=" + std::to_string(k) +
                                    " (identical runs rejected)");
            ConvergenceRow row;
            row.field = s.name;
            row.dt = dt0 / std::pow(2.0, k);
            row.l2_error = s.errs[k].l2;
            row.linf_error = s.errs[k].linf;
            if (k > 0) {
                row.has_order = true;
                row.l2_order = std::log2(s.errs[k - 1].l2 / s.errs[k].l2);
                row.linf_order = std::log2(s.errs[k - 1].linf / s.errs[k].linf);
            }
            table.rows.push_back(row);
        }
    }
    return table;
}

MonotoneReport assert_energy_monotone(const std::vector<EnergyRecord>& series, double tol) {
    if (series.empty()) throw ContractError("assert_energy_monotone: empty series");
    MonotoneReport rep;
    for (std::size_t n = 1; n < series.size(); ++n) {
        const double de = series[n].total_energy - series[n - 1].total_energy;
        if (de > rep.max_uptick) rep.max_uptick = de;
        if (de > tol && rep.first_uptick < 0) {
            rep.monotone = false;
            rep.first_uptick = static_cast<int>(n);
        }
        const double dt = series[n].t - series[n - 1].t;
        const double resid =
            de + dt * (series[n].dissipation_irreversible + series[n].dissipation_s);
        rep.max_identity_residual = std::max(rep.max_identity_residual, std::fabs(resid));
        rep.max_s_error =
            std::max(rep.max_s_error, std::fabs(series[n].s_value - series[n].s_exact));
    }
    return rep;
}

}  // namespace onsflow
