#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "onsflow/chns.hpp"
#include "onsflow/config.hpp"
#include "onsflow/eqrid.hpp"
#include "onsflow/ericksen_leslie.hpp"
#include "onsflow/grid.hpp"

namespace onsflow {

// Self-describing cell-centered snapshot: grid metadata, the simulated time,
// and the auxiliary scalar travel with the field values so the modified
// energy can be recomputed offline.
struct Snapshot {
    double time = 0.0;
    double s = 1.0;
    GridSpec grid;
    std::vector<std::pair<std::string, ScalarField>> fields;
};

Snapshot make_snapshot(const ChnsState& st);
Snapshot make_snapshot(const ElState& st);

// CSV: '#' metadata lines, one header row `x,y,<fields>`, row-major cells,
// 17-significant-digit decimals (reads back bit-exact).
void write_snapshot_csv(const Snapshot& snap, const std::string& path);
Snapshot read_snapshot_csv(const std::string& path);

// Legacy ASCII STRUCTURED_POINTS with one SCALARS block per field.
void write_snapshot_vtk(const Snapshot& snap, const std::string& path);

void write_energy_header(std::ostream& out);
void write_energy_row(std::ostream& out, const EnergyRecord& rec);
std::vector<EnergyRecord> read_energy_csv(const std::string& path);

// Binary checkpoint with everything a restart needs: both history levels,
// the auxiliary fields and scalars, time, and the step counter.
struct Checkpoint {
    ModelKind model = ModelKind::Chns;
    SchemeKind scheme = SchemeKind::CN;
    GridSpec grid;
    long long step = 0;
    double t = 0.0, s = 1.0, s_prev = 1.0, mass0 = 0.0;
    std::vector<std::vector<double>> arrays;
};

void write_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

Checkpoint checkpoint_of(const ChnsState& st, SchemeKind scheme, long long step);
Checkpoint checkpoint_of(const ElState& st, SchemeKind scheme, long long step);
void restore_state(const Checkpoint& ck, ChnsState& st);
void restore_state(const Checkpoint& ck, ElState& st);

}  // namespace onsflow
