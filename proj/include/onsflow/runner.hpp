#pragma once

#include <string>
#include <vector>

#include "onsflow/config.hpp"
#include "onsflow/diagnostics.hpp"
#include "onsflow/eqrid.hpp"

namespace onsflow {

struct RunResult {
    int exit_code = 0;
    std::vector<EnergyRecord> series;
};

// Runs one simulation, writing energy.csv, snapshots, checkpoints, and the
// echoed effective configuration into out_dir. On a solver failure the last
// written checkpoint is left in place and the exit code is nonzero.
RunResult run_simulation(const SimConfig& cfg, const std::string& out_dir,
                         const std::string& restart_path = {});

// Builds initial states from the configured preset (also used by tests).
ChnsState build_initial_chns(const SimConfig& cfg);
ElState build_initial_el(const SimConfig& cfg);
std::vector<DefectSpec> default_defects(const GridSpec& g);

// Temporal refinement: runs dt0/2^k for k = 0..kmax to t_end on the fixed
// grid of cfg and tabulates adjacent-pair errors for the tracked fields
// (phase and velocity for chns; director components and velocity for el).
ConvergenceTable refine_in_time(const SimConfig& cfg, double dt0, int kmax, double t_end);

int cli_main(int argc, char** argv);

}  // namespace onsflow
