#pragma once

#include <string>

#include "onsflow/chns.hpp"
#include "onsflow/ericksen_leslie.hpp"
#include "onsflow/grid.hpp"
#include "onsflow/linsolve.hpp"

// Flat key-value simulation configuration: one `section.key = value` pair per
// line, '#' comments. Unknown keys, missing required keys, and type
// mismatches are reported with the offending key and line number.

namespace onsflow {

enum class ModelKind { Chns, El };

struct OutputConfig {
    double snapshot_interval = 0.0;  // simulated-time units; 0 disables
    int series_interval = 1;         // energy rows every N steps
    std::string snapshot_format = "csv";  // csv | vtk
};

struct IcConfig {
    std::string preset;  // chns: equilibrium|coarsening|ostwald|smooth
                         // el:   uniform|smooth|defects
    unsigned long long seed = 0;
    double slope = 0.9;        // coarsening stratification
    double noise = 1e-3;       // coarsening noise amplitude
    double mean = 0.0;         // smooth profile offset
    double amp = 0.1;          // smooth profile amplitude
    double vortex = 0.0;       // initial stream-function vortex amplitude
    std::string velocity = "zero";  // zero | vortex | stokes (balanced start)
    std::string defects;       // "k:cx:cy:theta0; ..." (empty -> default set)
};

struct SimConfig {
    ModelKind model = ModelKind::Chns;
    SchemeKind scheme = SchemeKind::CN;
    GridSpec grid;
    ChnsParams chns;
    ElParams el;
    double dt = 0.0;
    double t_end = 0.0;
    OutputConfig output;
    IcConfig ic;
    SolverConfig solver;

    // canonical text with all defaults made explicit
    std::string echo() const;
};

SimConfig parse_config(const std::string& text);
SimConfig parse_config_file(const std::string& path);

std::vector<DefectSpec> parse_defect_list(const std::string& text);

}  // namespace onsflow
