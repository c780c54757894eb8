#pragma once

#include <string>
#include <vector>

#include "vvlab/config.hpp"
#include "vvlab/diagnostics.hpp"
#include "vvlab/entropy.hpp"
#include "vvlab/initial_data.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

struct RunResult {
    double epsilon = 0.0;
    ApproxInitialData init;
    Trajectory traj;
    DiagnosticsReport report;
    BudgetIntegrals budgets;
    std::string dir;
};

// One simulation at the given epsilon. When out_dir is nonempty the artifact
// layout (report.json, series/, snapshots/, plots/) is written there.
RunResult run_single(const RunConfig& cfg, double epsilon, const std::string& out_dir,
                     bool plots);

struct SweepResult {
    std::vector<RunResult> runs;
    std::vector<ConvergenceMetric> ladder;  // consecutive epsilon pairs
    std::vector<CheckFlag> flags;
    double fitted_eps43_exponent = 0.0;
    bool pass = false;
};

SweepResult run_sweep(const RunConfig& cfg, const std::string& out_dir, int workers,
                      bool plots);

struct EntropyCheckResult {
    std::vector<CheckFlag> flags;
    bool pass = false;
};

// Entropy-pair self-tests for the configured law; exports the Goursat table.
EntropyCheckResult run_entropy_checks(const RunConfig& cfg, const std::string& out_dir);

} // namespace vvlab
