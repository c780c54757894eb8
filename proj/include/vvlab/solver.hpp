#pragma once

#include <vector>

#include "vvlab/grid.hpp"
#include "vvlab/initial_data.hpp"
#include "vvlab/nonlocal.hpp"
#include "vvlab/pressure_law.hpp"

namespace vvlab {

enum class ViscousScheme { BackwardEuler, CrankNicolson };

struct SolverConfig {
    double cfl = 0.5;             // in (0, 1]
    double dt_max = 5e-3;
    double vacuum_floor = 1e-12;  // applied inside mu and P' only
    ViscousScheme viscous_scheme = ViscousScheme::BackwardEuler;
    double t_end = 1.0;
    bool strang_splitting = false;
    int max_rejects = 8;
    bool freeze_geometry = false;  // test hook: sources only, no stress or motion
};

/// Running integrals carried along a simulation (all cumulative in time).
struct RunAccumulators {
    double visc_dissipation = 0.0;   // eps int rho^{alpha+1} u_xi^2 dxi dt
    double damping_dissipation = 0.0;  // -lambda int u^2 dxi dt (signed)
    double alignment_dissipation = 0.0;  // symmetrized pair sum
    double rho_u2_time_integral = 0.0;   // int int rho u^2 dx dt
    double bd_dissipation = 0.0;  // eps int P'(rho) rho^{alpha-1} rho_xi^2 dxi dt
    double max_alignment_momentum = 0.0;    // max_t |sum_j V_j m_j|
    double max_alignment_identity_err = 0.0;
    double max_mass_error = 0.0;  // max_t |sum rho_i w_i - M| / M, every step
    long steps = 0;
    long rejected_steps = 0;
};

struct Snapshot {
    MassGridState state;
    RunAccumulators acc;
};

struct Trajectory {
    std::vector<Snapshot> snaps;
    double initial_halfwidth = 0.0;  // b
    double total_mass = 0.0;

    const Snapshot& at_time_index(size_t k) const { return snaps.at(k); }
    std::vector<double> output_times() const {
        std::vector<double> t;
        t.reserve(snaps.size());
        for (const auto& s : snaps) t.push_back(s.state.time);
        return t;
    }
};

// Largest stable explicit step: cfl * dxi / (rho sqrt(P') + rho |du|) per cell.
double stable_dt(const MassGridState& s, const PressureLaw& law,
                 const SolverConfig& cfg);

// One operator-split step of the given size. Throws on cell inversion.
void step(MassGridState& s, double dt, const PressureLaw& law,
          const NonlocalConfig& nonlocal, const SolverConfig& cfg,
          RunAccumulators& acc);

// Integrate to cfg.t_end emitting n_outputs+1 equally spaced snapshots
// (including t = 0). Step rejection with halving on inversion.
Trajectory run(const MassGridState& initial, const PressureLaw& law,
               const NonlocalConfig& nonlocal, const SolverConfig& cfg,
               int n_outputs);

// min over snapshots of min(b+(t), -b-(t)) / b.
double free_boundary_margin(const Trajectory& traj, double b);

} // namespace vvlab
