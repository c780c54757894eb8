#pragma once

#include <string>
#include <vector>

#include "vvlab/nonlocal.hpp"
#include "vvlab/pressure_law.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

struct EnergySeries {
    std::vector<double> time;
    std::vector<double> kinetic, internal, interaction;
    std::vector<double> visc_cum, align_cum, damp_cum;
    std::vector<double> residual;  // E(t) + dissipation - E(0), signed
    double e0 = 0.0;
    double max_abs_residual = 0.0;
};

EnergySeries energy_budget(const Trajectory& traj, const PressureLaw& law,
                           const NonlocalConfig& nl);

// Closed-form boundary density of the stress-free expansion for a power law.
double boundary_density_reference(double rho_b0, double kappa, double gamma,
                                  double alpha, double epsilon, double t);

struct BoundarySeries {
    std::vector<double> time, rho_plus, rho_minus, reference, b_plus, b_minus;
    double max_rel_error = 0.0;   // polytropic, against the closed form
    bool bracket_ok = true;       // general law, upper/lower envelope
    double rho_b0 = 0.0;
};

BoundarySeries boundary_density_check(const Trajectory& traj, const PressureLaw& law,
                                      double bracket_slack = 1e-6);

struct WindowIntegrals {
    double density = 0.0;   // int int rho^{gamma+1} (rho P(rho) for general laws)
    double velocity = 0.0;  // int int rho |u|^3 + rho^{gamma+theta}
};

WindowIntegrals window_integrability(const Trajectory& traj, const PressureLaw& law,
                                     double k_lo, double k_hi);

struct EulerianSample {
    std::vector<double> rho, u, m;
};
EulerianSample eulerian_sample(const MassGridState& s, const std::vector<double>& xg);

struct ConvergenceMetric {
    std::vector<double> time;
    std::vector<double> l1_rho, l1_m, lq_rho, lq_m;
    double sup_l1_rho = 0.0, sup_l1_m = 0.0;
};

// Distances between two runs on a common Eulerian window; trajectories must
// share their output-time axes.
ConvergenceMetric convergence_metric(const Trajectory& a, const Trajectory& b,
                                     double k_lo, double k_hi, int n_points = 4096,
                                     double q_rho = 2.0, double q_m = 1.5);

struct CheckFlag {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct DiagnosticsOptions {
    double window_lo = 0.0, window_hi = 0.0;  // equal => skip window integrals
    double mass_tol = 1e-12;                  // relative
    double energy_tol = 1e-2;                 // relative to E0
    double boundary_tol = 2e-2;
    double align_tol = 1e-10;
    double gronwall_slack = 1e-3;
    double margin_eps0 = 1e-2;  // margin flag applies for epsilon <= eps0
};

struct DiagnosticsReport {
    EnergySeries energy;
    BoundarySeries boundary;
    std::vector<double> mass_series;
    std::vector<double> second_moment_series;
    std::vector<double> gronwall_bound_series;  // (M2(0)+int rho u^2) e^t
    std::vector<double> bd_instant_series;      // eps^2 int rho^{2a-3} rho_x^2 dx
    std::vector<double> bd_cumulative_series;   // eps int int P' rho^{a-2} rho_x^2
    WindowIntegrals window;
    double free_boundary_margin = 0.0;
    std::vector<CheckFlag> flags;

    bool all_pass() const {
        for (const auto& f : flags)
            if (!f.pass) return false;
        return true;
    }
};

DiagnosticsReport build_report(const Trajectory& traj, const PressureLaw& law,
                               const NonlocalConfig& nl,
                               const DiagnosticsOptions& opt = {});

} // namespace vvlab
