#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vvlab/nonlocal.hpp"
#include "vvlab/pressure_law.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

// Polytropic weak-entropy kernel [rho^{2 theta} - v^2]_+^b evaluated with the
// law's own wave-speed scale k(rho) in place of rho^theta (identical for the
// canonical kappa).
double kernel_chi(const PressureLaw& law, double rho, double v);

/// Generator psi with its derivative; pairs are built by quadrature against
/// the kernel.
struct Generator {
    std::function<double(double)> psi;
    std::function<double(double)> dpsi;
};

struct EntropyPair {
    enum class Kind { Generated, Mechanical, SpecialHash, GoursatHat };
    Kind kind = Kind::Mechanical;
    // all take (rho, m)
    std::function<double(double, double)> eta;
    std::function<double(double, double)> q;
    std::function<double(double, double)> eta_m;
    std::function<double(double, double)> eta_rho;
};

// Closed-form mechanical pair m^2/(2 rho) + rho e(rho).
EntropyPair mechanical_pair(const PressureLaw& law);

// Pair generated by a smooth psi; Gauss-Jacobi quadrature with the kernel
// weight, so polynomial generators are integrated exactly.
EntropyPair generate_pair(const Generator& gen, const PressureLaw& law,
                          int quadrature_order);

// Pair of psi(s) = s|s|/2, with the kink split off analytically: equals the
// signed mechanical pair outside |u| <= k(rho) and mechanical minus an
// incomplete-moment correction inside.
EntropyPair special_pair_hash(const PressureLaw& law);

struct CancellationReport {
    double fitted_constant = 0.0;   // max |q - u eta| / (rho^g |u| + rho^{g+t})
    double refined_constant = 0.0;  // same on a doubled grid
    double drift = 0.0;             // relative change under refinement
};
CancellationReport cancellation_check(const EntropyPair& hash_pair,
                                      const PressureLaw& law,
                                      int n_rho = 25, int n_u = 21);

// max over a (rho, u) grid of |f| / scale; used for the growth-bound fits.
double fitted_bound_constant(const std::function<double(double, double)>& f,
                             const std::function<double(double, double)>& scale,
                             const std::vector<double>& rho_grid,
                             const std::vector<double>& u_grid);

std::vector<double> log_space(double lo, double hi, int n);

struct BudgetIntegrals {
    double visc = 0.0;   // eps int int rho^alpha u_x^2 over K
    double bd = 0.0;     // eps int int rho^{alpha+gamma-3} rho_x^2 over K
    double eps43 = 0.0;  // eps^{4/3} int int (rho^alpha u_x)^{4/3} over K
};

// The three space-time budget integrals over the window [k_lo, k_hi].
BudgetIntegrals lemma_budgets(const Trajectory& traj, const PressureLaw& law,
                              double k_lo, double k_hi);

struct DissipationReport {
    std::vector<double> x_grid;
    std::vector<double> t_mid;                // midpoints of snapshot intervals
    std::vector<std::vector<double>> field;   // D per (t interval, x)
    double positive_part = 0.0;               // int int max(D, 0)
    double visc_budget = 0.0;
    double bd_budget = 0.0;
    double eps43_budget = 0.0;
};

// Entropy dissipation D = eta_t + q_x - eta_m (lambda m + rho V - rho dW*rho)
// measured on an Eulerian window [k_lo, k_hi], plus the budget integrals.
DissipationReport dissipation_residual(const Trajectory& traj,
                                       const EntropyPair& pair,
                                       const PressureLaw& law,
                                       const NonlocalConfig& nonlocal,
                                       double k_lo, double k_hi, int n_x = 512);

} // namespace vvlab
