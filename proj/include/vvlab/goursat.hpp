#pragma once

#include <memory>
#include <vector>

#include "vvlab/entropy.hpp"
#include "vvlab/pressure_law.hpp"

namespace vvlab {

struct GoursatOptions {
    double rho_max = 4.0;
    int n_u = 512;        // u cells across [-k(rho_max), k(rho_max)]
    int n_rho = 512;      // output rows across [0, rho_max]
    double march_cfl = 0.8;
};

/// Tabulated solution of eta_rho_rho = k'(rho)^2 eta_uu inside the wave cone
/// |u| <= k(rho), with the signed mechanical pair as characteristic data and
/// as the exact exterior continuation.
struct GoursatTable {
    PressureLaw law;
    std::vector<double> rho_grid;  // uniform, rho_grid[0] = 0
    std::vector<double> u_grid;    // uniform, symmetric
    // row-major [i_rho][j_u]
    std::vector<std::vector<double>> eta;
    std::vector<std::vector<double>> q;
    std::vector<std::vector<double>> eta_u;
    std::vector<std::vector<double>> eta_rho;

    double pde_residual_scaled = 0.0;  // L1-scaled interior second-difference residual
    double bound_constant = 0.0;       // max |eta| / (rho u^2 + rho^gamma(rho))

    double k_of(double rho) const { return law.sound_integral(rho); }
    double eval_eta(double rho, double u) const;
    double eval_q(double rho, double u) const;
    double eval_eta_u(double rho, double u) const;
    double eval_eta_rho(double rho, double u) const;
};

std::shared_ptr<GoursatTable> solve_goursat(const PressureLaw& law,
                                            const GoursatOptions& opt = {});

// Wrap the table into (rho, m) evaluators.
EntropyPair goursat_hat(const PressureLaw& law, double rho_max = 4.0,
                        int grid_resolution = 512);
EntropyPair goursat_hat(std::shared_ptr<GoursatTable> table);

} // namespace vvlab
