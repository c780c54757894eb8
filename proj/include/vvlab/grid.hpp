#pragma once

#include <stdexcept>
#include <vector>

namespace vvlab {

/// Discrete state on the Lagrangian mass grid. Cells carry the fixed mass
/// dxi = M/N; node_x are the Eulerian positions of the N+1 cell faces, with
/// node_x.front() and node_x.back() the free boundaries.
struct MassGridState {
    double time = 0.0;
    int n_cells = 0;
    double dxi = 0.0;
    std::vector<double> node_x;   // N+1, strictly increasing
    std::vector<double> node_u;   // N+1
    std::vector<double> cell_rho; // N, rho_i = dxi / (x_{i+1} - x_i)
    double epsilon = 0.0;         // viscosity scale
    double alpha = 1.0;           // mu(rho) = rho^alpha

    double total_mass() const { return dxi * n_cells; }
    double cell_center(int i) const { return 0.5 * (node_x[i] + node_x[i + 1]); }
    double cell_width(int i) const { return node_x[i + 1] - node_x[i]; }
    double cell_u(int i) const { return 0.5 * (node_u[i] + node_u[i + 1]); }
    // mass attributed to a velocity node (half cells at the boundaries)
    double node_mass(int j) const {
        if (j == 0 || j == n_cells) return 0.5 * dxi;
        return dxi;
    }

    void recompute_density() {
        for (int i = 0; i < n_cells; ++i)
            cell_rho[i] = dxi / (node_x[i + 1] - node_x[i]);
    }

    bool positions_increasing() const {
        for (int i = 0; i < n_cells; ++i)
            if (!(node_x[i + 1] > node_x[i])) return false;
        return true;
    }

    void validate() const {
        if (n_cells < 1 || node_x.size() != size_t(n_cells) + 1 ||
            node_u.size() != size_t(n_cells) + 1 || cell_rho.size() != size_t(n_cells))
            throw std::invalid_argument("MassGridState: inconsistent sizes");
        if (!positions_increasing())
            throw std::invalid_argument("MassGridState: node positions must increase");
    }
};

} // namespace vvlab
