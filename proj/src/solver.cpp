#include "vvlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvlab {

namespace {

double floored(double rho, double floor) { return rho > floor ? rho : floor; }

// mu(rho) rho with the vacuum floor applied inside mu only
double visc_coeff(double rho, double alpha, double floor) {
    return rho * std::pow(floored(rho, floor), alpha);
}

// Solve the tridiagonal system  a_j x_{j-1} + b_j x_j + c_j x_{j+1} = d_j.
void thomas_solve(std::vector<double>& a, std::vector<double>& b,
                  std::vector<double>& c, std::vector<double>& d) {
    const size_t n = b.size();
    for (size_t j = 1; j < n; ++j) {
        const double w = a[j] / b[j - 1];
        b[j] -= w * c[j - 1];
        d[j] -= w * d[j - 1];
    }
    d[n - 1] /= b[n - 1];
    for (size_t j = n - 1; j-- > 0;) d[j] = (d[j] - c[j] * d[j + 1]) / b[j];
}

struct ExplicitForces {
    std::vector<double> accel;  // per node
    AlignmentField align;
    double damping_rate = 0.0;  // -lambda sum u^2 m at evaluation time
    double align_identity_err = 0.0;  // |-sum u V m - pair sum|
};

ExplicitForces explicit_forces(const MassGridState& s, const PressureLaw& law,
                               const NonlocalConfig& nl, const SolverConfig& cfg) {
    const int n = s.n_cells;
    ExplicitForces f;
    f.accel.assign(n + 1, 0.0);

    if (!cfg.freeze_geometry) {
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) p[i] = law.pressure(s.cell_rho[i]);
        // stress-free ghost faces: zero pressure outside the gas
        f.accel[0] = -(p[0] - 0.0) / (0.5 * s.dxi);
        f.accel[n] = -(0.0 - p[n - 1]) / (0.5 * s.dxi);
        for (int j = 1; j < n; ++j) f.accel[j] = -(p[j] - p[j - 1]) / s.dxi;
    }

    if (nl.lambda != 0.0) {
        for (int j = 0; j <= n; ++j) {
            f.accel[j] += nl.lambda * s.node_u[j];
            f.damping_rate += -nl.lambda * s.node_u[j] * s.node_u[j] * s.node_mass(j);
        }
    }

    if (nl.kernel.active()) {
        f.align = alignment_velocity_coupling(s, nl);
        double uvm = 0.0;
        for (int j = 0; j <= n; ++j) {
            f.accel[j] += f.align.v[j];
            uvm -= s.node_u[j] * f.align.v[j] * s.node_mass(j);
        }
        f.align_identity_err = std::abs(uvm - f.align.dissipation_rate);
    }

    if (nl.interaction == InteractionTag::NewtonianPlusQuadratic) {
        const auto fw = interaction_force_at_nodes(s);
        for (int j = 0; j <= n; ++j) f.accel[j] -= fw[j];
    }
    return f;
}

// Implicit update of the viscous term eps (mu rho u_xi)_xi with zero viscous
// stress on the ghost faces.
void viscous_substep(MassGridState& s, double dt, const SolverConfig& cfg,
                     std::vector<double>& u_mid_out) {
    const int n = s.n_cells;
    const double eps = s.epsilon;
    if (eps <= 0.0 || cfg.freeze_geometry) {
        u_mid_out = s.node_u;
        return;
    }
    std::vector<double> cvisc(n);
    for (int i = 0; i < n; ++i)
        cvisc[i] = visc_coeff(s.cell_rho[i], s.alpha, cfg.vacuum_floor);

    const double theta = cfg.viscous_scheme == ViscousScheme::CrankNicolson ? 0.5 : 1.0;
    std::vector<double> a(n + 1, 0.0), b(n + 1, 1.0), c(n + 1, 0.0), d(n + 1, 0.0);
    const double r = eps * dt / (s.dxi * s.dxi);

    std::vector<double> lu(n + 1, 0.0);  // L u^n, for the Crank-Nicolson half
    if (theta < 1.0) {
        for (int j = 1; j < n; ++j)
            lu[j] = cvisc[j] * (s.node_u[j + 1] - s.node_u[j]) -
                    cvisc[j - 1] * (s.node_u[j] - s.node_u[j - 1]);
        lu[0] = 2.0 * cvisc[0] * (s.node_u[1] - s.node_u[0]);
        lu[n] = -2.0 * cvisc[n - 1] * (s.node_u[n] - s.node_u[n - 1]);
    }

    for (int j = 1; j < n; ++j) {
        a[j] = -theta * r * cvisc[j - 1];
        c[j] = -theta * r * cvisc[j];
        b[j] = 1.0 - a[j] - c[j];
        d[j] = s.node_u[j] + (1.0 - theta) * r * lu[j];
    }
    // boundary rows carry half a cell of mass
    c[0] = -theta * 2.0 * r * cvisc[0];
    b[0] = 1.0 - c[0];
    d[0] = s.node_u[0] + (1.0 - theta) * 2.0 * r * lu[0] * 0.5;
    a[n] = -theta * 2.0 * r * cvisc[n - 1];
    b[n] = 1.0 - a[n];
    d[n] = s.node_u[n] + (1.0 - theta) * 2.0 * r * lu[n] * 0.5;

    std::vector<double> u_old = s.node_u;
    thomas_solve(a, b, c, d);
    s.node_u = d;
    u_mid_out.resize(n + 1);
    for (int j = 0; j <= n; ++j)
        u_mid_out[j] = theta * s.node_u[j] + (1.0 - theta) * u_old[j];
}

} // namespace

double stable_dt(const MassGridState& s, const PressureLaw& law,
                 const SolverConfig& cfg) {
    double dt = cfg.dt_max;
    for (int i = 0; i < s.n_cells; ++i) {
        const double rho = s.cell_rho[i];
        const double cs = std::sqrt(law.dpressure(floored(rho, cfg.vacuum_floor)));
        const double du = std::abs(s.node_u[i + 1] - s.node_u[i]);
        const double speed = rho * (cs + du);
        if (speed > 0.0) dt = std::min(dt, cfg.cfl * s.dxi / speed);
    }
    return dt;
}

void step(MassGridState& s, double dt, const PressureLaw& law,
          const NonlocalConfig& nl, const SolverConfig& cfg, RunAccumulators& acc) {
    const int n = s.n_cells;
    std::vector<double> u_before = s.node_u;

    auto apply_explicit = [&](double h) {
        const auto f = explicit_forces(s, law, nl, cfg);
        for (int j = 0; j <= n; ++j) s.node_u[j] += h * f.accel[j];
        acc.damping_dissipation += h * f.damping_rate;
        if (nl.kernel.active()) {
            acc.alignment_dissipation += h * f.align.dissipation_rate;
            acc.max_alignment_momentum =
                std::max(acc.max_alignment_momentum, std::abs(f.align.momentum_sum));
            acc.max_alignment_identity_err =
                std::max(acc.max_alignment_identity_err, f.align_identity_err);
        }
    };

    if (cfg.strang_splitting) {
        apply_explicit(0.5 * dt);
    } else {
        apply_explicit(dt);
    }

    std::vector<double> u_mid;
    viscous_substep(s, dt, cfg, u_mid);

    if (cfg.strang_splitting) apply_explicit(0.5 * dt);

    if (!cfg.freeze_geometry) {
        // advance faces with the end-of-step velocity; densities stay tied to
        // the face positions so mass is conserved identically
        std::vector<double> x_old = s.node_x;
        for (int j = 0; j <= n; ++j) s.node_x[j] += dt * s.node_u[j];
        if (!s.positions_increasing()) {
            s.node_x = std::move(x_old);
            s.node_u = std::move(u_before);
            throw std::runtime_error("cell inversion");
        }
        s.recompute_density();
    }

    // cumulative integrals (end-of-step states)
    if (s.epsilon > 0.0 && !cfg.freeze_geometry) {
        double diss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double du = (u_mid[i + 1] - u_mid[i]) / s.dxi;
            diss += visc_coeff(s.cell_rho[i], s.alpha, cfg.vacuum_floor) * du * du * s.dxi;
        }
        acc.visc_dissipation += s.epsilon * dt * diss;

        double bd = 0.0;
        for (int j = 1; j < n; ++j) {
            const double rbar = floored(0.5 * (s.cell_rho[j] + s.cell_rho[j - 1]),
                                        cfg.vacuum_floor);
            const double drho = (s.cell_rho[j] - s.cell_rho[j - 1]) / s.dxi;
            bd += law.dpressure(rbar) * std::pow(rbar, s.alpha - 1.0) * drho * drho * s.dxi;
        }
        acc.bd_dissipation += s.epsilon * dt * bd;
    }
    double u2_new = 0.0, u2_old = 0.0;
    for (int j = 0; j <= n; ++j) {
        u2_new += s.node_u[j] * s.node_u[j] * s.node_mass(j);
        u2_old += u_before[j] * u_before[j] * s.node_mass(j);
    }
    acc.rho_u2_time_integral += 0.5 * dt * (u2_new + u2_old);

    double mass = 0.0;
    for (int i = 0; i < n; ++i) mass += s.cell_rho[i] * s.cell_width(i);
    acc.max_mass_error = std::max(
        acc.max_mass_error, std::abs(mass - s.total_mass()) / s.total_mass());

    s.time += dt;
    acc.steps += 1;
}

Trajectory run(const MassGridState& initial, const PressureLaw& law,
               const NonlocalConfig& nl, const SolverConfig& cfg, int n_outputs) {
    initial.validate();
    if (n_outputs < 1) n_outputs = 1;

    Trajectory traj;
    traj.initial_halfwidth = initial.node_x.back();
    traj.total_mass = initial.total_mass();

    MassGridState s = initial;
    RunAccumulators acc;
    traj.snaps.push_back({s, acc});
    if (cfg.t_end <= 0.0) return traj;

    for (int k = 1; k <= n_outputs; ++k) {
        const double t_target = cfg.t_end * k / n_outputs;
        while (s.time < t_target - 1e-14 * cfg.t_end) {
            double dt = std::min(stable_dt(s, law, cfg), t_target - s.time);
            int rejects = 0;
            for (;;) {
                try {
                    step(s, dt, law, nl, cfg, acc);
                    break;
                } catch (const std::runtime_error&) {
                    if (++rejects > cfg.max_rejects)
                        throw std::runtime_error(
                            "run: step size collapsed after repeated cell inversions");
                    acc.rejected_steps += 1;
                    dt *= 0.5;
                }
            }
        }
        traj.snaps.push_back({s, acc});
    }
    return traj;
}

double free_boundary_margin(const Trajectory& traj, double b) {
    double margin = 1e300;
    for (const auto& snap : traj.snaps) {
        const double bp = snap.state.node_x.back();
        const double bm = -snap.state.node_x.front();
        margin = std::min(margin, std::min(bp, bm) / b);
    }
    return margin;
}

} // namespace vvlab
