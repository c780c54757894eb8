#include "vvlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

EnergySeries energy_budget(const Trajectory& traj, const PressureLaw& law,
                           const NonlocalConfig& nl) {
    EnergySeries es;
    const bool with_interaction = nl.interaction == InteractionTag::NewtonianPlusQuadratic;
    for (const auto& snap : traj.snaps) {
        const auto& s = snap.state;
        double ke = 0.0, ie = 0.0;
        for (int j = 0; j <= s.n_cells; ++j)
            ke += 0.5 * s.node_u[j] * s.node_u[j] * s.node_mass(j);
        for (int i = 0; i < s.n_cells; ++i)
            ie += law.internal_energy(s.cell_rho[i]) * s.dxi;
        const double inter = with_interaction ? 0.5 * interaction_energy(s).raw : 0.0;

        es.time.push_back(s.time);
        es.kinetic.push_back(ke);
        es.internal.push_back(ie);
        es.interaction.push_back(inter);
        es.visc_cum.push_back(snap.acc.visc_dissipation);
        es.align_cum.push_back(snap.acc.alignment_dissipation);
        es.damp_cum.push_back(snap.acc.damping_dissipation);
    }
    es.e0 = es.kinetic.front() + es.internal.front() + es.interaction.front();
    for (size_t k = 0; k < es.time.size(); ++k) {
        const double e = es.kinetic[k] + es.internal[k] + es.interaction[k];
        const double r = e + es.visc_cum[k] + es.align_cum[k] + es.damp_cum[k] - es.e0;
        es.residual.push_back(r);
        es.max_abs_residual = std::max(es.max_abs_residual, std::abs(r));
    }
    return es;
}

double boundary_density_reference(double rho_b0, double kappa, double gamma,
                                  double alpha, double epsilon, double t) {
    const double d = gamma - alpha;
    if (d <= 0.0) throw std::invalid_argument("boundary reference needs alpha < gamma");
    const double base = 1.0 + kappa * d / epsilon * std::pow(rho_b0, d) * t;
    return rho_b0 * std::pow(base, -1.0 / d);
}

BoundarySeries boundary_density_check(const Trajectory& traj, const PressureLaw& law,
                                      double bracket_slack) {
    BoundarySeries bs;
    const auto& first = traj.snaps.front().state;
    const double eps = first.epsilon, alpha = first.alpha;
    bs.rho_b0 = 0.5 * (first.cell_rho.front() + first.cell_rho.back());

    const bool polytropic = law.kind() == PressureLaw::Kind::Polytropic;
    // general law: the low-regime envelope constants of the pressure bracket
    const double a0 = (3.0 - law.gamma()) / (2.0 * (law.gamma() + 1.0));
    const double kappa_hi = (1.0 + std::max(a0, 0.0)) * law.kappa();

    for (const auto& snap : traj.snaps) {
        const auto& s = snap.state;
        const double t = s.time;
        bs.time.push_back(t);
        bs.rho_plus.push_back(s.cell_rho.back());
        bs.rho_minus.push_back(s.cell_rho.front());
        bs.b_plus.push_back(s.node_x.back());
        bs.b_minus.push_back(s.node_x.front());
        const double ref = boundary_density_reference(
            bs.rho_b0, polytropic ? law.kappa() : kappa_hi, law.gamma(), alpha, eps, t);
        bs.reference.push_back(ref);

        if (polytropic) {
            const double err_p = std::abs(s.cell_rho.back() - ref) / ref;
            const double err_m = std::abs(s.cell_rho.front() - ref) / ref;
            bs.max_rel_error = std::max({bs.max_rel_error, err_p, err_m});
        } else {
            // (upper) rho <= rho_b0 and (lower) the envelope ODE solution
            const double hi = bs.rho_b0 * (1.0 + bracket_slack);
            const double lo = ref * (1.0 - bracket_slack);
            for (double v : {s.cell_rho.back(), s.cell_rho.front()})
                if (!(v <= hi && v >= lo)) bs.bracket_ok = false;
        }
    }
    return bs;
}

WindowIntegrals window_integrability(const Trajectory& traj, const PressureLaw& law,
                                     double k_lo, double k_hi) {
    if (!(k_hi > k_lo)) throw std::invalid_argument("window_integrability: bad window");
    for (const auto& snap : traj.snaps) {
        if (!(k_lo > snap.state.node_x.front() && k_hi < snap.state.node_x.back()))
            throw std::invalid_argument(
                "window_integrability: window leaves the gas domain");
    }
    const bool polytropic = law.kind() == PressureLaw::Kind::Polytropic;
    std::vector<double> times, dens_t, vel_t;
    for (const auto& snap : traj.snaps) {
        const auto& s = snap.state;
        double dens = 0.0, vel = 0.0;
        for (int i = 0; i < s.n_cells; ++i) {
            const double xl = s.node_x[i], xr = s.node_x[i + 1];
            const double overlap = std::min(xr, k_hi) - std::max(xl, k_lo);
            if (overlap <= 0.0) continue;
            const double w = overlap / (xr - xl) * s.dxi;  // mass inside the window
            const double rho = s.cell_rho[i];
            const double ubar = s.cell_u(i);
            const double g = law.gamma_at(rho), th = law.theta_at(rho);
            dens += (polytropic ? std::pow(rho, g) : law.pressure(rho)) * w;
            vel += (std::pow(std::abs(ubar), 3.0) + std::pow(rho, g + th - 1.0)) * w;
        }
        times.push_back(s.time);
        dens_t.push_back(dens);
        vel_t.push_back(vel);
    }
    WindowIntegrals out;
    out.density = trapezoid(times, dens_t);
    out.velocity = trapezoid(times, vel_t);
    return out;
}

EulerianSample eulerian_sample(const MassGridState& s, const std::vector<double>& xg) {
    const int n = s.n_cells;
    std::vector<double> centers(n);
    for (int i = 0; i < n; ++i) centers[i] = s.cell_center(i);

    EulerianSample out;
    out.rho.assign(xg.size(), 0.0);
    out.u.assign(xg.size(), 0.0);
    out.m.assign(xg.size(), 0.0);
    for (size_t g = 0; g < xg.size(); ++g) {
        const double x = xg[g];
        if (x < s.node_x.front() || x > s.node_x.back()) continue;
        double rho;
        if (x <= centers.front())
            rho = s.cell_rho.front();
        else if (x >= centers.back())
            rho = s.cell_rho.back();
        else {
            const auto it = std::upper_bound(centers.begin(), centers.end(), x);
            const size_t i = size_t(it - centers.begin()) - 1;
            const double t = (x - centers[i]) / (centers[i + 1] - centers[i]);
            rho = s.cell_rho[i] + t * (s.cell_rho[i + 1] - s.cell_rho[i]);
        }
        const auto jt = std::upper_bound(s.node_x.begin(), s.node_x.end(), x);
        const size_t j = std::min(size_t(jt - s.node_x.begin()),
                                  s.node_x.size() - 1) - 1;
        const double t = (x - s.node_x[j]) / (s.node_x[j + 1] - s.node_x[j]);
        const double u = s.node_u[j] + t * (s.node_u[j + 1] - s.node_u[j]);
        out.rho[g] = rho;
        out.u[g] = u;
        out.m[g] = rho * u;
    }
    return out;
}

ConvergenceMetric convergence_metric(const Trajectory& a, const Trajectory& b,
                                     double k_lo, double k_hi, int n_points,
                                     double q_rho, double q_m) {
    if (a.snaps.size() != b.snaps.size())
        throw std::invalid_argument("convergence_metric: mismatched time axes");
    for (size_t k = 0; k < a.snaps.size(); ++k)
        if (std::abs(a.snaps[k].state.time - b.snaps[k].state.time) >
            1e-10 * (1.0 + std::abs(a.snaps[k].state.time)))
            throw std::invalid_argument("convergence_metric: mismatched time axes");

    std::vector<double> xg(n_points);
    for (int i = 0; i < n_points; ++i)
        xg[i] = k_lo + (k_hi - k_lo) * i / double(n_points - 1);
    const double dx = (k_hi - k_lo) / (n_points - 1);

    ConvergenceMetric cm;
    for (size_t k = 0; k < a.snaps.size(); ++k) {
        const auto sa = eulerian_sample(a.snaps[k].state, xg);
        const auto sb = eulerian_sample(b.snaps[k].state, xg);
        double l1r = 0.0, l1m = 0.0, lqr = 0.0, lqm = 0.0;
        for (int i = 0; i < n_points; ++i) {
            const double dr = std::abs(sa.rho[i] - sb.rho[i]);
            const double dm = std::abs(sa.m[i] - sb.m[i]);
            l1r += dr * dx;
            l1m += dm * dx;
            lqr += std::pow(dr, q_rho) * dx;
            lqm += std::pow(dm, q_m) * dx;
        }
        cm.time.push_back(a.snaps[k].state.time);
        cm.l1_rho.push_back(l1r);
        cm.l1_m.push_back(l1m);
        cm.lq_rho.push_back(std::pow(lqr, 1.0 / q_rho));
        cm.lq_m.push_back(std::pow(lqm, 1.0 / q_m));
        cm.sup_l1_rho = std::max(cm.sup_l1_rho, l1r);
        cm.sup_l1_m = std::max(cm.sup_l1_m, l1m);
    }
    return cm;
}

DiagnosticsReport build_report(const Trajectory& traj, const PressureLaw& law,
                               const NonlocalConfig& nl, const DiagnosticsOptions& opt) {
    DiagnosticsReport rep;
    rep.energy = energy_budget(traj, law, nl);
    rep.boundary = boundary_density_check(traj, law);

    const double mass_expected = traj.total_mass;
    double worst_mass = 0.0, worst_gronwall = 0.0, worst_align_mom = 0.0,
           worst_align_id = 0.0;
    bool bd_finite = true, bd_monotone = true;
    double prev_bd_cum = -1.0;

    for (const auto& snap : traj.snaps) {
        const auto& s = snap.state;
        double mass = 0.0, m2 = 0.0;
        for (int i = 0; i < s.n_cells; ++i) {
            mass += s.cell_rho[i] * s.cell_width(i);
            const double c = s.cell_center(i);
            m2 += c * c * s.dxi;
        }
        rep.mass_series.push_back(mass);
        rep.second_moment_series.push_back(m2);
        worst_mass = std::max(worst_mass, std::abs(mass - mass_expected) / mass_expected);

        const double bound = (rep.second_moment_series.front() +
                              snap.acc.rho_u2_time_integral) *
                             std::exp(s.time);
        rep.gronwall_bound_series.push_back(bound);
        worst_gronwall = std::max(worst_gronwall, m2 / bound);

        double bd = 0.0;
        for (int j = 1; j < s.n_cells; ++j) {
            const double rbar = std::max(0.5 * (s.cell_rho[j] + s.cell_rho[j - 1]), 1e-12);
            const double drho = (s.cell_rho[j] - s.cell_rho[j - 1]) / s.dxi;
            bd += std::pow(rbar, 2.0 * s.alpha - 2.0) * drho * drho * s.dxi;
        }
        bd *= s.epsilon * s.epsilon;
        rep.bd_instant_series.push_back(bd);
        rep.bd_cumulative_series.push_back(snap.acc.bd_dissipation);
        if (!std::isfinite(bd) || !std::isfinite(snap.acc.bd_dissipation))
            bd_finite = false;
        if (snap.acc.bd_dissipation < prev_bd_cum) bd_monotone = false;
        prev_bd_cum = snap.acc.bd_dissipation;

        worst_align_mom = std::max(worst_align_mom, snap.acc.max_alignment_momentum);
        worst_align_id = std::max(worst_align_id, snap.acc.max_alignment_identity_err);
    }

    rep.free_boundary_margin = free_boundary_margin(traj, traj.initial_halfwidth);

    if (opt.window_hi > opt.window_lo)
        rep.window = window_integrability(traj, law, opt.window_lo, opt.window_hi);

    auto flag = [&](const std::string& name, double value, double threshold, bool pass) {
        rep.flags.push_back({name, value, threshold, pass});
    };
    flag("mass_conservation_rel", worst_mass, opt.mass_tol, worst_mass <= opt.mass_tol);
    const double res_rel = rep.energy.max_abs_residual / std::max(rep.energy.e0, 1e-300);
    flag("energy_residual_rel", res_rel, opt.energy_tol, res_rel <= opt.energy_tol);
    flag("second_moment_gronwall", worst_gronwall, 1.0 + opt.gronwall_slack,
         worst_gronwall <= 1.0 + opt.gronwall_slack);
    if (nl.kernel.active()) {
        flag("alignment_momentum_neutrality", worst_align_mom, opt.align_tol,
             worst_align_mom <= opt.align_tol);
        flag("alignment_dissipation_identity", worst_align_id, opt.align_tol,
             worst_align_id <= opt.align_tol);
    }
    if (law.kind() == PressureLaw::Kind::Polytropic)
        flag("boundary_density_rel_error", rep.boundary.max_rel_error, opt.boundary_tol,
             rep.boundary.max_rel_error <= opt.boundary_tol);
    else
        flag("boundary_density_bracket", rep.boundary.bracket_ok ? 0.0 : 1.0, 0.5,
             rep.boundary.bracket_ok);
    flag("bd_entropy_finite_monotone", (bd_finite && bd_monotone) ? 0.0 : 1.0, 0.5,
         bd_finite && bd_monotone);
    if (traj.snaps.front().state.epsilon <= opt.margin_eps0)
        flag("free_boundary_margin", rep.free_boundary_margin, 0.5,
             rep.free_boundary_margin >= 0.5);
    return rep;
}

} // namespace vvlab
