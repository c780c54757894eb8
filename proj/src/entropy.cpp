#include "vvlab/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

namespace {

void require_polytropic(const PressureLaw& law, const char* who) {
    if (law.kind() != PressureLaw::Kind::Polytropic)
        throw std::invalid_argument(std::string(who) + ": polytropic law required");
}

// wave-speed scale of the kernel support, k(rho) = sqrt(kappa gamma)/theta rho^theta
double support_k(const PressureLaw& law, double rho) {
    return std::sqrt(law.kappa() * law.gamma()) / law.theta() *
           std::pow(rho, law.theta());
}

} // namespace

double kernel_chi(const PressureLaw& law, double rho, double v) {
    require_polytropic(law, "kernel_chi");
    if (!(rho > 0.0)) return 0.0;
    const double k = support_k(law, rho);
    const double s = k * k - v * v;
    if (s <= 0.0) return 0.0;
    const double b = law.kernel_exponent();
    return b == 0.0 ? 1.0 : std::pow(s, b);
}

std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double a = std::log(lo), c = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (c - a) * i / double(n - 1));
    return g;
}

EntropyPair mechanical_pair(const PressureLaw& law) {
    EntropyPair p;
    p.kind = EntropyPair::Kind::Mechanical;
    p.eta = [law](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        return 0.5 * m * m / rho + rho * law.internal_energy(rho);
    };
    p.q = [law](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho;
        return 0.5 * m * u * u + m * (law.internal_energy(rho) + law.pressure(rho) / rho);
    };
    p.eta_m = [](double rho, double m) { return rho > 0.0 ? m / rho : 0.0; };
    p.eta_rho = [law](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho;
        return -0.5 * u * u + law.internal_energy(rho) + law.pressure(rho) / rho;
    };
    return p;
}

EntropyPair generate_pair(const Generator& gen, const PressureLaw& law,
                          int quadrature_order) {
    require_polytropic(law, "generate_pair");
    if (quadrature_order < 2)
        throw std::invalid_argument("generate_pair: quadrature order too small");
    const double b = law.kernel_exponent();
    const double theta = law.theta();
    const auto rule = std::make_shared<JacobiRule>(
        gauss_jacobi_symmetric(quadrature_order, b));
    const double inv_i0 = 1.0 / jacobi_even_moment(0, b);
    auto psi = gen.psi;
    auto dpsi = gen.dpsi;

    EntropyPair p;
    p.kind = EntropyPair::Kind::Generated;
    p.eta = [=](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho, k = support_k(law, rho);
        double s = 0.0;
        for (size_t i = 0; i < rule->nodes.size(); ++i)
            s += rule->weights[i] * psi(u + k * rule->nodes[i]);
        return rho * inv_i0 * s;
    };
    p.q = [=](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho, k = support_k(law, rho);
        double s = 0.0;
        for (size_t i = 0; i < rule->nodes.size(); ++i)
            s += rule->weights[i] * (u + theta * k * rule->nodes[i]) *
                 psi(u + k * rule->nodes[i]);
        return rho * inv_i0 * s;
    };
    p.eta_m = [=](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho, k = support_k(law, rho);
        double s = 0.0;
        for (size_t i = 0; i < rule->nodes.size(); ++i)
            s += rule->weights[i] * dpsi(u + k * rule->nodes[i]);
        return inv_i0 * s;
    };
    p.eta_rho = [=](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho, k = support_k(law, rho);
        double s = 0.0;
        for (size_t i = 0; i < rule->nodes.size(); ++i) {
            const double w = u + k * rule->nodes[i];
            s += rule->weights[i] *
                 (psi(w) + (theta * k * rule->nodes[i] - u) * dpsi(w));
        }
        return inv_i0 * s;
    };
    return p;
}

namespace {

struct HashCtx {
    PressureLaw law;
    double b = 0.0, theta = 0.0, inv_i0 = 0.0;

    // int_{-1}^{z0} (u + k z)^m (1 - z^2)^b dz
    double incomplete(double u, double k, double z0, int m) const {
        const double bb = b;
        return tanh_sinh(
            [&](double z) {
                const double w = u + k * z;
                double pw = 1.0;
                for (int i = 0; i < m; ++i) pw *= w;
                return pw * std::pow((1.0 - z) * (1.0 + z), bb);
            },
            -1.0, z0, 1e-13);
    }
};

} // namespace

EntropyPair special_pair_hash(const PressureLaw& law) {
    require_polytropic(law, "special_pair_hash");
    auto ctx = std::make_shared<HashCtx>();
    ctx->law = law;
    ctx->b = law.kernel_exponent();
    ctx->theta = law.theta();
    ctx->inv_i0 = 1.0 / jacobi_even_moment(0, ctx->b);
    const auto mech = mechanical_pair(law);

    EntropyPair p;
    p.kind = EntropyPair::Kind::SpecialHash;
    p.eta = [ctx, mech](double rho, double m) {
        if (!(rho > 0.0) || m == 0.0) return 0.0;
        const double u = m / rho, k = support_k(ctx->law, rho);
        if (u >= k) return mech.eta(rho, m);
        if (u <= -k) return -mech.eta(rho, m);
        const double j2 = ctx->incomplete(u, k, -u / k, 2);
        return mech.eta(rho, m) - rho * ctx->inv_i0 * j2;
    };
    p.q = [ctx, mech](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho, k = support_k(ctx->law, rho);
        if (u >= k) return mech.q(rho, m);
        if (u <= -k) return -mech.q(rho, m);
        const double z0 = -u / k;
        const double j2 = ctx->incomplete(u, k, z0, 2);
        const double j3 = ctx->incomplete(u, k, z0, 3);
        return mech.q(rho, m) -
               rho * ctx->inv_i0 * ((1.0 - ctx->theta) * u * j2 + ctx->theta * j3);
    };
    p.eta_m = [ctx](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho, k = support_k(ctx->law, rho);
        if (u >= k) return u;
        if (u <= -k) return -u;
        const double j1 = ctx->incomplete(u, k, -u / k, 1);
        return u - 2.0 * ctx->inv_i0 * j1;
    };
    p.eta_rho = [ctx, mech](double rho, double m) {
        if (!(rho > 0.0) || m == 0.0) return 0.0;
        const double u = m / rho, k = support_k(ctx->law, rho);
        if (u >= k) return mech.eta_rho(rho, m);
        if (u <= -k) return -mech.eta_rho(rho, m);
        const double z0 = -u / k;
        const double j1 = ctx->incomplete(u, k, z0, 1);
        const double j2 = ctx->incomplete(u, k, z0, 2);
        return mech.eta_rho(rho, m) -
               2.0 * ctx->inv_i0 * ((ctx->theta + 0.5) * j2 - (1.0 + ctx->theta) * u * j1);
    };
    return p;
}

CancellationReport cancellation_check(const EntropyPair& hash_pair,
                                      const PressureLaw& law, int n_rho, int n_u) {
    const double g = law.gamma(), th = law.theta();
    auto fit = [&](int nr, int nu) {
        double worst = 0.0;
        for (double rho : log_space(1e-6, 1e2, nr)) {
            std::vector<double> us = log_space(1e-3, 1e2, nu);
            us.push_back(0.0);
            for (double mag : us)
                for (double sgn : {-1.0, 1.0}) {
                    const double u = sgn * mag;
                    const double m = rho * u;
                    const double num =
                        std::abs(hash_pair.q(rho, m) - u * hash_pair.eta(rho, m));
                    const double den =
                        std::pow(rho, g) * std::abs(u) + std::pow(rho, g + th);
                    if (den > 0.0) worst = std::max(worst, num / den);
                }
        }
        return worst;
    };
    CancellationReport rep;
    rep.fitted_constant = fit(n_rho, n_u);
    rep.refined_constant = fit(2 * n_rho - 1, 2 * n_u - 1);
    rep.drift = std::abs(rep.refined_constant - rep.fitted_constant) /
                std::max(rep.fitted_constant, 1e-300);
    return rep;
}

double fitted_bound_constant(const std::function<double(double, double)>& f,
                             const std::function<double(double, double)>& scale,
                             const std::vector<double>& rho_grid,
                             const std::vector<double>& u_grid) {
    double worst = 0.0;
    for (double rho : rho_grid)
        for (double u : u_grid) {
            const double den = scale(rho, u);
            if (den > 0.0) worst = std::max(worst, f(rho, u) / den);
        }
    return worst;
}

namespace {

// piecewise-linear sample of a staggered state on an x grid
struct EulerianSlice {
    std::vector<double> rho, u, m, source;  // source = lambda m + rho V - rho dW*rho
};

EulerianSlice sample_state(const MassGridState& s, const NonlocalConfig& nl,
                           const std::vector<double>& xg) {
    const int n = s.n_cells;
    std::vector<double> centers(n), rho_c(n);
    for (int i = 0; i < n; ++i) {
        centers[i] = s.cell_center(i);
        rho_c[i] = s.cell_rho[i];
    }
    AlignmentField align;
    if (nl.kernel.active()) align = alignment_velocity_coupling(s, nl);
    std::vector<double> fw;
    if (nl.interaction == InteractionTag::NewtonianPlusQuadratic)
        fw = interaction_force_at_nodes(s);

    EulerianSlice out;
    const size_t ng = xg.size();
    out.rho.assign(ng, 0.0);
    out.u.assign(ng, 0.0);
    out.m.assign(ng, 0.0);
    out.source.assign(ng, 0.0);

    auto interp_nodes = [&](const std::vector<double>& v, double x) {
        const auto it = std::upper_bound(s.node_x.begin(), s.node_x.end(), x);
        if (it == s.node_x.begin() || it == s.node_x.end()) return 0.0;
        const size_t j = size_t(it - s.node_x.begin()) - 1;
        const double t = (x - s.node_x[j]) / (s.node_x[j + 1] - s.node_x[j]);
        return v[j] + t * (v[j + 1] - v[j]);
    };
    auto interp_centers = [&](const std::vector<double>& v, double x) {
        if (x <= centers.front() || x >= centers.back()) {
            // inside the first/last half-cell keep the cell value, vacuum outside
            if (x >= s.node_x.front() && x <= s.node_x.back())
                return x < centers.front() ? v.front() : v.back();
            return 0.0;
        }
        const auto it = std::upper_bound(centers.begin(), centers.end(), x);
        const size_t i = size_t(it - centers.begin()) - 1;
        const double t = (x - centers[i]) / (centers[i + 1] - centers[i]);
        return v[i] + t * (v[i + 1] - v[i]);
    };

    for (size_t g = 0; g < ng; ++g) {
        const double x = xg[g];
        const double rho = interp_centers(rho_c, x);
        const double u = interp_nodes(s.node_u, x);
        out.rho[g] = rho;
        out.u[g] = u;
        out.m[g] = rho * u;
        double src = nl.lambda * rho * u;
        if (nl.kernel.active()) src += rho * interp_nodes(align.v, x);
        if (!fw.empty()) src -= rho * interp_nodes(fw, x);
        out.source[g] = src;
    }
    return out;
}

} // namespace

DissipationReport dissipation_residual(const Trajectory& traj, const EntropyPair& pair,
                                       const PressureLaw& law,
                                       const NonlocalConfig& nonlocal, double k_lo,
                                       double k_hi, int n_x) {
    if (traj.snaps.size() < 2)
        throw std::invalid_argument("dissipation_residual: need >= 2 snapshots");
    if (!(k_hi > k_lo)) throw std::invalid_argument("dissipation_residual: bad window");

    DissipationReport rep;
    rep.x_grid.resize(n_x);
    for (int i = 0; i < n_x; ++i)
        rep.x_grid[i] = k_lo + (k_hi - k_lo) * i / double(n_x - 1);
    const double dx = (k_hi - k_lo) / (n_x - 1);

    // Eulerian entropy-dissipation field
    std::vector<std::vector<double>> eta_s, q_s, em_s, src_s;
    for (const auto& snap : traj.snaps) {
        const auto sl = sample_state(snap.state, nonlocal, rep.x_grid);
        std::vector<double> e(n_x), q(n_x), em(n_x), sr(n_x);
        for (int i = 0; i < n_x; ++i) {
            e[i] = pair.eta(sl.rho[i], sl.m[i]);
            q[i] = pair.q(sl.rho[i], sl.m[i]);
            em[i] = pair.eta_m(sl.rho[i], sl.m[i]);
            sr[i] = sl.source[i];
        }
        eta_s.push_back(std::move(e));
        q_s.push_back(std::move(q));
        em_s.push_back(std::move(em));
        src_s.push_back(std::move(sr));
    }
    for (size_t k = 0; k + 1 < traj.snaps.size(); ++k) {
        const double dt = traj.snaps[k + 1].state.time - traj.snaps[k].state.time;
        if (!(dt > 0.0)) continue;
        rep.t_mid.push_back(traj.snaps[k].state.time + 0.5 * dt);
        std::vector<double> row(n_x, 0.0);
        for (int i = 1; i + 1 < n_x; ++i) {
            const double det = (eta_s[k + 1][i] - eta_s[k][i]) / dt;
            const double dqx = 0.5 *
                               ((q_s[k][i + 1] - q_s[k][i - 1]) +
                                (q_s[k + 1][i + 1] - q_s[k + 1][i - 1])) /
                               (2.0 * dx);
            const double src = 0.5 * (em_s[k][i] * src_s[k][i] +
                                      em_s[k + 1][i] * src_s[k + 1][i]);
            row[i] = det + dqx - src;
            if (row[i] > 0.0) rep.positive_part += row[i] * dx * dt;
        }
        rep.field.push_back(std::move(row));
    }

    const auto budgets = lemma_budgets(traj, law, k_lo, k_hi);
    rep.visc_budget = budgets.visc;
    rep.bd_budget = budgets.bd;
    rep.eps43_budget = budgets.eps43;
    return rep;
}

BudgetIntegrals lemma_budgets(const Trajectory& traj, const PressureLaw& law,
                              double k_lo, double k_hi) {
    // time-trapezoid of mass-coordinate spatial sums restricted to the window
    std::vector<double> visc_t, bd_t, e43_t, times;
    for (const auto& snap : traj.snaps) {
        const auto& s = snap.state;
        double visc = 0.0, bd = 0.0, e43 = 0.0;
        for (int i = 0; i < s.n_cells; ++i) {
            const double c = s.cell_center(i);
            if (c < k_lo || c > k_hi) continue;
            const double rho = s.cell_rho[i];
            const double du = (s.node_u[i + 1] - s.node_u[i]) / s.dxi;
            visc += std::pow(rho, s.alpha + 1.0) * du * du * s.dxi;
            e43 += std::pow(std::abs(std::pow(rho, s.alpha + 1.0) * du), 4.0 / 3.0) /
                   rho * s.dxi;
            if (i > 0 && s.cell_center(i - 1) >= k_lo) {
                // rho^{alpha+gamma-3} rho_x^2 dx becomes rho^{alpha+gamma-2} rho_xi^2 dxi
                const double rbar = 0.5 * (rho + s.cell_rho[i - 1]);
                const double drho = (rho - s.cell_rho[i - 1]) / s.dxi;
                bd += std::pow(rbar, s.alpha + law.gamma_at(rbar) - 2.0) * drho * drho *
                      s.dxi;
            }
        }
        visc_t.push_back(visc);
        bd_t.push_back(bd);
        e43_t.push_back(e43);
        times.push_back(s.time);
    }
    const double eps = traj.snaps.front().state.epsilon;
    BudgetIntegrals out;
    out.visc = eps * trapezoid(times, visc_t);
    out.bd = eps * trapezoid(times, bd_t);
    out.eps43 = std::pow(eps, 4.0 / 3.0) * trapezoid(times, e43_t);
    return out;
}

} // namespace vvlab
