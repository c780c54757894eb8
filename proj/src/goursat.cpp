#include "vvlab/goursat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

namespace {

// signed mechanical data +-(1/2 rho u^2 + rho e) with bit-exact oddness
double exterior_eta(const PressureLaw& law, double rho, double u) {
    if (!(rho > 0.0) || u == 0.0) return 0.0;
    const double a = std::abs(u);
    const double v = 0.5 * rho * a * a + rho * law.internal_energy(rho);
    return u > 0.0 ? v : -v;
}

double exterior_q(const PressureLaw& law, double rho, double u) {
    if (!(rho > 0.0)) return 0.0;
    const double a = std::abs(u);
    const double ep = law.internal_energy(rho) + law.pressure(rho) / rho;  // e + rho e'
    return 0.5 * rho * a * a * a + rho * a * ep;
}

double exterior_eta_u(const PressureLaw& law, double rho, double u) {
    if (!(rho > 0.0)) return 0.0;
    return rho * std::abs(u);
}

double exterior_eta_rho(const PressureLaw& law, double rho, double u) {
    if (!(rho > 0.0) || u == 0.0) return 0.0;
    const double a = std::abs(u);
    const double v = 0.5 * a * a + law.internal_energy(rho) + law.pressure(rho) / rho;
    return u > 0.0 ? v : -v;
}

// initial levels for the march: the low-regime pure power law is exact there
double low_regime_eta(const EntropyPair& hash_low, const PressureLaw& law, double rho,
                      double u) {
    if (!(rho > 0.0)) return 0.0;
    if (std::abs(u) >= law.sound_integral(rho)) return exterior_eta(law, rho, u);
    if (u == 0.0) return 0.0;
    const double v = hash_low.eta(rho, rho * std::abs(u));
    return u > 0.0 ? v : -v;
}

} // namespace

double GoursatTable::eval_eta(double rho, double u) const {
    if (!(rho > 0.0)) return 0.0;
    if (std::abs(u) >= k_of(rho) || rho >= rho_grid.back())
        return exterior_eta(law, rho, u);
    const double drho = rho_grid[1] - rho_grid[0];
    const double du = u_grid[1] - u_grid[0];
    const size_t i = std::min(size_t((rho - rho_grid[0]) / drho), rho_grid.size() - 2);
    const size_t j =
        std::min(size_t(std::max((u - u_grid[0]) / du, 0.0)), u_grid.size() - 2);
    const double tr = (rho - rho_grid[i]) / drho;
    const double tu = (u - u_grid[j]) / du;
    return (1 - tr) * ((1 - tu) * eta[i][j] + tu * eta[i][j + 1]) +
           tr * ((1 - tu) * eta[i + 1][j] + tu * eta[i + 1][j + 1]);
}

namespace {
double bilinear(const std::vector<double>& rho_grid, const std::vector<double>& u_grid,
                const std::vector<std::vector<double>>& tab, double rho, double u) {
    const double drho = rho_grid[1] - rho_grid[0];
    const double du = u_grid[1] - u_grid[0];
    const size_t i = std::min(size_t((rho - rho_grid[0]) / drho), rho_grid.size() - 2);
    const size_t j =
        std::min(size_t(std::max((u - u_grid[0]) / du, 0.0)), u_grid.size() - 2);
    const double tr = (rho - rho_grid[i]) / drho;
    const double tu = (u - u_grid[j]) / du;
    return (1 - tr) * ((1 - tu) * tab[i][j] + tu * tab[i][j + 1]) +
           tr * ((1 - tu) * tab[i + 1][j] + tu * tab[i + 1][j + 1]);
}
} // namespace

double GoursatTable::eval_q(double rho, double u) const {
    if (!(rho > 0.0)) return 0.0;
    if (std::abs(u) >= k_of(rho) || rho >= rho_grid.back())
        return exterior_q(law, rho, u);
    return bilinear(rho_grid, u_grid, q, rho, u);
}

double GoursatTable::eval_eta_u(double rho, double u) const {
    if (!(rho > 0.0)) return 0.0;
    if (std::abs(u) >= k_of(rho) || rho >= rho_grid.back())
        return exterior_eta_u(law, rho, u);
    return bilinear(rho_grid, u_grid, eta_u, rho, u);
}

double GoursatTable::eval_eta_rho(double rho, double u) const {
    if (!(rho > 0.0)) return 0.0;
    if (std::abs(u) >= k_of(rho) || rho >= rho_grid.back())
        return exterior_eta_rho(law, rho, u);
    return bilinear(rho_grid, u_grid, eta_rho, rho, u);
}

std::shared_ptr<GoursatTable> solve_goursat(const PressureLaw& law,
                                            const GoursatOptions& opt) {
    if (opt.n_u < 16 || opt.n_rho < 16 || !(opt.rho_max > 0.0))
        throw std::invalid_argument("solve_goursat: inadequate grid options");

    auto tab = std::make_shared<GoursatTable>();
    tab->law = law;

    // exactly symmetric u grid so odd data stays odd to the last bit
    const int nu = opt.n_u + (opt.n_u % 2);
    const double du = law.sound_integral(opt.rho_max) / (nu / 2);
    tab->u_grid.resize(nu + 1);
    for (int j = 0; j <= nu; ++j) tab->u_grid[j] = (j - nu / 2) * du;
    const double u_max = tab->u_grid.back();

    const int nr = opt.n_rho;
    const double drho_out = opt.rho_max / nr;
    tab->rho_grid.resize(nr + 1);
    for (int i = 0; i <= nr; ++i) tab->rho_grid[i] = i * drho_out;

    // The exact kernel pair of the low-density power regime initialises the
    // march (identical to the solution wherever P is the pure power law).
    const auto law_low = PressureLaw::polytropic(law.gamma(), law.kappa());
    const auto hash_low = special_pair_hash(law_low);

    // start on an output row: the wave cone should span a few u cells, and
    // for blended laws the row above the start must stay in the power regime
    double rho_min_start = opt.rho_max;
    {
        double lo = 0.0, hi = opt.rho_max;
        const double target = 4.0 * du;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (law.sound_integral(mid) < target ? lo : hi) = mid;
        }
        rho_min_start = hi;
    }
    int i_start = std::min(int(std::ceil(rho_min_start / drho_out)), nr / 2);
    if (law.kind() == PressureLaw::Kind::GeneralBlend) {
        const int i_blend = int(std::floor(law.rho_star_low() / drho_out)) - 1;
        i_start = std::max(i_start, std::min(i_blend, nr / 2));
    }
    i_start = std::max(i_start, 1);
    const double rho_start = tab->rho_grid[i_start];

    // one uniform marching step, an integer divisor of the output spacing
    double kp_max = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double rho = rho_start + (opt.rho_max - rho_start) * i / 400.0;
        kp_max = std::max(kp_max, law.sound_integral_derivative(rho));
    }
    const int substeps =
        std::max(1, int(std::ceil(drho_out * kp_max / (opt.march_cfl * du))));
    const double drho = drho_out / substeps;
    if (law.kind() == PressureLaw::Kind::GeneralBlend &&
        rho_start + drho > law.rho_star_low())
        throw std::runtime_error("solve_goursat: march cannot start inside the blend "
                                 "window; refine the rho grid");

    auto fill_exact_level = [&](double rho, std::vector<double>& level) {
        for (int j = nu / 2; j <= nu; ++j)
            level[j] = low_regime_eta(hash_low, law, rho, tab->u_grid[j]);
        for (int j = 0; j < nu / 2; ++j) level[j] = -level[nu - j];
    };
    auto overwrite_exterior = [&](double rho, std::vector<double>& level) {
        const double k = law.sound_integral(rho);
        for (int j = nu / 2; j <= nu; ++j)
            if (tab->u_grid[j] >= k) {
                level[j] = exterior_eta(law, rho, tab->u_grid[j]);
                level[nu - j] = -level[j];
            }
    };

    std::vector<double> prev(nu + 1), cur(nu + 1), next(nu + 1);
    fill_exact_level(rho_start, prev);
    fill_exact_level(rho_start + drho, cur);

    // output rows at or below the start come straight from the exact pair
    tab->eta.assign(nr + 1, std::vector<double>(nu + 1, 0.0));
    for (int i = 0; i <= i_start; ++i)
        fill_exact_level(tab->rho_grid[i], tab->eta[i]);

    const double eta_cap = 100.0 * (0.5 * opt.rho_max * u_max * u_max +
                                    opt.rho_max * law.internal_energy(opt.rho_max) + 1.0);
    double rho_cur = rho_start + drho;
    int next_out = i_start + 1;
    if (substeps == 1) {  // the second init level already sits on a row
        tab->eta[next_out] = cur;
        ++next_out;
    }
    const long total_steps = long(nr - i_start) * substeps - 1;
    for (long step_i = 0; step_i < total_steps; ++step_i) {
        const double kp = law.sound_integral_derivative(rho_cur);
        const double c = (drho * kp / du) * (drho * kp / du);
        for (int j = 1; j < nu; ++j)
            next[j] = 2.0 * cur[j] - prev[j] + c * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]);
        const double rho_next = rho_cur + drho;
        next[0] = exterior_eta(law, rho_next, tab->u_grid[0]);
        next[nu] = exterior_eta(law, rho_next, tab->u_grid[nu]);
        overwrite_exterior(rho_next, next);

        for (int j = 0; j <= nu; ++j)
            if (!std::isfinite(next[j]) || std::abs(next[j]) > eta_cap)
                throw std::runtime_error(
                    "solve_goursat: marching instability detected; use a finer u grid");

        prev.swap(cur);
        cur.swap(next);
        rho_cur = rho_next;
        if ((step_i + 2) % substeps == 0 && next_out <= nr) {
            tab->eta[next_out] = cur;  // landed on an output row
            ++next_out;
        }
    }
    while (next_out <= nr) {  // guard against fp drift in the loop count
        fill_exact_level(tab->rho_grid[next_out], tab->eta[next_out]);
        ++next_out;
    }

    // derivative tables by central differences on the output grid
    tab->eta_u.assign(nr + 1, std::vector<double>(nu + 1, 0.0));
    tab->eta_rho.assign(nr + 1, std::vector<double>(nu + 1, 0.0));
    for (int i = 0; i <= nr; ++i) {
        for (int j = 0; j <= nu; ++j) {
            if (j > 0 && j < nu)
                tab->eta_u[i][j] = (tab->eta[i][j + 1] - tab->eta[i][j - 1]) / (2.0 * du);
            else
                tab->eta_u[i][j] =
                    exterior_eta_u(law, tab->rho_grid[i], tab->u_grid[j]);
            if (i > 0 && i < nr)
                tab->eta_rho[i][j] =
                    (tab->eta[i + 1][j] - tab->eta[i - 1][j]) / (2.0 * drho_out);
            else if (i == nr)
                tab->eta_rho[i][j] =
                    (tab->eta[i][j] - tab->eta[i - 1][j]) / drho_out;
        }
    }
    // rho = 0 row: eta vanishes at vacuum; use one-sided difference
    for (int j = 0; j <= nu; ++j)
        tab->eta_rho[0][j] = (tab->eta[1][j] - tab->eta[0][j]) / drho_out;

    // q by integrating q_u = rho eta_rho + u eta_u from the left edge, where
    // the exterior formula is exact
    tab->q.assign(nr + 1, std::vector<double>(nu + 1, 0.0));
    for (int i = 0; i <= nr; ++i) {
        const double rho = tab->rho_grid[i];
        tab->q[i][0] = exterior_q(law, rho, tab->u_grid[0]);
        for (int j = 1; j <= nu; ++j) {
            const double f0 = rho * tab->eta_rho[i][j - 1] +
                              tab->u_grid[j - 1] * tab->eta_u[i][j - 1];
            const double f1 =
                rho * tab->eta_rho[i][j] + tab->u_grid[j] * tab->eta_u[i][j];
            tab->q[i][j] = tab->q[i][j - 1] + 0.5 * du * (f0 + f1);
        }
        const double k = law.sound_integral(rho);
        for (int j = 0; j <= nu; ++j)
            if (std::abs(tab->u_grid[j]) >= k)
                tab->q[i][j] = exterior_q(law, rho, tab->u_grid[j]);
    }

    // interior residual of the marched table, L1-scaled
    double res_num = 0.0, res_den = 0.0;
    for (int i = 1; i < nr; ++i) {
        const double rho = tab->rho_grid[i];
        if (rho <= rho_start) continue;
        const double k = law.sound_integral(rho);
        const double kp = law.sound_integral_derivative(rho);
        for (int j = 2; j < nu - 1; ++j) {
            if (std::abs(tab->u_grid[j]) >= k - 2.0 * du) continue;
            const double d2r = (tab->eta[i + 1][j] - 2.0 * tab->eta[i][j] +
                                tab->eta[i - 1][j]) /
                               (drho_out * drho_out);
            const double d2u =
                (tab->eta[i][j + 1] - 2.0 * tab->eta[i][j] + tab->eta[i][j - 1]) /
                (du * du);
            res_num += std::abs(d2r - kp * kp * d2u);
            res_den += std::abs(d2r) + kp * kp * std::abs(d2u);
        }
    }
    tab->pde_residual_scaled = res_den > 0.0 ? res_num / res_den : 0.0;

    // Fitted constant for |eta| <= C (rho u^2 + rho^{gamma(rho)})
    double cbound = 0.0;
    for (int i = 1; i <= nr; ++i)
        for (int j = 0; j <= nu; ++j) {
            const double rho = tab->rho_grid[i];
            const double u = tab->u_grid[j];
            const double den = rho * u * u + std::pow(rho, law.gamma_at(rho));
            if (den > 1e-12)
                cbound = std::max(cbound, std::abs(tab->eta[i][j]) / den);
        }
    tab->bound_constant = cbound;
    return tab;
}

EntropyPair goursat_hat(std::shared_ptr<GoursatTable> table) {
    EntropyPair p;
    p.kind = EntropyPair::Kind::GoursatHat;
    p.eta = [table](double rho, double m) {
        return rho > 0.0 ? table->eval_eta(rho, m / rho) : 0.0;
    };
    p.q = [table](double rho, double m) {
        return rho > 0.0 ? table->eval_q(rho, m / rho) : 0.0;
    };
    p.eta_m = [table](double rho, double m) {
        return rho > 0.0 ? table->eval_eta_u(rho, m / rho) / rho : 0.0;
    };
    p.eta_rho = [table](double rho, double m) {
        if (!(rho > 0.0)) return 0.0;
        const double u = m / rho;
        // (rho, m) partial: subtract the advective part of the (rho, u) one
        return table->eval_eta_rho(rho, u) - u / rho * table->eval_eta_u(rho, u);
    };
    return p;
}

EntropyPair goursat_hat(const PressureLaw& law, double rho_max, int grid_resolution) {
    GoursatOptions opt;
    opt.rho_max = rho_max;
    opt.n_u = grid_resolution;
    opt.n_rho = grid_resolution;
    return goursat_hat(solve_goursat(law, opt));
}

} // namespace vvlab
