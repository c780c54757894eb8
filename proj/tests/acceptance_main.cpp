// Acceptance suite: one pass/fail line per criterion, nonzero exit on the
// first failure count. Heavier fixtures are shared between criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "vvlab/config.hpp"
#include "vvlab/diagnostics.hpp"
#include "vvlab/entropy.hpp"
#include "vvlab/goursat.hpp"
#include "vvlab/io.hpp"
#include "vvlab/sweep.hpp"

using namespace vvlab;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %-38s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const char* kReferenceIni = R"(
[pressure]
kind = polytropic
gamma = 2.0
[nonlocal]
lambda = -0.25
alignment = gaussian
alignment_amplitude = 0.5
alignment_width = 1.0
interaction = off
[initial]
preset = gaussian
mass = 0.75
sigma = 0.8
velocity_amplitude = 0.2
[approx]
epsilon = 0.01
alpha = 1.0
p_exponent = 2.2
[solver]
n_cells = 1024
cfl = 0.4
dt_max = 2e-3
t_end = 1.0
n_outputs = 50
[diagnostics]
window_fraction = 0.5
[output]
plots = false
)";

MassGridState plateau_state(int n, double rho, double halfwidth, double eps,
                            double alpha) {
    MassGridState s;
    s.n_cells = n;
    const double w = 2.0 * halfwidth / n;
    s.dxi = rho * w;
    s.node_x.resize(n + 1);
    s.node_u.assign(n + 1, 0.0);
    s.cell_rho.assign(n, rho);
    for (int j = 0; j <= n; ++j) s.node_x[j] = -halfwidth + j * w;
    s.epsilon = eps;
    s.alpha = alpha;
    return s;
}

double plateau_boundary_error(const PressureLaw& law, int n, double eps) {
    auto s = plateau_state(n, 1.0, 1.0, eps, 1.0);
    SolverConfig cfg;
    cfg.cfl = 0.4;
    cfg.t_end = 1.0;
    const auto traj = run(s, law, NonlocalConfig{}, cfg, 20);
    return boundary_density_check(traj, law).max_rel_error;
}

} // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    const auto t_suite0 = std::chrono::steady_clock::now();

    // ---------------------------------------------------------------- shared
    auto ref_cfg = RunConfig::from_string(kReferenceIni);
    const auto t0 = std::chrono::steady_clock::now();
    const auto ref = run_single(ref_cfg, 0.01, "", false);
    const double ref_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // 1. mass conservation at every step of the reference run, runtime budget
    {
        const double err = ref.traj.snaps.back().acc.max_mass_error;
        const bool pass = err <= 1e-12 && ref_seconds < 120.0;
        report(1, "mass conservation (reference run)", pass,
               fmt("max rel error %.3e (tol 1e-12), runtime %.1f s (budget 120 s)", err,
                   ref_seconds));
    }

    // 2. energy identity residual and first-order shrink
    {
        const double e0 = ref.report.energy.e0;
        const double res1 = ref.report.energy.max_abs_residual;
        auto cfg2 = ref_cfg;
        cfg2.set("solver.n_cells", "2048");
        cfg2.set("solver.dt_max", "1e-3");
        const auto fine = run_single(cfg2, 0.01, "", false);
        const double res2 = fine.report.energy.max_abs_residual;
        const double shrink = res1 / std::max(res2, 1e-300);
        const bool pass = res1 <= 0.01 * e0 && shrink >= 1.7;
        report(2, "energy identity ", pass,
               fmt("|residual| %.3e vs 0.01 E0 = %.3e; shrink x%.2f (need >= 1.7)", res1,
                   0.01 * e0, shrink));
    }

    // 3. boundary density: closed form on the reference run, halving on the
    //    resolved plateau, bracket for the general law
    {
        const auto law = PressureLaw::polytropic(2.0);
        const double ref_err = ref.report.boundary.max_rel_error;

        const double e1024 = plateau_boundary_error(law, 1024, 0.1);
        const double e2048 = plateau_boundary_error(law, 2048, 0.1);
        const double shrink = e1024 / std::max(e2048, 1e-300);

        const auto blend = PressureLaw::general_blend(2.0, 1.5, 0.125, 1.0, 4.0);
        auto sblend = plateau_state(1024, 0.5, 1.0, 0.1, 1.0);
        SolverConfig scfg;
        scfg.cfl = 0.4;
        scfg.t_end = 1.0;
        const auto btraj = run(sblend, blend, NonlocalConfig{}, scfg, 20);
        const auto bcheck = boundary_density_check(btraj, blend);

        const bool pass =
            ref_err <= 0.02 && e1024 <= 0.02 && shrink >= 1.7 && bcheck.bracket_ok;
        report(3, "boundary density law", pass,
               fmt("reference %.2e, plateau N=1024 %.2e -> N=2048 %.2e (x%.2f), "
                   "general-law bracket %s",
                   ref_err, e1024, e2048, shrink, bcheck.bracket_ok ? "ok" : "violated"));
    }

    // 4. alignment identities per step
    {
        const auto& acc = ref.traj.snaps.back().acc;
        const bool pass = acc.max_alignment_momentum <= 1e-10 &&
                          acc.max_alignment_identity_err <= 1e-10;
        report(4, "alignment identities", pass,
               fmt("momentum %.3e, symmetrization %.3e (tol 1e-10)",
                   acc.max_alignment_momentum, acc.max_alignment_identity_err));
    }

    // 5. interaction-force oracle
    {
        std::mt19937_64 rng(2025);
        std::uniform_int_distribution<int> n_dist(4, 1024);
        std::uniform_real_distribution<double> w_dist(0.01, 0.6), u_dist(-1.0, 1.0);
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            const int n = n_dist(rng);
            MassGridState s;
            s.n_cells = n;
            s.dxi = 1.5 / n;
            s.node_x.resize(n + 1);
            s.node_u.assign(n + 1, 0.0);
            s.cell_rho.resize(n);
            s.node_x[0] = -2.0;
            for (int j = 1; j <= n; ++j) s.node_x[j] = s.node_x[j - 1] + w_dist(rng);
            s.recompute_density();
            const auto fast = interaction_force_at_nodes(s);
            std::vector<double> centers(n), masses(n, s.dxi);
            for (int i = 0; i < n; ++i) centers[i] = s.cell_center(i);
            const auto slow =
                interaction_force_direct(s.node_x, centers, masses, s.total_mass());
            double scale = 1.0;
            for (double v : slow) scale = std::max(scale, std::abs(v));
            for (int j = 0; j <= n; ++j)
                worst = std::max(worst, std::abs(fast[j] - slow[j]) / scale);
        }
        // the confined uniform slab is the force-free steady state
        auto slab = plateau_state(1024, 1.0, 1.0, 0.0, 1.0);
        double slab_worst = 0.0;
        for (double f : interaction_force_at_nodes(slab))
            slab_worst = std::max(slab_worst, std::abs(f));
        const bool pass = worst <= 1e-12 && slab_worst <= 1e-12;
        report(5, "interaction-force oracle", pass,
               fmt("prefix vs direct %.3e, uniform-slab residual %.3e (tol 1e-12)",
                   worst, slab_worst));
    }

    // 6. second-moment growth bound
    {
        double worst = 0.0;
        for (size_t k = 0; k < ref.report.second_moment_series.size(); ++k)
            worst = std::max(worst, ref.report.second_moment_series[k] /
                                        ref.report.gronwall_bound_series[k]);
        const bool pass = worst <= 1.0 + 1e-3;
        report(6, "second-moment bound", pass,
               fmt("max M2 / bound = %.6f (tol 1.001)", worst));
    }

    // 7. entropy pairs: quadrature vs closed form, oddness, growth bounds
    {
        const auto law = PressureLaw::polytropic(2.0);
        Generator sq{[](double s) { return 0.5 * s * s; }, [](double s) { return s; }};
        const auto gen = generate_pair(sq, law, 48);
        const auto mech = mechanical_pair(law);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> rho_d(1e-3, 5.0), u_d(-4.0, 4.0);
        double worst_pair = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double rho = rho_d(rng), m = rho * u_d(rng);
            const double scale = std::max(1.0, std::abs(mech.eta(rho, m)));
            worst_pair = std::max(
                worst_pair, std::abs(gen.eta(rho, m) - mech.eta(rho, m)) / scale);
            worst_pair =
                std::max(worst_pair, std::abs(gen.q(rho, m) - mech.q(rho, m)) / scale);
        }

        const auto hash = special_pair_hash(law);
        double worst_zero = 0.0;
        for (double rho : log_space(1e-6, 50.0, 40))
            worst_zero = std::max(worst_zero, std::abs(hash.eta(rho, 0.0)));

        // growth/derivative bounds with refinement-stable fitted constants
        const double g = law.gamma(), th = law.theta();
        auto fits = [&](int nr) {
            auto rho_g = log_space(1e-4, 30.0, nr);
            std::vector<double> u_g;
            for (double v : log_space(1e-2, 20.0, nr)) {
                u_g.push_back(v);
                u_g.push_back(-v);
            }
            double flux_min = 1e300, em_max = 0.0, er_max = 0.0, canc = 0.0;
            for (double rho : rho_g)
                for (double u : u_g) {
                    const double m = rho * u;
                    const double au = std::abs(u);
                    flux_min = std::min(
                        flux_min, hash.q(rho, m) / (rho * au * au * au +
                                                    std::pow(rho, g + th)));
                    em_max = std::max(em_max, std::abs(hash.eta_m(rho, m)) /
                                                  (au + std::pow(rho, th)));
                    er_max = std::max(er_max, std::abs(hash.eta_rho(rho, m)) /
                                                  (u * u + std::pow(rho, 2.0 * th)));
                    canc = std::max(canc,
                                    std::abs(hash.q(rho, m) - u * hash.eta(rho, m)) /
                                        (std::pow(rho, g) * au + std::pow(rho, g + th)));
                }
            return std::array<double, 4>{flux_min, em_max, er_max, canc};
        };
        const auto f1 = fits(11), f2 = fits(21);
        double drift = 0.0;
        for (int i = 0; i < 4; ++i)
            drift = std::max(drift, std::abs(f2[i] - f1[i]) / std::abs(f1[i]));

        const bool pass =
            worst_pair <= 1e-8 && worst_zero <= 1e-12 && f1[0] > 0.0 && drift <= 0.05;
        report(7, "entropy pairs", pass,
               fmt("mechanical match %.2e (tol 1e-8), eta#(rho,0) %.2e, flux lower "
                   "const %.3f, fit drift %.3f%%",
                   worst_pair, worst_zero, f1[0], 100.0 * drift));
    }

    // 8. Goursat pair at 512^2
    {
        const auto blend = PressureLaw::general_blend(2.0, 1.5, 0.125, 1.0, 4.0);
        GoursatOptions opt;
        opt.rho_max = 4.0;
        opt.n_u = 512;
        opt.n_rho = 512;
        const auto tab = solve_goursat(blend, opt);

        // characteristic data is imposed exactly wherever |u| >= k(rho)
        double bdata = 0.0;
        for (size_t i = 0; i < tab->rho_grid.size(); ++i) {
            const double rho = tab->rho_grid[i];
            const double k = blend.sound_integral(rho);
            for (size_t j = 0; j < tab->u_grid.size(); ++j) {
                const double u = tab->u_grid[j];
                if (std::abs(u) < k || rho <= 0.0) continue;
                const double mech =
                    (u > 0 ? 1.0 : -1.0) *
                    (0.5 * rho * u * u + rho * blend.internal_energy(rho));
                bdata = std::max(bdata, std::abs(tab->eta[i][j] - mech));
            }
        }

        double odd = 0.0;
        const size_t nu = tab->u_grid.size();
        for (size_t i = 0; i < tab->rho_grid.size(); ++i)
            for (size_t j = 0; j < nu / 2; ++j)
                odd = std::max(odd, std::abs(tab->eta[i][j] + tab->eta[i][nu - 1 - j]));

        GoursatOptions copt = opt;
        copt.n_u = 256;
        copt.n_rho = 256;
        const auto coarse = solve_goursat(blend, copt);
        const double cdrift = std::abs(tab->bound_constant - coarse->bound_constant) /
                              tab->bound_constant;

        const bool pass = tab->pde_residual_scaled < 1e-3 && bdata == 0.0 &&
                          odd <= 1e-12 && std::isfinite(tab->bound_constant) &&
                          cdrift <= 0.05;
        report(8, "Goursat pair (512^2)", pass,
               fmt("scaled residual %.2e (tol 1e-3), boundary data diff %.1e, odd "
                   "%.1e, bound C %.3f (drift %.2f%%)",
                   tab->pde_residual_scaled, bdata, odd, tab->bound_constant,
                   100.0 * cdrift));
    }

    // 9 + 10 + 11. the viscosity ladder
    {
        auto cfg = RunConfig::from_string(kReferenceIni);
        cfg.set("approx.epsilon0", "0.04");
        cfg.set("approx.halvings", "3");
        const auto t1 = std::chrono::steady_clock::now();
        const auto sw = run_sweep(cfg, "", 4, false);
        const double sweep_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();

        auto flag_of = [&](const std::string& name) -> const CheckFlag* {
            for (const auto& f : sw.flags)
                if (f.name == name) return &f;
            return nullptr;
        };
        auto passed = [&](const std::string& name) {
            const auto* f = flag_of(name);
            return f && f->pass;
        };

        const bool c9 = passed("cauchy_l1_rho_decreasing") &&
                        passed("cauchy_l1_m_decreasing") &&
                        passed("eps43_budget_exponent") && sweep_seconds < 900.0;
        std::string ladder_str;
        for (const auto& cm : sw.ladder) ladder_str += fmt("%.3e ", cm.sup_l1_rho);
        report(9, "vanishing-viscosity Cauchy ladder", c9,
               fmt("L1(rho) ladder [ %s], eps^{4/3}-budget exponent %.2f (need >= "
                   "0.2), runtime %.0f s (budget 900)",
                   ladder_str.c_str(), sw.fitted_eps43_exponent, sweep_seconds));

        const bool c10 = passed("window_density_no_growth") &&
                         passed("window_velocity_no_growth") &&
                         passed("bd_entropy_no_growth") &&
                         passed("margin_at_smallest_eps");
        const auto* margin = flag_of("margin_at_smallest_eps");
        report(10, "uniform boundedness across the ladder", c10,
               fmt("window + BD growth checks %s, margin %.3f (need >= 0.5)",
                   c10 ? "ok" : "violated", margin ? margin->value : -1.0));

        double worst_stress = 0.0, worst_dx = 0.0;
        for (const auto& r : sw.runs) {
            worst_stress = std::max({worst_stress, std::abs(r.init.stress_residual_left),
                                     std::abs(r.init.stress_residual_right)});
            const auto& x = r.init.x;
            worst_dx = std::max(worst_dx, x[x.size() - 1] - x[x.size() - 2]);
        }
        const bool c11 = passed("initial_mass_exact") && passed("e1_over_eps_no_growth") &&
                         passed("initial_m2_converges") &&
                         passed("initial_interaction_converges") &&
                         worst_stress <= 10.0 * worst_dx;
        report(11, "initial-data pipeline", c11,
               fmt("mass exact %s, E1/eps bounded %s, M2/interaction converge %s/%s, "
                   "stress residual %.2e <= %.2e",
                   passed("initial_mass_exact") ? "yes" : "no",
                   passed("e1_over_eps_no_growth") ? "yes" : "no",
                   passed("initial_m2_converges") ? "yes" : "no",
                   passed("initial_interaction_converges") ? "yes" : "no", worst_stress,
                   10.0 * worst_dx));
    }

    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_suite0)
            .count();
    std::printf("================\n%s (%d failed), total %.0f s\n",
                g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES", g_failures, total);
    return g_failures == 0 ? 0 : 1;
}
