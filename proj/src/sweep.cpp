#include "vvlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vvlab/goursat.hpp"
#include "vvlab/io.hpp"
#include "vvlab/quadrature.hpp"

namespace vvlab {

namespace {

using nlohmann::json;

json flags_to_json(const std::vector<CheckFlag>& flags) {
    json arr = json::array();
    for (const auto& f : flags)
        arr.push_back({{"name", f.name},
                       {"value", f.value},
                       {"threshold", f.threshold},
                       {"pass", f.pass}});
    return arr;
}

void write_series(const std::string& dir, const DiagnosticsReport& rep) {
    ensure_directory(dir);
    const auto& e = rep.energy;
    write_csv(dir + "/energy.csv",
              {"time", "kinetic", "internal", "interaction", "visc_cum", "align_cum",
               "damp_cum", "residual"},
              {e.time, e.kinetic, e.internal, e.interaction, e.visc_cum, e.align_cum,
               e.damp_cum, e.residual});
    const auto& b = rep.boundary;
    write_csv(dir + "/boundary.csv",
              {"time", "rho_plus", "rho_minus", "reference", "b_plus", "b_minus"},
              {b.time, b.rho_plus, b.rho_minus, b.reference, b.b_plus, b.b_minus});
    write_csv(dir + "/scalars.csv",
              {"time", "mass", "second_moment", "gronwall_bound", "bd_instant",
               "bd_cumulative"},
              {e.time, rep.mass_series, rep.second_moment_series,
               rep.gronwall_bound_series, rep.bd_instant_series,
               rep.bd_cumulative_series});
}

void write_run_report(const std::string& path, const RunResult& r) {
    json j;
    j["epsilon"] = r.epsilon;
    j["halfwidth_b"] = r.init.halfwidth;
    j["E0"] = r.init.E0;
    j["E1"] = r.init.E1;
    j["initial_mass"] = r.init.total_mass;
    j["initial_second_moment"] = r.init.second_moment;
    j["initial_interaction_energy"] = r.init.interaction_energy;
    j["boundary_rho0"] = r.init.boundary_rho;
    j["stress_residual_left"] = r.init.stress_residual_left;
    j["stress_residual_right"] = r.init.stress_residual_right;
    j["free_boundary_margin"] = r.report.free_boundary_margin;
    j["window_density_integral"] = r.report.window.density;
    j["window_velocity_integral"] = r.report.window.velocity;
    j["budget_visc"] = r.budgets.visc;
    j["budget_bd"] = r.budgets.bd;
    j["budget_eps43"] = r.budgets.eps43;
    j["steps"] = r.traj.snaps.back().acc.steps;
    j["rejected_steps"] = r.traj.snaps.back().acc.rejected_steps;
    j["flags"] = flags_to_json(r.report.flags);
    j["pass"] = r.report.all_pass();
    std::ofstream f(path);
    f << j.dump(2) << "\n";
}

void write_run_plots(const std::string& dir, const RunResult& r) {
    ensure_directory(dir);
    const auto& e = r.report.energy;
    write_svg_plot(dir + "/energy_budget.svg", "Energy budget",
                   {{"kinetic", e.time, e.kinetic},
                    {"internal", e.time, e.internal},
                    {"interaction", e.time, e.interaction},
                    {"visc_cum", e.time, e.visc_cum},
                    {"align_cum", e.time, e.align_cum},
                    {"residual", e.time, e.residual}});
    const auto& b = r.report.boundary;
    write_svg_plot(dir + "/boundary_density.svg", "Boundary density vs reference",
                   {{"rho(b+)", b.time, b.rho_plus},
                    {"rho(b-)", b.time, b.rho_minus},
                    {"reference", b.time, b.reference}});
}

} // namespace

RunResult run_single(const RunConfig& cfg, double epsilon, const std::string& out_dir,
                     bool plots) {
    RunResult r;
    r.epsilon = epsilon;

    const auto law = cfg.make_law();
    const auto nl = cfg.make_nonlocal();
    const auto raw = cfg.make_raw();
    const auto mopt = cfg.make_mollify_options();
    auto solver_cfg = cfg.make_solver_config();

    const double b_override = cfg.get_double("approx.halfwidth_b", 0.0);
    r.init = build_approx_initial_data(raw, epsilon, cfg.alpha(), cfg.p_exponent(), law,
                                       mopt, b_override);
    const auto state0 = make_initial_state(r.init, cfg.n_cells());
    r.traj = run(state0, law, nl, solver_cfg, cfg.n_outputs());

    const auto dopt = cfg.make_diagnostics_options(raw);
    r.report = build_report(r.traj, law, nl, dopt);
    r.budgets = lemma_budgets(r.traj, law, dopt.window_lo, dopt.window_hi);

    if (!out_dir.empty()) {
        r.dir = out_dir;
        ensure_directory(out_dir);
        write_initial_data_csv(out_dir + "/initial_data.csv", r.init);
        write_series(out_dir + "/series", r.report);
        ensure_directory(out_dir + "/snapshots");
        json manifest;
        manifest["epsilon"] = epsilon;
        manifest["n_cells"] = cfg.n_cells();
        manifest["times"] = json::array();
        for (size_t k = 0; k < r.traj.snaps.size(); ++k) {
            std::ostringstream name;
            name << "snapshots/snap_" << k << ".csv";
            write_snapshot_csv(out_dir + "/" + name.str(), r.traj.snaps[k].state);
            manifest["times"].push_back(r.traj.snaps[k].state.time);
            manifest["files"].push_back(name.str());
        }
        std::ofstream mf(out_dir + "/trajectory.json");
        mf << manifest.dump(2) << "\n";
        write_run_report(out_dir + "/report.json", r);
        if (plots) write_run_plots(out_dir + "/plots", r);
    }
    return r;
}

namespace {

// no-growth checks across the ladder: each value may exceed the running max
// of the coarser-epsilon values by at most the slack
bool no_growth(const std::vector<double>& v, double slack) {
    double running = v.front();
    for (size_t i = 1; i < v.size(); ++i) {
        if (v[i] > (1.0 + slack) * running) return false;
        running = std::max(running, v[i]);
    }
    return true;
}

bool decreasing_within(const std::vector<double>& v, double slack) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > (1.0 + slack) * v[i - 1]) return false;
    return true;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

SweepResult run_sweep(const RunConfig& cfg, const std::string& out_dir, int workers,
                      bool plots) {
    const auto ladder = cfg.epsilon_ladder();
    SweepResult sw;
    sw.runs.resize(ladder.size());

    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(ladder.size());
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= ladder.size()) return;
            try {
                std::string dir;
                if (!out_dir.empty()) {
                    char tag[40];
                    std::snprintf(tag, sizeof tag, "%s/eps_%.6g", out_dir.c_str(),
                                  ladder[i]);
                    dir = tag;
                }
                sw.runs[i] = run_single(cfg, ladder[i], dir, plots);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nw = std::max(1, std::min<int>(workers, int(ladder.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    const auto raw = cfg.make_raw();
    const auto dopt = cfg.make_diagnostics_options(raw);

    auto flag = [&](const std::string& name, double value, double threshold, bool pass) {
        sw.flags.push_back({name, value, threshold, pass});
    };

    // Cauchy ladder between consecutive runs
    std::vector<double> d_rho, d_m;
    for (size_t i = 0; i + 1 < sw.runs.size(); ++i) {
        auto cm = convergence_metric(sw.runs[i].traj, sw.runs[i + 1].traj, dopt.window_lo,
                                     dopt.window_hi,
                                     cfg.get_int("diagnostics.resample_points", 4096));
        d_rho.push_back(cm.sup_l1_rho);
        d_m.push_back(cm.sup_l1_m);
        sw.ladder.push_back(std::move(cm));
    }
    if (d_rho.size() >= 2) {
        flag("cauchy_l1_rho_decreasing", decreasing_within(d_rho, 0.10) ? 0.0 : 1.0, 0.5,
             decreasing_within(d_rho, 0.10));
        flag("cauchy_l1_m_decreasing", decreasing_within(d_m, 0.10) ? 0.0 : 1.0, 0.5,
             decreasing_within(d_m, 0.10));
    }

    // uniform-boundedness family: window integrals and BD quantities
    std::vector<double> wd, wv, bd_cum, bd_inst, e1_over_eps, eps_list, e43;
    for (const auto& r : sw.runs) {
        wd.push_back(r.report.window.density);
        wv.push_back(r.report.window.velocity);
        bd_cum.push_back(r.report.bd_cumulative_series.back());
        bd_inst.push_back(*std::max_element(r.report.bd_instant_series.begin(),
                                            r.report.bd_instant_series.end()));
        e1_over_eps.push_back(r.init.E1 / r.epsilon);
        eps_list.push_back(r.epsilon);
        e43.push_back(r.budgets.eps43);
    }
    flag("window_density_no_growth", no_growth(wd, 0.10) ? 0.0 : 1.0, 0.5,
         no_growth(wd, 0.10));
    flag("window_velocity_no_growth", no_growth(wv, 0.10) ? 0.0 : 1.0, 0.5,
         no_growth(wv, 0.10));
    flag("bd_entropy_no_growth", no_growth(bd_inst, 0.10) && no_growth(bd_cum, 0.10)
             ? 0.0 : 1.0, 0.5, no_growth(bd_inst, 0.10) && no_growth(bd_cum, 0.10));
    flag("e1_over_eps_no_growth", no_growth(e1_over_eps, 0.5) ? 0.0 : 1.0, 0.5,
         no_growth(e1_over_eps, 0.5));

    sw.fitted_eps43_exponent = fit_log_slope(eps_list, e43);
    flag("eps43_budget_exponent", sw.fitted_eps43_exponent, 0.2,
         sw.fitted_eps43_exponent >= 0.2);

    const double margin = sw.runs.back().report.free_boundary_margin;
    flag("margin_at_smallest_eps", margin, 0.5, margin >= 0.5);

    // initial-data convergence along the ladder
    std::vector<double> m2_err, ie_err, mass_err;
    {
        // raw references on a fine grid
        const double r_sup = raw.support_radius + 2.0;
        const int n = 40001;
        std::vector<double> x(n), rho(n);
        for (int i = 0; i < n; ++i) {
            x[i] = -r_sup + 2.0 * r_sup * i / (n - 1);
            rho[i] = raw.rho0(x[i]);
        }
        const auto wpot = potential_of_profile(x, rho);
        std::vector<double> integ(n);
        for (int i = 0; i < n; ++i) integ[i] = rho[i] * wpot[i];
        const double ie_raw = trapezoid(x, integ);
        for (const auto& r : sw.runs) {
            m2_err.push_back(std::abs(r.init.second_moment - raw.second_moment));
            ie_err.push_back(std::abs(r.init.interaction_energy - ie_raw));
            mass_err.push_back(std::abs(r.init.total_mass - raw.total_mass) /
                               raw.total_mass);
        }
    }
    flag("initial_mass_exact",
         *std::max_element(mass_err.begin(), mass_err.end()), 1e-12,
         *std::max_element(mass_err.begin(), mass_err.end()) <= 1e-12);
    flag("initial_m2_converges", decreasing_within(m2_err, 0.10) ? 0.0 : 1.0, 0.5,
         decreasing_within(m2_err, 0.10));
    flag("initial_interaction_converges", decreasing_within(ie_err, 0.10) ? 0.0 : 1.0,
         0.5, decreasing_within(ie_err, 0.10));

    // every member run must have passed its own checks
    bool members_ok = true;
    for (const auto& r : sw.runs) members_ok = members_ok && r.report.all_pass();
    flag("member_runs_pass", members_ok ? 0.0 : 1.0, 0.5, members_ok);

    sw.pass = true;
    for (const auto& f : sw.flags) sw.pass = sw.pass && f.pass;

    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        json j;
        j["epsilons"] = eps_list;
        j["sup_l1_rho"] = d_rho;
        j["sup_l1_m"] = d_m;
        j["window_density"] = wd;
        j["window_velocity"] = wv;
        j["bd_cumulative"] = bd_cum;
        j["bd_instant_max"] = bd_inst;
        j["e1_over_eps"] = e1_over_eps;
        j["eps43_budgets"] = e43;
        j["fitted_eps43_exponent"] = sw.fitted_eps43_exponent;
        j["flags"] = flags_to_json(sw.flags);
        j["pass"] = sw.pass;
        std::ofstream f(out_dir + "/sweep_report.json");
        f << j.dump(2) << "\n";
        if (plots && d_rho.size() >= 2) {
            std::vector<double> eps_mid(d_rho.size());
            for (size_t i = 0; i < d_rho.size(); ++i) eps_mid[i] = eps_list[i];
            write_svg_plot(out_dir + "/plots_ladder.svg", "Cauchy ladder (sup L1 on K)",
                           {{"rho", eps_mid, d_rho}, {"m", eps_mid, d_m}}, true, true);
            write_svg_plot(out_dir + "/plots_budgets.svg", "eps^{4/3} budget vs eps",
                           {{"budget", eps_list, e43}}, true, true);
        }
    }
    return sw;
}

EntropyCheckResult run_entropy_checks(const RunConfig& cfg, const std::string& out_dir) {
    EntropyCheckResult res;
    const auto law = cfg.make_law();
    auto flag = [&](const std::string& name, double value, double threshold, bool pass) {
        res.flags.push_back({name, value, threshold, pass});
    };

    std::mt19937_64 rng(cfg.seed());
    std::uniform_real_distribution<double> rho_dist(1e-3, 3.0), u_dist(-3.0, 3.0);

    if (law.kind() == PressureLaw::Kind::Polytropic) {
        const int order = cfg.get_int("entropy.quadrature_order", 48);
        Generator sq{[](double s) { return 0.5 * s * s; }, [](double s) { return s; }};
        const auto gen = generate_pair(sq, law, order);
        const auto mech = mechanical_pair(law);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double rho = rho_dist(rng), m = rho * u_dist(rng);
            const double scale = std::max(1.0, std::abs(mech.eta(rho, m)));
            worst = std::max(worst,
                             std::abs(gen.eta(rho, m) - mech.eta(rho, m)) / scale);
            worst = std::max(worst, std::abs(gen.q(rho, m) - mech.q(rho, m)) / scale);
        }
        flag("mechanical_pair_match", worst, 1e-8, worst <= 1e-8);

        const auto hash = special_pair_hash(law);
        double worst0 = 0.0;
        for (double rho : log_space(1e-4, 10.0, 25))
            worst0 = std::max(worst0, std::abs(hash.eta(rho, 0.0)));
        flag("hash_odd_at_zero", worst0, 1e-12, worst0 <= 1e-12);

        const auto canc = cancellation_check(hash, law);
        flag("cancellation_drift", canc.drift, 0.05, canc.drift <= 0.05);
    }

    // Goursat table: build, export, self-checks
    GoursatOptions gopt;
    gopt.rho_max = cfg.get_double("entropy.rho_max", 4.0);
    gopt.n_u = cfg.get_int("entropy.resolution", 512);
    gopt.n_rho = cfg.get_int("entropy.resolution", 512);
    const auto table = solve_goursat(law, gopt);
    flag("goursat_pde_residual", table->pde_residual_scaled, 1e-3,
         table->pde_residual_scaled < 1e-3);

    double odd_err = 0.0;
    for (size_t i = 0; i < table->rho_grid.size(); i += 7)
        for (size_t j = 0; j < table->u_grid.size() / 2; j += 5) {
            const size_t jm = table->u_grid.size() - 1 - j;
            odd_err = std::max(odd_err,
                               std::abs(table->eta[i][j] + table->eta[i][jm]));
        }
    flag("goursat_odd_symmetry", odd_err, 1e-12, odd_err <= 1e-12);

    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        std::vector<std::vector<double>> cols;
        std::vector<std::string> names;
        names.push_back("rho");
        cols.push_back(table->rho_grid);
        for (size_t j = 0; j < table->u_grid.size(); j += 8) {
            std::ostringstream os;
            os << "eta_u" << format_double(table->u_grid[j]);
            names.push_back(os.str());
            std::vector<double> col;
            for (size_t i = 0; i < table->rho_grid.size(); ++i)
                col.push_back(table->eta[i][j]);
            cols.push_back(std::move(col));
        }
        write_csv(out_dir + "/goursat_eta.csv", names, cols);
        json j;
        j["flags"] = flags_to_json(res.flags);
        std::ofstream f(out_dir + "/entropy_report.json");
        f << j.dump(2) << "\n";
    }

    res.pass = true;
    for (const auto& f : res.flags) res.pass = res.pass && f.pass;
    return res;
}

} // namespace vvlab
