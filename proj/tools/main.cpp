// Command-line driver: single runs, viscosity sweeps, entropy-pair checks,
// and config validation.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "vvlab/config.hpp"
#include "vvlab/io.hpp"
#include "vvlab/sweep.hpp"

namespace {

void print_flags(const std::vector<vvlab::CheckFlag>& flags) {
    for (const auto& f : flags)
        std::printf("  [%s] %-36s value=%-12.5g threshold=%-10.5g\n",
                    f.pass ? "PASS" : "FAIL", f.name.c_str(), f.value, f.threshold);
}

int validate_or_fail(const vvlab::RunConfig& cfg) {
    const auto errors = cfg.validate();
    if (errors.empty()) return 0;
    std::fprintf(stderr, "config rejected:\n");
    for (const auto& e : errors) std::fprintf(stderr, "  - %s\n", e.c_str());
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D compressible flow laboratory: Lagrangian free-boundary solver "
                 "with nonlocal forces, entropy diagnostics, and viscosity sweeps"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path, out_override;
    int workers_override = 0;
    bool no_plots = false;
    app.add_option("--config", config_path, "configuration file (ini or json)")
        ->required();
    app.add_option("--out", out_override, "output directory override");
    app.add_option("--workers", workers_override, "parallel worker count for sweeps");
    app.add_flag("--no-plots", no_plots, "skip SVG plot generation");

    auto* cmd_run = app.add_subcommand("run", "single simulation with diagnostics");
    auto* cmd_sweep = app.add_subcommand("sweep", "viscosity ladder with Cauchy checks");
    auto* cmd_entropy = app.add_subcommand("entropy", "entropy-pair self tests");
    auto* cmd_validate = app.add_subcommand("validate-config", "parse and validate only");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = vvlab::RunConfig::from_file(config_path);
        const std::string out = out_override.empty() ? cfg.output_dir() : out_override;
        const bool plots = !no_plots && cfg.plots();
        const int workers = workers_override > 0 ? workers_override : cfg.workers();

        if (cmd_validate->parsed()) {
            const int rc = validate_or_fail(cfg);
            if (rc == 0) std::printf("config ok\n");
            return rc;
        }
        if (const int rc = validate_or_fail(cfg)) return rc;

        if (cmd_run->parsed()) {
            const double eps = cfg.epsilon_ladder().front();
            const auto r = vvlab::run_single(cfg, eps, out, plots);
            std::printf("run eps=%g steps=%ld dir=%s\n", eps,
                        r.traj.snaps.back().acc.steps, out.c_str());
            print_flags(r.report.flags);
            return r.report.all_pass() ? 0 : 1;
        }
        if (cmd_sweep->parsed()) {
            const auto ladder = cfg.epsilon_ladder();
            if (ladder.size() < 3) {
                std::fprintf(stderr, "sweep needs an epsilon ladder with >= 3 entries "
                                     "(approx.epsilon0 + approx.halvings, or "
                                     "approx.epsilon_list)\n");
                return 2;
            }
            const auto sw = vvlab::run_sweep(cfg, out, workers, plots);
            std::printf("sweep of %zu runs, fitted eps^(4/3)-budget exponent %.3f\n",
                        sw.runs.size(), sw.fitted_eps43_exponent);
            print_flags(sw.flags);
            return sw.pass ? 0 : 1;
        }
        if (cmd_entropy->parsed()) {
            const auto res = vvlab::run_entropy_checks(cfg, out);
            print_flags(res.flags);
            return res.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
