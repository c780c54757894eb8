#include <doctest.h>

#include <cmath>
#include <random>

#include "vvlab/entropy.hpp"
#include "vvlab/quadrature.hpp"

using namespace vvlab;

TEST_CASE("kernel chi closed cases") {
    const auto law3 = PressureLaw::polytropic(3.0);  // theta = 1, exponent 0
    CHECK(kernel_chi(law3, 2.0, 1.0) == doctest::Approx(1.0));  // indicator
    CHECK(kernel_chi(law3, 2.0, 2.5) == 0.0);

    const auto law2 = PressureLaw::polytropic(2.0);
    CHECK(kernel_chi(law2, 1.0, 0.0) == doctest::Approx(1.0));  // [1 - 0]^{1/2}
    // support edge
    const double edge = law2.sound_integral(1.7);
    CHECK(kernel_chi(law2, 1.7, edge) == 0.0);
}

TEST_CASE("quadratic generator reproduces the mechanical pair") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> rho_d(1e-3, 5.0), u_d(-4.0, 4.0);
    Generator sq{[](double s) { return 0.5 * s * s; }, [](double s) { return s; }};
    for (double gamma : {1.5, 2.0, 3.0, 4.2}) {
        const auto law = PressureLaw::polytropic(gamma);
        const auto gen = generate_pair(sq, law, 32);
        const auto mech = mechanical_pair(law);
        for (int i = 0; i < 60; ++i) {
            const double rho = rho_d(rng), m = rho * u_d(rng);
            const double scale = std::max(1.0, std::abs(mech.eta(rho, m)));
            CHECK(std::abs(gen.eta(rho, m) - mech.eta(rho, m)) / scale <= 1e-10);
            CHECK(std::abs(gen.q(rho, m) - mech.q(rho, m)) / scale <= 1e-10);
            CHECK(gen.eta_m(rho, m) == doctest::Approx(mech.eta_m(rho, m)).epsilon(1e-10));
            CHECK(gen.eta_rho(rho, m) ==
                  doctest::Approx(mech.eta_rho(rho, m)).epsilon(1e-9));
        }
    }
}

TEST_CASE("degenerate generators") {
    const auto law = PressureLaw::polytropic(2.0);
    Generator zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
    const auto z = generate_pair(zero, law, 16);
    CHECK(z.eta(1.3, 0.7) == 0.0);
    CHECK(z.q(1.3, 0.7) == 0.0);

    // psi(s) = s generates the momentum entropy eta = m
    Generator lin{[](double s) { return s; }, [](double) { return 1.0; }};
    const auto l = generate_pair(lin, law, 16);
    for (double rho : {0.1, 1.0, 2.7})
        for (double u : {-2.0, 0.0, 1.5})
            CHECK(l.eta(rho, rho * u) == doctest::Approx(rho * u).epsilon(1e-12));

    // psi = 1 gives the mass entropy
    Generator one{[](double) { return 1.0; }, [](double) { return 0.0; }};
    const auto o = generate_pair(one, law, 16);
    CHECK(o.eta(1.7, 0.4) == doctest::Approx(1.7).epsilon(1e-12));

    // vacuum: every weak entropy vanishes
    CHECK(l.eta(0.0, 0.0) == 0.0);
    CHECK(mechanical_pair(law).eta(0.0, 0.0) == 0.0);
    CHECK(special_pair_hash(law).eta(0.0, 0.0) == 0.0);
}

TEST_CASE("pair compatibility grad q = grad eta * grad flux") {
    const auto law = PressureLaw::polytropic(2.0);
    Generator bump{[](double s) { return std::exp(-s * s); },
                   [](double s) { return -2.0 * s * std::exp(-s * s); }};
    const auto pairs = {mechanical_pair(law), generate_pair(bump, law, 64),
                        special_pair_hash(law)};
    for (const auto& p : pairs) {
        for (double rho : {0.4, 1.0, 2.3}) {
            for (double u : {-0.8, -0.1, 0.3, 0.9}) {
                const double m = rho * u;
                const double hr = 1e-5 * rho, hm = 1e-5 * std::max(std::abs(m), rho);
                const double q_rho = (p.q(rho + hr, m) - p.q(rho - hr, m)) / (2 * hr);
                const double q_m = (p.q(rho, m + hm) - p.q(rho, m - hm)) / (2 * hm);
                const double er = p.eta_rho(rho, m), em = p.eta_m(rho, m);
                // dF = [[0, 1], [P' - u^2, 2u]]
                const double rhs_rho = em * (law.dpressure(rho) - u * u);
                const double rhs_m = er + em * 2.0 * u;
                const double scale =
                    std::max({1.0, std::abs(q_rho), std::abs(q_m)});
                CHECK(std::abs(q_rho - rhs_rho) / scale <= 1e-4);
                CHECK(std::abs(q_m - rhs_m) / scale <= 1e-4);
            }
        }
    }
}

TEST_CASE("special pair basics") {
    const auto law = PressureLaw::polytropic(2.0);
    const auto hash = special_pair_hash(law);
    for (double rho : {1e-6, 1e-2, 1.0, 4.0, 50.0})
        CHECK(hash.eta(rho, 0.0) == 0.0);

    // q#(1, 0): defining integral via independent quadrature
    const double b = law.kernel_exponent(), theta = law.theta();
    const double i0 = jacobi_even_moment(0, b);
    const double k1 = law.sound_integral(1.0);
    const double expected =
        tanh_sinh(
            [&](double z) {
                const double s = k1 * z;
                return (theta * s) * 0.5 * s * std::abs(s) *
                       std::pow((1.0 - z) * (1.0 + z), b);
            },
            -1.0, 1.0, 1e-13) /
        i0;
    CHECK(hash.q(1.0, 0.0) == doctest::Approx(expected).epsilon(1e-10));

    // outside the wave fan the pair is the signed mechanical pair
    const auto mech = mechanical_pair(law);
    const double rho = 0.8, k = law.sound_integral(rho);
    CHECK(hash.eta(rho, rho * (k + 0.5)) ==
          doctest::Approx(mech.eta(rho, rho * (k + 0.5))));
    CHECK(hash.eta(rho, -rho * (k + 0.5)) ==
          doctest::Approx(-mech.eta(rho, rho * (k + 0.5))));
}

TEST_CASE("special pair growth and derivative bounds are refinement stable") {
    const auto law = PressureLaw::polytropic(2.0);
    const auto hash = special_pair_hash(law);
    const double g = law.gamma(), th = law.theta();

    auto grids = [](int n) {
        auto rho = log_space(1e-4, 30.0, n);
        std::vector<double> u;
        for (double v : log_space(1e-2, 20.0, n)) {
            u.push_back(v);
            u.push_back(-v);
        }
        return std::pair(rho, u);
    };

    auto fit_all = [&](int n) {
        auto [rho_g, u_g] = grids(n);
        // q# >= C^-1 (rho|u|^3 + rho^{g+th}): fit the smallest ratio
        double cmin = 1e300, c_em = 0.0, c_er = 0.0;
        for (double rho : rho_g)
            for (double u : u_g) {
                const double m = rho * u;
                const double den = rho * std::pow(std::abs(u), 3.0) + std::pow(rho, g + th);
                cmin = std::min(cmin, hash.q(rho, m) / den);
                c_em = std::max(c_em, std::abs(hash.eta_m(rho, m)) /
                                          (std::abs(u) + std::pow(rho, th)));
                c_er = std::max(c_er, std::abs(hash.eta_rho(rho, m)) /
                                          (u * u + std::pow(rho, 2.0 * th)));
            }
        return std::array<double, 3>{cmin, c_em, c_er};
    };

    const auto a = fit_all(9), bfit = fit_all(17);
    CHECK(a[0] > 0.0);  // the flux really does dominate rho|u|^3 + rho^{g+th}
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(bfit[i] - a[i]) / a[i] <= 0.05);
}

TEST_CASE("cancellation of q# - u eta#") {
    const auto law = PressureLaw::polytropic(2.0);
    const auto hash = special_pair_hash(law);
    const auto rep = cancellation_check(hash, law, 13, 9);
    CHECK(std::isfinite(rep.fitted_constant));
    CHECK(rep.fitted_constant > 0.0);
    CHECK(rep.drift <= 0.05);
}

TEST_CASE("dissipation residual vanishes for a constant state") {
    MassGridState s;
    s.n_cells = 32;
    s.dxi = 2.0 / 32;
    s.node_x.resize(33);
    s.node_u.assign(33, 0.0);
    s.cell_rho.assign(32, 1.0);
    for (int j = 0; j <= 32; ++j) s.node_x[j] = -1.0 + j / 16.0;
    s.epsilon = 0.1;

    Trajectory traj;
    traj.total_mass = 2.0;
    traj.initial_halfwidth = 1.0;
    RunAccumulators acc;
    traj.snaps.push_back({s, acc});
    auto s2 = s;
    s2.time = 0.1;
    traj.snaps.push_back({s2, acc});

    const auto law = PressureLaw::polytropic(2.0);
    const auto rep = dissipation_residual(traj, mechanical_pair(law), law,
                                          NonlocalConfig{}, -0.5, 0.5, 64);
    CHECK(rep.positive_part == 0.0);
    CHECK(rep.visc_budget == 0.0);
}

TEST_CASE("mechanical dissipation positive part shrinks under joint refinement") {
    const auto law = PressureLaw::polytropic(2.0);
    const auto raw = raw_gaussian_bump(1.0, 0.8, 0.2);
    NonlocalConfig nl;
    nl.lambda = -0.2;

    auto positive_part = [&](int n, double eps) {
        auto data = build_approx_initial_data(raw, eps, 1.0, 0.0, law, {}, 10.0);
        auto s = make_initial_state(data, n);
        SolverConfig cfg;
        cfg.t_end = 0.4;
        cfg.dt_max = 4e-3 * 64.0 / n;
        const auto traj = run(s, law, nl, cfg, 10);
        return dissipation_residual(traj, mechanical_pair(law), law, nl, -1.5, 1.5, 256)
            .positive_part;
    };
    const double coarse = positive_part(64, 0.2);
    const double fine = positive_part(128, 0.1);
    CHECK(fine < coarse);
}
