#include <doctest.h>

#include <cmath>

#include "vvlab/pressure_law.hpp"
#include "vvlab/quadrature.hpp"

using namespace vvlab;

namespace {
std::vector<double> log_grid_for_tests() {
    std::vector<double> g;
    for (double r = 1e-6; r <= 1.001e3; r *= 3.1623) g.push_back(r);
    return g;
}
} // namespace

TEST_CASE("polytropic closed forms") {
    const auto law = PressureLaw::polytropic(2.0);
    CHECK(law.kappa() == doctest::Approx(0.125));  // default (g-1)^2/(4g)
    CHECK(law.pressure(2.0) == doctest::Approx(0.5));
    CHECK(law.pressure(0.0) == 0.0);
    CHECK(law.internal_energy(1.0) == doctest::Approx(0.125));
    CHECK(law.internal_energy(0.0) == 0.0);
    CHECK(law.sound_integral(4.0) == doctest::Approx(2.0));  // k = sqrt(rho) here
    CHECK(law.sound_integral(0.0) == 0.0);
    CHECK(law.kernel_exponent() == doctest::Approx(0.5));

    const auto law3 = PressureLaw::polytropic(3.0, 1.0 / 3.0);
    CHECK(law3.sound_integral(1.0) == doctest::Approx(1.0));
    CHECK(law3.kernel_exponent() == doctest::Approx(0.0));
}

TEST_CASE("constructor rejects invalid parameters") {
    CHECK_THROWS(PressureLaw::polytropic(1.0));
    CHECK_THROWS(PressureLaw::polytropic(0.5));
    CHECK_THROWS(PressureLaw::polytropic(2.0, -1e-3));
    CHECK_THROWS(PressureLaw::general_blend(2.0, 2.5));   // gamma2 > gamma1
    CHECK_THROWS(PressureLaw::general_blend(2.0, 1.0));   // gamma2 = 1
    CHECK_THROWS(PressureLaw::general_blend(2.0, 1.5, 0.125, 2.0, 1.0));
    CHECK_THROWS(PressureLaw::polytropic(2.0).pressure(-1.0));
}

TEST_CASE("closed forms agree with quadrature of the defining integrals") {
    for (const auto& law :
         {PressureLaw::polytropic(1.4), PressureLaw::polytropic(2.0),
          PressureLaw::general_blend(2.0, 1.5)}) {
        // integrate piecewise so each piece is smooth inside
        auto integral = [&](auto f, double rho) {
            std::vector<double> cuts{0.0};
            for (double c : {law.rho_star_low(), law.rho_star_high()})
                if (law.kind() == PressureLaw::Kind::GeneralBlend && c < rho)
                    cuts.push_back(c);
            cuts.push_back(rho);
            double total = 0.0;
            for (size_t i = 0; i + 1 < cuts.size(); ++i)
                total += tanh_sinh(f, cuts[i], cuts[i + 1], 1e-13);
            return total;
        };
        for (double rho : {1e-6, 1e-3, 0.5, 1.3, 20.0, 1e3}) {
            const double e_ref =
                integral([&](double s) { return law.pressure(s) / (s * s); }, rho);
            const double k_ref = integral(
                [&](double s) { return std::sqrt(law.dpressure(s)) / s; }, rho);
            CHECK(law.internal_energy(rho) == doctest::Approx(e_ref).epsilon(1e-8));
            CHECK(law.sound_integral(rho) == doctest::Approx(k_ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("rho^2 e'(rho) = P(rho), finite differences") {
    for (const auto& law :
         {PressureLaw::polytropic(2.0), PressureLaw::general_blend(2.0, 1.5)}) {
        for (double rho : {0.3, 1.0, 1.5, 3.0, 12.0}) {
            const double h = 1e-5 * rho;
            const double de =
                (law.internal_energy(rho + h) - law.internal_energy(rho - h)) / (2 * h);
            CHECK(rho * rho * de == doctest::Approx(law.pressure(rho)).epsilon(1e-6));
        }
    }
}

TEST_CASE("pressure and sound integral strictly increase") {
    for (const auto& law :
         {PressureLaw::polytropic(1.2), PressureLaw::general_blend(2.2, 1.3)}) {
        double prev_p = 0.0, prev_k = 0.0;
        for (double rho : log_grid_for_tests()) {
            CHECK(law.pressure(rho) > prev_p);
            CHECK(law.sound_integral(rho) > prev_k);
            prev_p = law.pressure(rho);
            prev_k = law.sound_integral(rho);
        }
    }
}

TEST_CASE("blend respects the two-regime brackets and stays smooth") {
    const auto law = PressureLaw::general_blend(2.0, 1.5, 0.125, 1.0, 4.0);
    // exact power law outside the blend window
    CHECK(law.pressure(1e-4) ==
          doctest::Approx(0.125 * std::pow(1e-4, 2.0)).epsilon(1e-14));
    // continuity pins the high coefficient at kappa1 (rho*/rho.)^{(g1-g2)/2}
    CHECK(law.kappa2() == doctest::Approx(0.125 * std::pow(4.0, 0.25)).epsilon(1e-14));
    CHECK(law.pressure(10.0) ==
          doctest::Approx(law.kappa2() * std::pow(10.0, 1.5)).epsilon(1e-14));
    // C^1 across the joins
    for (double rho0 : {1.0, 4.0}) {
        const double h = 1e-6;
        const double left = (law.pressure(rho0) - law.pressure(rho0 - h)) / h;
        const double right = (law.pressure(rho0 + h) - law.pressure(rho0)) / h;
        CHECK(left == doctest::Approx(right).epsilon(1e-4));
        CHECK(law.dpressure(rho0) == doctest::Approx(left).epsilon(1e-4));
    }
}

TEST_CASE("validate_hypotheses reports regime ratios") {
    const auto poly = PressureLaw::polytropic(2.0);
    auto grid = log_grid_for_tests();
    const auto rep = poly.validate_hypotheses(grid);
    CHECK(rep.pass);
    CHECK(rep.low.min_ratio == doctest::Approx(1.0));
    CHECK(rep.high.max_ratio == doctest::Approx(1.0));
    // pure power law: 2P' + rho P'' = (g+1) kappa g rho^{g-1}
    const double expected = 3.0 * 0.125 * 2.0 * std::pow(grid.front(), 1.0);
    CHECK(rep.min_genuine_nonlinearity == doctest::Approx(expected).epsilon(1e-10));

    const auto blend = PressureLaw::general_blend(2.0, 1.5);
    const auto rep2 = blend.validate_hypotheses(grid);
    CHECK(rep2.pass);
    CHECK(rep2.low.bracket_ok);
    CHECK(rep2.high.bracket_ok);
    CHECK(!rep2.note.empty());
    CHECK(rep2.summary().find("pass") != std::string::npos);
}
