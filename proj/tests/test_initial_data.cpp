#include <doctest.h>

#include <cmath>

#include "vvlab/initial_data.hpp"
#include "vvlab/quadrature.hpp"

using namespace vvlab;

namespace {
const double kBeta2 = 2.0;  // alpha = 1 gives beta = 2

RawInitialData zero_raw() {
    RawInitialData raw;
    raw.rho0 = Profile::from_function([](double) { return 0.0; });
    raw.m0 = Profile::from_function([](double) { return 0.0; });
    raw.total_mass = 0.0;
    raw.support_radius = 1.0;
    return raw;
}
} // namespace

TEST_CASE("mollified density of vacuum input is the gaussian floor") {
    const double eps = 0.5, b = 3.0;
    const auto prof = mollify_density(zero_raw(), eps, 1.0, b);
    for (size_t i = 0; i < prof.x.size(); i += 13) {
        const double expected =
            std::pow(eps * std::exp(-prof.x[i] * prof.x[i]), kBeta2);
        CHECK(prof.y[i] == doctest::Approx(expected).epsilon(1e-12));
    }
    // exact value at the boundary
    CHECK(prof.y.back() == doctest::Approx(std::pow(eps * std::exp(-b * b), kBeta2)));
    CHECK(prof.y.front() == doctest::Approx(prof.y.back()));
}

TEST_CASE("mollify rejects out-of-range parameters") {
    const auto raw = raw_gaussian_bump(1.0, 0.5);
    CHECK_THROWS(mollify_density(raw, 0.5, 0.6, 4.0));   // alpha <= 2/3
    CHECK_THROWS(mollify_density(raw, 0.5, 1.2, 4.0));   // alpha > 1
    CHECK_THROWS(mollify_density(raw, 1.5, 1.0, 4.0));   // eps > 1
    CHECK_THROWS(mollify_density(raw, 0.5, 1.0, 0.5));   // b too small
}

TEST_CASE("normalize_mass makes the integral exact") {
    const auto raw = raw_gaussian_bump(2.0, 0.7);
    auto prof = mollify_density(raw, 0.25, 1.0, 5.0);
    normalize_mass(prof, raw.total_mass);
    CHECK(trapezoid(prof.x, prof.y) ==
          doctest::Approx(raw.total_mass).epsilon(1e-13));

    SampledProfile tiny;
    tiny.x = {0.0, 1.0};
    tiny.y = {0.0, 0.0};
    CHECK_THROWS(normalize_mass(tiny, 1.0));
}

TEST_CASE("mollified density converges to the raw profile in L1") {
    const auto raw = raw_gaussian_bump(1.0, 0.8);
    double prev = 1e300;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        auto prof = mollify_density(raw, eps, 1.0, 6.0);
        normalize_mass(prof, raw.total_mass);
        std::vector<double> diff(prof.x.size());
        for (size_t i = 0; i < prof.x.size(); ++i)
            diff[i] = std::abs(prof.y[i] - raw.rho0(prof.x[i]));
        const double l1 = trapezoid(prof.x, diff);
        CHECK(l1 < prev * 1.05);
        prev = l1;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("velocity collars enforce the boundary conditions") {
    // handcrafted constant density so the collar integrals are order one
    const double b = 4.0, eps = 0.5, rho0 = 0.5;
    const auto law = PressureLaw::polytropic(2.0);
    SampledProfile prof;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        prof.x.push_back(-b + 2.0 * b * i / (n - 1));
        prof.y.push_back(rho0);
    }
    const auto u = build_velocity(zero_raw(), prof, eps, 1.0, b, law);

    CHECK(u.front() == doctest::Approx(0.0));
    CHECK(u.back() == doctest::Approx(0.0));
    // collars live in [b - 1/2, b] only
    for (int i = 0; i < n; ++i) {
        if (std::abs(prof.x[i]) < b - 0.51) CHECK(u[i] == 0.0);
    }
    CHECK(u[n - 2] != 0.0);

    // one-sided stress at the boundary cancels P(rho0)
    const double dx = prof.x[n - 1] - prof.x[n - 2];
    const double dudx = (u[n - 1] - u[n - 2]) / dx;
    const double stress = law.pressure(rho0) - eps * std::pow(rho0, 1.0) * dudx;
    CHECK(std::abs(stress) <= 10.0 * dx);
}

TEST_CASE("vacuum under nonzero momentum is rejected") {
    auto raw = raw_gaussian_bump(1.0, 0.5, 1.0);  // nonzero velocity
    SampledProfile prof;
    prof.x = {-4.0, -2.0, 0.0, 2.0, 4.0};
    prof.y = {0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS(build_velocity(raw, prof, 0.25, 1.0, 4.0, PressureLaw::polytropic(2.0)));
}

TEST_CASE("mollified kinetic energy matches the squared mollified momentum") {
    // rho^eps |u|^2 == |(m0 1 / sqrt(rho0)) * J|^2 pointwise away from collars
    const auto raw = raw_gaussian_bump(1.0, 0.8, 0.5);
    const double eps = 0.25, b = 8.0;
    auto prof = mollify_density(raw, eps, 1.0, b);
    normalize_mass(prof, raw.total_mass);
    const auto u = build_velocity(raw, prof, eps, 1.0, b, PressureLaw::polytropic(2.0));

    // independent mollification of m0/sqrt(rho0) with the same bump kernel
    const double delta = std::sqrt(eps);
    auto conv_at = [&](double x) {
        const int nq = 2000;
        std::vector<double> t(nq + 1), f(nq + 1);
        for (int i = 0; i <= nq; ++i) {
            t[i] = -delta + 2.0 * delta * i / nq;
            const double z = x - t[i];
            const double r = raw.rho0(z);
            const double j = std::abs(t[i] / delta) < 1.0
                                 ? std::exp(-1.0 / (1.0 - (t[i] / delta) * (t[i] / delta)))
                                 : 0.0;
            f[i] = (r > 0.0 && std::abs(z) <= b - 2.0) ? raw.m0(z) / std::sqrt(r) * j
                                                       : 0.0;
        }
        // normalize the bump kernel numerically
        std::vector<double> jn(nq + 1);
        for (int i = 0; i <= nq; ++i) {
            const double s = t[i] / delta;
            jn[i] = std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
        }
        return trapezoid(t, f) / trapezoid(t, jn);
    };
    for (double x : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
        size_t i = 0;
        while (prof.x[i] < x) ++i;
        const double lhs = prof.y[i] * u[i] * u[i];
        const double c = conv_at(prof.x[i]);
        CHECK(lhs == doctest::Approx(c * c).epsilon(2e-3));
    }
}

TEST_CASE("full pipeline: functionals, convergence along the ladder") {
    const auto law = PressureLaw::polytropic(2.0);
    const auto raw = raw_gaussian_bump(1.0, 0.8, 0.3);

    // raw-data references
    const double e1_scale_tol = 5.0;
    std::vector<double> m2_err, e1_over_eps, e0s;
    MollifyOptions opt;
    opt.core_points = 2048;
    for (double eps : {0.4, 0.2, 0.1}) {
        const auto data = build_approx_initial_data(raw, eps, 1.0, 2.5, law, opt);
        CHECK(data.total_mass == doctest::Approx(raw.total_mass).epsilon(1e-12));
        CHECK(data.boundary_u_left == 0.0);
        CHECK(data.boundary_u_right == 0.0);
        CHECK(std::isfinite(data.E0));
        CHECK(data.E1 >= 0.0);
        m2_err.push_back(std::abs(data.second_moment - raw.second_moment));
        e1_over_eps.push_back(data.E1 / eps);
        e0s.push_back(data.E0);
    }
    CHECK(m2_err[1] <= m2_err[0] * 1.1);
    CHECK(m2_err[2] <= m2_err[1] * 1.1);
    // E1 <= C eps along the ladder
    CHECK(e1_over_eps[1] <= e1_scale_tol * e1_over_eps[0] + 1e-12);
    CHECK(e1_over_eps[2] <= e1_scale_tol * e1_over_eps[0] + 1e-12);
}

TEST_CASE("equal-mass partition produces a consistent state") {
    const auto law = PressureLaw::polytropic(2.0);
    const auto raw = raw_gaussian_bump(1.5, 0.6);
    const auto data = build_approx_initial_data(raw, 0.3, 1.0, 0.0, law, {}, 6.0);
    const auto s = make_initial_state(data, 128);
    CHECK(s.n_cells == 128);
    CHECK(s.node_x.front() == doctest::Approx(-6.0));
    CHECK(s.node_x.back() == doctest::Approx(6.0));
    CHECK(s.positions_increasing());
    CHECK(s.total_mass() == doctest::Approx(1.5).epsilon(1e-12));
    for (int i = 0; i < s.n_cells; ++i)
        CHECK(s.cell_rho[i] ==
              doctest::Approx(s.dxi / s.cell_width(i)).epsilon(1e-14));
}
