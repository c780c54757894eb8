#include "vvlab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvlab/quadrature.hpp"

namespace vvlab {

namespace {

// standard bump mollifier c exp(-1/(1-x^2)) on (-1, 1), unit integral
double bump_unnormalized(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

double bump_norm_constant() {
    static const double c = [] {
        const int n = 20001;
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = -1.0 + 2.0 * i / (n - 1);
            y[i] = bump_unnormalized(x[i]);
        }
        return 1.0 / trapezoid(x, y);
    }();
    return c;
}

// C-infinity ramp: 0 on (-inf, 0], 1 on [2, inf), increasing between.
double ramp_s(double z) {
    if (z <= 0.0) return 0.0;
    if (z >= 2.0) return 1.0;
    const double t = 0.5 * z;
    const double g = std::exp(-1.0 / t);
    const double h = std::exp(-1.0 / (1.0 - t));
    return g / (g + h);
}

std::vector<double> make_sample_grid(double b, double core_radius,
                                     const MollifyOptions& opt) {
    std::vector<double> xs;
    const double lc = std::min(core_radius, b);
    const int nc = std::max(opt.core_points, 64);
    for (int i = 0; i <= nc; ++i) xs.push_back(-lc + 2.0 * lc * i / nc);
    if (b > lc) {
        const int nt = std::max(opt.tail_points, 16);
        const double r = std::pow(b / lc, 1.0 / nt);
        double p = lc;
        for (int i = 1; i <= nt; ++i) {
            p = (i == nt) ? b : p * r;
            xs.push_back(p);
            xs.push_back(-p);
        }
        // the collar construction needs resolution on [b-1, b]
        for (int i = 0; i <= 64; ++i) {
            xs.push_back(b - 1.0 + i / 64.0);
            xs.push_back(-b + 1.0 - i / 64.0);
        }
    } else {
        xs.front() = -b;
        xs.back() = b;
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.front() = -b;
    xs.back() = b;
    return xs;
}

struct MollifierQuad {
    std::vector<double> y, w;
};

MollifierQuad mollifier_quadrature(double delta, int points) {
    const int nm = std::max(points, 64);
    const double cnorm = bump_norm_constant();
    MollifierQuad q;
    q.y.resize(nm + 1);
    q.w.resize(nm + 1);
    for (int i = 0; i <= nm; ++i) {
        q.y[i] = -delta + 2.0 * delta * i / nm;
        q.w[i] = (cnorm / delta) * bump_unnormalized(q.y[i] / delta) * (2.0 * delta / nm);
        if (i == 0 || i == nm) q.w[i] *= 0.5;
    }
    return q;
}

} // namespace

Profile Profile::from_function(std::function<double(double)> f) {
    Profile p;
    p.fn_ = std::move(f);
    return p;
}

Profile Profile::from_samples(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("Profile: need >= 2 matching samples");
    for (size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("Profile: abscissae must increase");
    Profile p;
    p.x_ = std::move(x);
    p.y_ = std::move(y);
    return p;
}

double Profile::operator()(double x) const {
    if (fn_) return fn_(x);
    if (x_.empty() || x < x_.front() || x > x_.back()) return 0.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return y_.front();
    if (it == x_.end()) return y_.back();
    const size_t i = size_t(it - x_.begin()) - 1;
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return y_[i] + t * (y_[i + 1] - y_[i]);
}

namespace {

RawInitialData finish_raw(RawInitialData raw) {
    const double r = raw.support_radius + 2.0;
    const int n = 40001;
    std::vector<double> x(n), rho(n), x2rho(n);
    for (int i = 0; i < n; ++i) {
        x[i] = -r + 2.0 * r * i / (n - 1);
        rho[i] = raw.rho0(x[i]);
        x2rho[i] = x[i] * x[i] * rho[i];
    }
    raw.total_mass = trapezoid(x, rho);
    raw.second_moment = trapezoid(x, x2rho);
    return raw;
}

std::function<double(double)> tanh_velocity(double amplitude, double scale) {
    return [amplitude, scale](double x) { return amplitude * std::tanh(x / scale); };
}

} // namespace

RawInitialData raw_gaussian_bump(double mass, double sigma, double velocity_amplitude) {
    if (!(mass > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("gaussian bump: mass and sigma must be positive");
    RawInitialData raw;
    const double amp = mass / (sigma * std::sqrt(2.0 * M_PI));
    raw.rho0 = Profile::from_function(
        [amp, sigma](double x) { return amp * std::exp(-0.5 * x * x / (sigma * sigma)); });
    auto v = tanh_velocity(velocity_amplitude, sigma);
    auto rho = raw.rho0;
    raw.m0 = Profile::from_function([rho, v](double x) { return rho(x) * v(x); });
    raw.support_radius = 6.0 * sigma;
    return finish_raw(raw);
}

RawInitialData raw_double_bump(double mass, double sigma, double separation,
                               double velocity_amplitude) {
    if (!(mass > 0.0) || !(sigma > 0.0) || !(separation >= 0.0))
        throw std::invalid_argument("double bump: bad parameters");
    RawInitialData raw;
    const double amp = 0.5 * mass / (sigma * std::sqrt(2.0 * M_PI));
    const double c = 0.5 * separation;
    raw.rho0 = Profile::from_function([amp, sigma, c](double x) {
        const double a = (x - c) / sigma, b = (x + c) / sigma;
        return amp * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
    });
    auto v = tanh_velocity(velocity_amplitude, sigma);
    auto rho = raw.rho0;
    raw.m0 = Profile::from_function([rho, v](double x) { return rho(x) * v(x); });
    raw.support_radius = c + 6.0 * sigma;
    return finish_raw(raw);
}

RawInitialData raw_plateau(double mass, double halfwidth, double velocity_amplitude) {
    if (!(mass > 0.0) || !(halfwidth > 0.0))
        throw std::invalid_argument("plateau: mass and halfwidth must be positive");
    RawInitialData raw;
    const double h = mass / (2.0 * halfwidth);
    raw.rho0 = Profile::from_function(
        [h, halfwidth](double x) { return std::abs(x) <= halfwidth ? h : 0.0; });
    auto v = tanh_velocity(velocity_amplitude, halfwidth);
    auto rho = raw.rho0;
    raw.m0 = Profile::from_function([rho, v](double x) { return rho(x) * v(x); });
    raw.support_radius = halfwidth + 1.0;
    return finish_raw(raw);
}

RawInitialData raw_from_samples(std::vector<double> x, std::vector<double> rho,
                                std::vector<double> m) {
    RawInitialData raw;
    raw.support_radius = std::max(std::abs(x.front()), std::abs(x.back()));
    raw.rho0 = Profile::from_samples(x, rho);
    raw.m0 = Profile::from_samples(std::move(x), std::move(m));
    return finish_raw(raw);
}

SampledProfile mollify_density(const RawInitialData& raw, double epsilon,
                               double alpha, double b, const MollifyOptions& opt) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("mollify_density: epsilon must lie in (0, 1]");
    if (!(alpha > 2.0 / 3.0 && alpha <= 1.0))
        throw std::invalid_argument(
            "mollify_density: alpha must lie in (2/3, 1] so that beta = 2/(2 alpha - 1) "
            "stays in [2, 6)");
    if (!(b > 1.0)) throw std::invalid_argument("mollify_density: b must exceed 1");

    const double beta = 2.0 / (2.0 * alpha - 1.0);
    const double q = alpha - 0.5;  // exponent applied before mollification
    const double delta = std::sqrt(epsilon);
    const auto quad = mollifier_quadrature(delta, opt.mollifier_points);

    SampledProfile out;
    out.x = make_sample_grid(b, raw.support_radius + 5.0 * delta + 2.0, opt);
    out.y.resize(out.x.size());

    const double cut = b - 1.0;  // density indicator support
    for (size_t j = 0; j < out.x.size(); ++j) {
        double conv = 0.0;
        for (size_t i = 0; i < quad.y.size(); ++i) {
            const double z = out.x[j] - quad.y[i];
            if (std::abs(z) > cut) continue;
            const double r = raw.rho0(z);
            if (r > 0.0) conv += quad.w[i] * std::pow(r, q);
        }
        const double floor_term = epsilon * std::exp(-out.x[j] * out.x[j]);
        out.y[j] = std::pow(conv + floor_term, beta);
    }
    return out;
}

void normalize_mass(SampledProfile& profile, double target_mass) {
    const double m = trapezoid(profile.x, profile.y);
    if (!(m > 0.0))
        throw std::invalid_argument("normalize_mass: profile has zero mass");
    const double s = target_mass / m;
    for (double& v : profile.y) v *= s;
}

std::vector<double> build_velocity(const RawInitialData& raw,
                                   const SampledProfile& rho_eps, double epsilon,
                                   double alpha, double b, const PressureLaw& law,
                                   const MollifyOptions& opt) {
    const double delta = std::sqrt(epsilon);
    const auto quad = mollifier_quadrature(delta, opt.mollifier_points);
    const size_t n = rho_eps.x.size();

    const double cut = b - 2.0;  // momentum indicator support
    std::vector<double> u(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
        double conv = 0.0;
        for (size_t i = 0; i < quad.y.size(); ++i) {
            const double z = rho_eps.x[j] - quad.y[i];
            if (std::abs(z) > cut) continue;
            const double r = raw.rho0(z);
            if (r > 0.0) conv += quad.w[i] * raw.m0(z) / std::sqrt(r);
        }
        if (conv != 0.0) {
            if (!(rho_eps.y[j] > 0.0))
                throw std::invalid_argument("build_velocity: vacuum under nonzero momentum");
            u[j] = conv / std::sqrt(rho_eps.y[j]);
        }
    }

    // P/mu on the grid and its cumulative integrals toward each boundary
    std::vector<double> pm(n);
    for (size_t j = 0; j < n; ++j) {
        const double r = rho_eps.y[j];
        pm[j] = r > 0.0 ? law.pressure(r) / std::pow(r, alpha) : 0.0;
    }
    const auto cum = cumulative_trapezoid(rho_eps.x, pm);
    const double total = cum.back();

    for (size_t j = 0; j < n; ++j) {
        const double x = rho_eps.x[j];
        const double s_right = ramp_s(4.0 * (x - (b - 0.5)));
        if (s_right > 0.0) u[j] -= s_right * (total - cum[j]) / epsilon;
        const double s_left = ramp_s(-4.0 * (x - (-b + 0.5)));
        if (s_left > 0.0) u[j] += s_left * cum[j] / epsilon;
    }
    return u;
}

std::vector<double> potential_of_profile(const std::vector<double>& x,
                                         const std::vector<double>& rho) {
    const size_t n = x.size();
    std::vector<double> xr(n), x2r(n);
    for (size_t i = 0; i < n; ++i) {
        xr[i] = x[i] * rho[i];
        x2r[i] = x[i] * x[i] * rho[i];
    }
    const auto f = cumulative_trapezoid(x, rho);   // mass below x
    const auto g = cumulative_trapezoid(x, xr);    // first moment below x
    const double mass = f.back();
    const double g_tot = g.back();
    const double q_tot = trapezoid(x, x2r);
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) {
        const double abs_part = x[i] * (2.0 * f[i] - mass) + g_tot - 2.0 * g[i];
        const double quad_part = 0.5 * (x[i] * x[i] * mass - 2.0 * x[i] * g_tot + q_tot);
        w[i] = -abs_part + quad_part;
    }
    return w;
}

void initial_functionals(ApproxInitialData& data, const PressureLaw& law) {
    const size_t n = data.x.size();
    std::vector<double> en(n), x2r(n), bd(n, 0.0), inter(n);
    const auto wpot = potential_of_profile(data.x, data.rho);
    for (size_t i = 0; i < n; ++i) {
        const double r = data.rho[i];
        en[i] = 0.5 * r * data.u[i] * data.u[i] + r * law.internal_energy(r) +
                0.5 * r * wpot[i];
        inter[i] = r * wpot[i];
        x2r[i] = data.x[i] * data.x[i] * r;
    }
    // eps^2 int rho^{2a-3} rho_x^2 dx written through (rho^{a-1/2})_x, which
    // stays finite where the density underflows
    const double q = data.alpha - 0.5;
    for (size_t i = 1; i + 1 < n; ++i) {
        const double pl = std::pow(data.rho[i - 1], q);
        const double pr = std::pow(data.rho[i + 1], q);
        const double dpq = (pr - pl) / (data.x[i + 1] - data.x[i - 1]);
        bd[i] = dpq * dpq / (q * q);
    }
    data.E0 = trapezoid(data.x, en);
    data.E1 = data.epsilon * data.epsilon * trapezoid(data.x, bd);
    data.total_mass = trapezoid(data.x, data.rho);
    data.second_moment = trapezoid(data.x, x2r);
    data.interaction_energy = trapezoid(data.x, inter);
    data.boundary_rho = data.rho.back();
    data.boundary_u_left = data.u.front();
    data.boundary_u_right = data.u.back();

    // one-sided stress residuals at the boundaries
    auto stress_residual = [&](bool right) {
        const size_t i0 = right ? n - 1 : 0;
        const size_t i1 = right ? n - 2 : 1;
        const double du = (data.u[i0] - data.u[i1]) / (data.x[i0] - data.x[i1]);
        const double r = data.rho[i0];
        const double mu = r > 0.0 ? std::pow(r, data.alpha) : 0.0;
        return law.pressure(std::max(r, 0.0)) - data.epsilon * mu * du;
    };
    data.stress_residual_left = stress_residual(false);
    data.stress_residual_right = stress_residual(true);
}

ApproxInitialData build_approx_initial_data(const RawInitialData& raw, double epsilon,
                                            double alpha, double p_exponent,
                                            const PressureLaw& law,
                                            const MollifyOptions& opt,
                                            double b_override) {
    ApproxInitialData data;
    data.epsilon = epsilon;
    data.alpha = alpha;
    data.beta = 2.0 / (2.0 * alpha - 1.0);
    data.p_exponent = b_override > 0.0 ? 0.0 : p_exponent;
    data.halfwidth = b_override > 0.0 ? b_override : std::pow(epsilon, -p_exponent);

    SampledProfile prof = mollify_density(raw, epsilon, alpha, data.halfwidth, opt);
    normalize_mass(prof, raw.total_mass);
    data.u = build_velocity(raw, prof, epsilon, alpha, data.halfwidth, law, opt);
    data.x = std::move(prof.x);
    data.rho = std::move(prof.y);
    initial_functionals(data, law);
    return data;
}

MassGridState make_initial_state(const ApproxInitialData& data, int n_cells) {
    if (n_cells < 1) throw std::invalid_argument("make_initial_state: need n_cells >= 1");
    MassGridState s;
    s.n_cells = n_cells;
    s.epsilon = data.epsilon;
    s.alpha = data.alpha;

    auto cum = cumulative_trapezoid(data.x, data.rho);
    const double mass = cum.back();
    s.dxi = mass / n_cells;
    s.node_x.resize(n_cells + 1);
    s.node_u.resize(n_cells + 1);
    s.cell_rho.resize(n_cells);

    // invert the cumulative mass at equal increments
    s.node_x[0] = data.x.front();
    size_t seg = 0;
    for (int j = 1; j < n_cells; ++j) {
        const double target = mass * j / n_cells;
        while (seg + 2 < cum.size() && cum[seg + 1] < target) ++seg;
        const double c0 = cum[seg], c1 = cum[seg + 1];
        const double t = (c1 > c0) ? (target - c0) / (c1 - c0) : 0.0;
        s.node_x[j] = data.x[seg] + t * (data.x[seg + 1] - data.x[seg]);
        if (s.node_x[j] <= s.node_x[j - 1])
            throw std::runtime_error("make_initial_state: degenerate mass partition");
    }
    s.node_x[n_cells] = data.x.back();

    Profile uprof = Profile::from_samples(data.x, data.u);
    for (int j = 0; j <= n_cells; ++j) s.node_u[j] = uprof(s.node_x[j]);
    s.recompute_density();
    s.validate();
    return s;
}

} // namespace vvlab
