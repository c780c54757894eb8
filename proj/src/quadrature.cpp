#include "vvlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvlab {

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(b > a)) return 0.0;
    const double h = 0.5 * (b - a);
    const double pi_half = 1.57079632679489661923;

    // Abscissae are placed by their distance from the nearer endpoint, so
    // samples keep approaching a singular endpoint instead of rounding onto
    // it: 1 - tanh(s) = 2q/(1+q) with q = exp(-2s).
    auto sample_pair = [&](double t) {
        if (t == 0.0) {
            const double v = f(0.5 * (a + b));
            return std::isfinite(v) ? v * h * pi_half : 0.0;
        }
        const double s = pi_half * std::sinh(t);
        const double q = std::exp(-2.0 * s);
        const double offset = h * 2.0 * q / (1.0 + q);
        if (offset <= 0.0) return 0.0;
        const double w = h * pi_half * std::cosh(t) * 4.0 * q / ((1.0 + q) * (1.0 + q));
        double acc = 0.0;
        const double xl = a + offset, xr = b - offset;
        if (xl > a) {
            const double v = f(xl);
            if (std::isfinite(v)) acc += v * w;
        }
        if (xr < b) {
            const double v = f(xr);
            if (std::isfinite(v)) acc += v * w;
        }
        return acc;
    };

    const double t_max = 6.5;  // offsets underflow well before this for h ~ 1
    double step = 1.0;
    double integral = step * sample_pair(0.0);
    for (double t = step; t <= t_max; t += step) integral += step * sample_pair(t);

    int settled = 0;
    for (int level = 1; level <= 13; ++level) {
        step *= 0.5;
        double add = 0.0;
        for (double t = step; t <= t_max; t += 2.0 * step) add += sample_pair(t);
        const double refined = 0.5 * integral + step * add;
        const double err = std::abs(refined - integral);
        integral = refined;
        // slowly decaying tails can stall a single refinement; require two
        settled = (err <= rel_tol * std::max(std::abs(integral), 1e-300)) ? settled + 1 : 0;
        if (level >= 5 && settled >= 2) break;
    }
    return integral;
}

double jacobi_even_moment(int m, double lambda) {
    // int z^{2m} (1-z^2)^lambda dz = B(m + 1/2, lambda + 1)
    return std::exp(std::lgamma(m + 0.5) + std::lgamma(lambda + 1.0) -
                    std::lgamma(m + lambda + 1.5));
}

namespace {

// Jacobi polynomial P_n^{(lam,lam)} and derivative at x.
void jacobi_poly(int n, double lam, double x, double& p, double& dp) {
    double p0 = 1.0;
    if (n == 0) {
        p = p0;
        dp = 0.0;
        return;
    }
    double p1 = (lam + 1.0) * x;
    for (int k = 2; k <= n; ++k) {
        const double ab = 2.0 * lam;
        const double a1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0);
        const double a3 = (2.0 * k + ab - 2.0) * (2.0 * k + ab - 1.0) * (2.0 * k + ab);
        const double a4 = 2.0 * (k + lam - 1.0) * (k + lam - 1.0) * (2.0 * k + ab);
        const double p2 = (a3 * x * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    // (2n+2lam)(1-x^2) P_n' = -n(2n+2lam) x P_n + 2(n+lam)^2 P_{n-1}
    const double denom = (2.0 * n + 2.0 * lam) * (1.0 - x * x);
    dp = (-n * (2.0 * n + 2.0 * lam) * x * p1 + 2.0 * (n + lam) * (n + lam) * p0) / denom;
}

} // namespace

JacobiRule gauss_jacobi_symmetric(int n, double lambda) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi_symmetric: n must be >= 1");
    if (!(lambda > -0.5))
        throw std::invalid_argument("gauss_jacobi_symmetric: lambda must exceed -1/2");

    JacobiRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    // Newton from Chebyshev-like guesses; roots polished independently.
    for (int k = 0; k < n / 2; ++k) {
        double x = std::cos(M_PI * (k + 0.75 + 0.5 * lambda) / (n + 0.5 + lambda));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            jacobi_poly(n, lambda, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        jacobi_poly(n, lambda, x, p, dp);
        rule.nodes[k] = x;
        rule.nodes[n - 1 - k] = -x;
        const double w = 1.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[k] = w;
        rule.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1) {
        double p, dp;
        jacobi_poly(n, lambda, 0.0, p, dp);
        rule.nodes[n / 2] = 0.0;
        rule.weights[n / 2] = 1.0 / (dp * dp);
    }

    // Single free constant fixed by the zeroth moment.
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    const double scale = jacobi_even_moment(0, lambda) / wsum;
    for (double& w : rule.weights) w *= scale;
    return rule;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n != y_.size() || n < 2)
        throw std::invalid_argument("MonotoneCubic: need >= 2 matching samples");
    d_.assign(n, 0.0);
    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        if (!(h[i] > 0.0))
            throw std::invalid_argument("MonotoneCubic: abscissae must increase");
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_[0] = delta[0];
    d_[n - 1] = delta[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // clamp end slopes (Fritsch-Carlson)
    for (size_t e : {size_t(0), n - 1}) {
        const size_t i = (e == 0) ? 0 : n - 2;
        if (delta[i] == 0.0)
            d_[e] = 0.0;
        else if (d_[e] / delta[i] < 0.0)
            d_[e] = 0.0;
        else if (std::abs(d_[e]) > 3.0 * std::abs(delta[i]))
            d_[e] = 3.0 * delta[i];
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const size_t i = static_cast<size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return s;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    std::vector<double> out(x.size(), 0.0);
    for (size_t i = 0; i + 1 < x.size(); ++i)
        out[i + 1] = out[i] + 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return out;
}

} // namespace vvlab
