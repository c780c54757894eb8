#pragma once

#include <functional>
#include <vector>

namespace vvlab {

// Adaptive tanh-sinh (double-exponential) quadrature on [a, b].
// Handles integrable endpoint singularities, e.g. (1 - z^2)^b with b > -1/2.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

// Nodes and weights for \int_{-1}^{1} f(z) (1 - z^2)^lambda dz, lambda > -1/2.
// Nodes are symmetric about 0 and the weights sum to the exact zeroth moment.
struct JacobiRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
JacobiRule gauss_jacobi_symmetric(int n, double lambda);

// Exact even moments \int_{-1}^{1} z^{2m} (1 - z^2)^lambda dz.
double jacobi_even_moment(int m, double lambda);

// Piecewise monotone cubic interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, d_;
};

// Trapezoid rule over a sampled (possibly non-uniform) grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

// Cumulative trapezoid integral; out[0] = 0, out[i] = \int_{x0}^{xi}.
std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                         const std::vector<double>& y);

} // namespace vvlab
