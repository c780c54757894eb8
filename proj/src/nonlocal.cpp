#include "vvlab/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vvlab {

AlignmentKernel AlignmentKernel::constant(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("alignment kernel must be nonnegative");
    AlignmentKernel k;
    k.tag_ = Tag::Constant;
    k.amplitude = c;
    return k;
}

AlignmentKernel AlignmentKernel::gaussian(double amplitude, double width) {
    if (!(amplitude >= 0.0) || !(width > 0.0))
        throw std::invalid_argument("gaussian kernel needs amplitude >= 0, width > 0");
    AlignmentKernel k;
    k.tag_ = Tag::Gaussian;
    k.amplitude = amplitude;
    k.width = width;
    return k;
}

AlignmentKernel AlignmentKernel::bounded_custom(std::vector<double> abscissae,
                                                std::vector<double> values) {
    if (abscissae.size() != values.size() || abscissae.size() < 2)
        throw std::invalid_argument("custom kernel needs >= 2 matching samples");
    for (size_t i = 0; i < abscissae.size(); ++i) {
        if (i > 0 && !(abscissae[i] > abscissae[i - 1]))
            throw std::invalid_argument("custom kernel abscissae must increase");
        if (!(abscissae[i] >= 0.0) || !(values[i] >= 0.0))
            throw std::invalid_argument("custom kernel samples must be nonnegative");
    }
    AlignmentKernel k;
    k.tag_ = Tag::BoundedCustom;
    k.abs_ = std::move(abscissae);
    k.val_ = std::move(values);
    return k;
}

double AlignmentKernel::operator()(double x) const {
    const double a = std::abs(x);
    switch (tag_) {
        case Tag::Off: return 0.0;
        case Tag::Constant: return amplitude;
        case Tag::Gaussian: return amplitude * std::exp(-0.5 * (a / width) * (a / width));
        case Tag::BoundedCustom: {
            if (a <= abs_.front()) return val_.front();
            if (a >= abs_.back()) return 0.0;
            const auto it = std::upper_bound(abs_.begin(), abs_.end(), a);
            const size_t i = size_t(it - abs_.begin()) - 1;
            const double t = (a - abs_[i]) / (abs_[i + 1] - abs_[i]);
            return val_[i] + t * (val_[i + 1] - val_[i]);
        }
    }
    return 0.0;
}

std::vector<double> interaction_force(const std::vector<double>& points,
                                      const std::vector<double>& cum_mass_at_point,
                                      const std::vector<double>& centers,
                                      const std::vector<double>& masses,
                                      double total_mass) {
    for (size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1]))
            throw std::invalid_argument("interaction_force: points must increase");
    double first_moment = 0.0;
    for (size_t i = 0; i < centers.size(); ++i) first_moment += centers[i] * masses[i];
    std::vector<double> f(points.size());
    for (size_t j = 0; j < points.size(); ++j)
        f[j] = total_mass - 2.0 * cum_mass_at_point[j] + points[j] * total_mass - first_moment;
    return f;
}

std::vector<double> interaction_force_direct(const std::vector<double>& points,
                                             const std::vector<double>& centers,
                                             const std::vector<double>& masses,
                                             double total_mass) {
    (void)total_mass;
    std::vector<double> f(points.size(), 0.0);
    for (size_t j = 0; j < points.size(); ++j) {
        double s = 0.0;
        for (size_t k = 0; k < centers.size(); ++k) {
            const double d = points[j] - centers[k];
            const double sgn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
            s += (-sgn + d) * masses[k];
        }
        f[j] = s;
    }
    return f;
}

std::vector<double> interaction_force_at_nodes(const MassGridState& s) {
    std::vector<double> centers(s.n_cells), masses(s.n_cells, s.dxi),
        cum(s.n_cells + 1);
    for (int i = 0; i < s.n_cells; ++i) centers[i] = s.cell_center(i);
    for (int j = 0; j <= s.n_cells; ++j) cum[j] = j * s.dxi;
    return interaction_force(s.node_x, cum, centers, masses, s.total_mass());
}

AlignmentField alignment_velocity_coupling(const std::vector<double>& x,
                                           const std::vector<double>& u,
                                           const std::vector<double>& m,
                                           const AlignmentKernel& kernel,
                                           double cutoff) {
    const size_t n = x.size();
    AlignmentField out;
    out.v.assign(n, 0.0);
    if (!kernel.active()) return out;
    for (size_t j = 0; j < n; ++j) {
        double vj = 0.0;
        for (size_t k = 0; k < n; ++k) {
            const double d = x[j] - x[k];
            if (cutoff > 0.0 && std::abs(d) > cutoff) continue;
            const double w = kernel(d);
            vj += w * (u[k] - u[j]) * m[k];
            if (k > j) out.dissipation_rate += w * (u[k] - u[j]) * (u[k] - u[j]) * m[j] * m[k];
        }
        out.v[j] = vj;
        out.momentum_sum += vj * m[j];
    }
    return out;
}

AlignmentField alignment_velocity_coupling(const MassGridState& s,
                                           const NonlocalConfig& cfg) {
    std::vector<double> m(s.n_cells + 1);
    for (int j = 0; j <= s.n_cells; ++j) m[j] = s.node_mass(j);
    return alignment_velocity_coupling(s.node_x, s.node_u, m, cfg.kernel,
                                       cfg.alignment_cutoff);
}

InteractionEnergy interaction_energy(const std::vector<double>& centers,
                                     const std::vector<double>& masses) {
    const size_t n = centers.size();
    double mass = 0.0, g = 0.0, q = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mass += masses[i];
        g += centers[i] * masses[i];
        q += centers[i] * centers[i] * masses[i];
    }
    // prefix sums need sorted centers; states provide them sorted already
    double prefix_m = 0.0, prefix_g = 0.0, e = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (i > 0 && !(centers[i] >= centers[i - 1]))
            throw std::invalid_argument("interaction_energy: centers must be sorted");
        prefix_m += masses[i];
        prefix_g += centers[i] * masses[i];
        const double abs_sum = centers[i] * (2.0 * prefix_m - mass) + g - 2.0 * prefix_g;
        const double quad_sum = 0.5 * (centers[i] * centers[i] * mass - 2.0 * centers[i] * g + q);
        e += 0.5 * masses[i] * (-abs_sum + quad_sum);
    }
    InteractionEnergy out;
    out.raw = e;
    out.shifted = e + 0.25 * mass * mass;
    return out;
}

InteractionEnergy interaction_energy_direct(const std::vector<double>& centers,
                                            const std::vector<double>& masses) {
    const size_t n = centers.size();
    InteractionEnergy out;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const double w = interaction_potential(centers[i] - centers[j]);
            out.raw += 0.5 * w * masses[i] * masses[j];
            out.shifted += 0.5 * (w + 0.5) * masses[i] * masses[j];
        }
    return out;
}

InteractionEnergy interaction_energy(const MassGridState& s) {
    std::vector<double> centers(s.n_cells), masses(s.n_cells, s.dxi);
    for (int i = 0; i < s.n_cells; ++i) centers[i] = s.cell_center(i);
    return interaction_energy(centers, masses);
}

} // namespace vvlab
