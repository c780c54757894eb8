#pragma once

#include <vector>

#include "vvlab/grid.hpp"

namespace vvlab {

// Interaction potential W(x) = -|x| + x^2/2. W + 1/2 = (|x|-1)^2/2 >= 0.
inline double interaction_potential(double x) {
    double a = x < 0 ? -x : x;
    return -a + 0.5 * x * x;
}

/// Even, bounded, nonnegative communication weight for the alignment force.
class AlignmentKernel {
public:
    enum class Tag { Off, Constant, Gaussian, BoundedCustom };

    static AlignmentKernel off() { return AlignmentKernel(); }
    static AlignmentKernel constant(double c);
    static AlignmentKernel gaussian(double amplitude, double width);
    // table of (|x|, value); evenness comes from sampling |x|; zero past the
    // last abscissa
    static AlignmentKernel bounded_custom(std::vector<double> abscissae,
                                          std::vector<double> values);

    Tag tag() const { return tag_; }
    bool active() const { return tag_ != Tag::Off; }
    double operator()(double x) const;

    double amplitude = 0.0;
    double width = 1.0;

private:
    AlignmentKernel() = default;
    Tag tag_ = Tag::Off;
    std::vector<double> abs_, val_;
};

enum class InteractionTag { Off, NewtonianPlusQuadratic };

struct NonlocalConfig {
    double lambda = 0.0;  // damping for lambda <= 0
    AlignmentKernel kernel = AlignmentKernel::off();
    InteractionTag interaction = InteractionTag::Off;
    double alignment_cutoff = 0.0;  // opt-in pair cutoff radius; 0 = exact
};

// d/dx (W * rho) at the given points, for the measure sum_i masses[i] at
// centers[i]. Prefix-sum evaluation, exact for the point-mass measure;
// cum_mass_at_point[j] must be the mass strictly below points[j].
std::vector<double> interaction_force(const std::vector<double>& points,
                                      const std::vector<double>& cum_mass_at_point,
                                      const std::vector<double>& centers,
                                      const std::vector<double>& masses,
                                      double total_mass);

// O(N^2) reference evaluation of the same quantity.
std::vector<double> interaction_force_direct(const std::vector<double>& points,
                                             const std::vector<double>& centers,
                                             const std::vector<double>& masses,
                                             double total_mass);

// Convenience: force at the velocity nodes of a state (interaction on).
std::vector<double> interaction_force_at_nodes(const MassGridState& s);

struct AlignmentField {
    std::vector<double> v;      // V at each sample
    double momentum_sum = 0.0;  // sum_j V_j m_j (zero up to rounding)
    double dissipation_rate = 0.0;  // 1/2 sum_jk w_jk |u_j-u_k|^2 m_j m_k
};

// V_j = sum_k w(x_j - x_k) (u_k - u_j) m_k over one common sample set, so the
// double sum is antisymmetric and momentum is conserved exactly.
AlignmentField alignment_velocity_coupling(const std::vector<double>& x,
                                           const std::vector<double>& u,
                                           const std::vector<double>& m,
                                           const AlignmentKernel& kernel,
                                           double cutoff = 0.0);

// State-level wrapper: samples at the velocity nodes with node masses.
AlignmentField alignment_velocity_coupling(const MassGridState& s,
                                           const NonlocalConfig& cfg);

struct InteractionEnergy {
    double raw = 0.0;      // 1/2 sum_ij W(c_i - c_j) m_i m_j
    double shifted = 0.0;  // same with W + 1/2 (nonnegative)
};

InteractionEnergy interaction_energy(const std::vector<double>& centers,
                                     const std::vector<double>& masses);
InteractionEnergy interaction_energy_direct(const std::vector<double>& centers,
                                            const std::vector<double>& masses);
InteractionEnergy interaction_energy(const MassGridState& s);

} // namespace vvlab
