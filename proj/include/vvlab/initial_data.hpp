#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vvlab/grid.hpp"
#include "vvlab/pressure_law.hpp"

namespace vvlab {

/// Scalar profile on the line: closed form or sampled with linear
/// interpolation (zero outside the sample range).
class Profile {
public:
    Profile() = default;
    static Profile from_function(std::function<double(double)> f);
    static Profile from_samples(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

private:
    std::function<double(double)> fn_;
    std::vector<double> x_, y_;
};

/// Raw Cauchy data (rho0, m0) with finite mass, second moment, and energy.
struct RawInitialData {
    Profile rho0;
    Profile m0;
    double total_mass = 0.0;     // quadrature of rho0
    double second_moment = 0.0;  // quadrature of x^2 rho0
    double support_radius = 4.0; // nominal extent of the interesting region
};

// Closed-form presets. velocity_amplitude scales an odd tanh(x/sigma) field.
RawInitialData raw_gaussian_bump(double mass, double sigma,
                                 double velocity_amplitude = 0.0);
RawInitialData raw_double_bump(double mass, double sigma, double separation,
                               double velocity_amplitude = 0.0);
RawInitialData raw_plateau(double mass, double halfwidth,
                           double velocity_amplitude = 0.0);
RawInitialData raw_from_samples(std::vector<double> x, std::vector<double> rho,
                                std::vector<double> m);

struct MollifyOptions {
    int core_points = 4096;     // samples across the core region
    int tail_points = 256;      // geometric samples per side out to b
    int mollifier_points = 128; // quadrature points across supp J (>= 64)
};

struct SampledProfile {
    std::vector<double> x;
    std::vector<double> y;
};

/// Boundary-compatible approximate data on [-b, b].
struct ApproxInitialData {
    double epsilon = 0.0;
    double alpha = 1.0;
    double beta = 2.0;        // 2/(2 alpha - 1)
    double p_exponent = 0.0;  // b = epsilon^{-p}; 0 if b was given directly
    double halfwidth = 0.0;   // b
    std::vector<double> x;    // fine sample grid, x.front() = -b, x.back() = b
    std::vector<double> rho;  // rho_0^eps
    std::vector<double> u;    // u_0^eps

    double E0 = 0.0;  // 1/2 rho u^2 + rho e(rho) + 1/2 rho W*rho, integrated
    double E1 = 0.0;  // eps^2 int rho^{2a-3} |rho_x|^2
    double total_mass = 0.0;
    double second_moment = 0.0;
    double interaction_energy = 0.0;  // int rho W*rho
    double boundary_rho = 0.0;        // rho(+-b)
    double boundary_u_left = 0.0, boundary_u_right = 0.0;
    double stress_residual_left = 0.0, stress_residual_right = 0.0;
};

// The mollified, floored density (A-construction step 1): strictly positive,
// equals (eps e^{-x^2})^beta at |x| = b.
SampledProfile mollify_density(const RawInitialData& raw, double epsilon,
                               double alpha, double b,
                               const MollifyOptions& opt = {});

// Pointwise rescale so the [-b, b] integral equals target_mass exactly.
void normalize_mass(SampledProfile& profile, double target_mass);

// Mollified velocity plus the boundary collars that enforce u(+-b) = 0 and
// zero total stress at +-b. mu(rho) = rho^alpha.
std::vector<double> build_velocity(const RawInitialData& raw,
                                   const SampledProfile& rho_eps, double epsilon,
                                   double alpha, double b, const PressureLaw& law,
                                   const MollifyOptions& opt = {});

// E0 and E1 of already-built data (fills the report fields of `data`).
void initial_functionals(ApproxInitialData& data, const PressureLaw& law);

// Full pipeline. If b_override > 0 it is used instead of epsilon^{-p}.
ApproxInitialData build_approx_initial_data(const RawInitialData& raw,
                                            double epsilon, double alpha,
                                            double p_exponent,
                                            const PressureLaw& law,
                                            const MollifyOptions& opt = {},
                                            double b_override = 0.0);

// Equal-mass partition of the fine profile into an N-cell solver state.
MassGridState make_initial_state(const ApproxInitialData& data, int n_cells);

// W * rho of a sampled profile, trapezoid-exact prefix evaluation.
std::vector<double> potential_of_profile(const std::vector<double>& x,
                                         const std::vector<double>& rho);

} // namespace vvlab
