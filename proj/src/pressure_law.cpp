#include "vvlab/pressure_law.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vvlab {

namespace {

// C^4 smoothstep: s(0)=0, s(1)=1, derivatives 1..4 vanish at both ends.
double smoothstep4(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return ((((70.0 * t - 315.0) * t + 540.0) * t - 420.0) * t + 126.0) * t * t * t * t * t;
}
double smoothstep4_d(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return ((((630.0 * t - 2520.0) * t + 3780.0) * t - 2520.0) * t + 630.0) * t * t * t * t;
}
std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(a + (b - a) * i / double(n - 1));
    return g;
}

} // namespace

PressureLaw PressureLaw::polytropic(double gamma, double kappa) {
    if (!(gamma > 1.0))
        throw std::invalid_argument("PressureLaw: gamma must exceed 1");
    if (kappa == -1.0) kappa = default_kappa(gamma);
    if (!(kappa > 0.0))
        throw std::invalid_argument("PressureLaw: kappa must be positive");
    PressureLaw law;
    law.kind_ = Kind::Polytropic;
    law.gamma1_ = law.gamma2_ = gamma;
    law.kappa1_ = law.kappa2_ = kappa;
    law.finalize();
    return law;
}

// Between the regimes the local exponent d log P / d log rho is slid from
// gamma1 to gamma2 through a C^4 smoothstep in log rho, and kappa2 follows
// from continuity. Interpolating the pressure values directly (arithmetically
// or geometrically) cannot keep 2P' + rho P'' positive once the exponents
// separate: descending onto the shallower branch costs a slope dip
// proportional to gamma1 - gamma2 at every window width.
PressureLaw PressureLaw::general_blend(double gamma1, double gamma2, double kappa1,
                                       double rho_star_low, double rho_star_high) {
    if (!(gamma1 > 1.0))
        throw std::invalid_argument("PressureLaw: gamma1 must exceed 1");
    if (!(gamma2 > 1.0 && gamma2 <= gamma1))
        throw std::invalid_argument("PressureLaw: need 1 < gamma2 <= gamma1");
    if (kappa1 == -1.0) kappa1 = default_kappa(gamma1);
    if (!(kappa1 > 0.0))
        throw std::invalid_argument("PressureLaw: kappa1 must be positive");
    if (!(rho_star_low > 0.0 && rho_star_high > rho_star_low))
        throw std::invalid_argument("PressureLaw: need 0 < rho_star_low < rho_star_high");
    PressureLaw law;
    law.kind_ = Kind::GeneralBlend;
    law.gamma1_ = gamma1;
    law.gamma2_ = gamma2;
    law.kappa1_ = kappa1;
    law.rho_lo_ = rho_star_low;
    law.rho_hi_ = rho_star_high;
    // continuity across the window fixes the high-density coefficient
    law.kappa2_ = kappa1 * std::pow(rho_star_low, gamma1 - gamma2) *
                  std::pow(rho_star_high / rho_star_low, 0.5 * (gamma1 - gamma2));
    law.finalize();
    return law;
}

void PressureLaw::finalize() {
    theta1_ = 0.5 * (gamma1_ - 1.0);
    theta2_ = 0.5 * (gamma2_ - 1.0);

    if (kind_ == Kind::GeneralBlend) {
        // cumulative e and k across the blend region, cached on a log grid
        const int n_cache = 2048;
        auto grid = log_grid(rho_lo_, rho_hi_, n_cache);
        const auto gl = gauss_jacobi_symmetric(8, 0.0);
        std::vector<double> e_cum(n_cache, 0.0), k_cum(n_cache, 0.0);
        for (int i = 0; i + 1 < n_cache; ++i) {
            const double a = grid[i], b = grid[i + 1];
            double de = 0.0, dk = 0.0;
            for (size_t q = 0; q < gl.nodes.size(); ++q) {
                const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
                const double w = 0.5 * (b - a) * gl.weights[q];
                de += w * pressure(s) / (s * s);
                dk += w * std::sqrt(dpressure(s)) / s;
            }
            e_cum[i + 1] = e_cum[i] + de;
            k_cum[i + 1] = k_cum[i] + dk;
        }
        e_at_hi_ = e_cum.back();
        k_at_hi_ = k_cum.back();
        e_mid_ = MonotoneCubic(grid, e_cum);
        k_mid_ = MonotoneCubic(grid, k_cum);
    }

    // hyperbolicity and genuine nonlinearity, checked on a log-spaced grid
    for (double rho : log_grid(1e-6, 1e3, 240)) {
        const double dp = dpressure(rho);
        const double gn = 2.0 * dp + rho * d2pressure(rho);
        if (!(dp > 0.0) || !(gn > 0.0)) {
            std::ostringstream os;
            os << "PressureLaw: hyperbolicity/genuine-nonlinearity fails at rho=" << rho
               << " (P'=" << dp << ", 2P'+rho P''=" << gn << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

double PressureLaw::kernel_exponent() const {
    if (kind_ != Kind::Polytropic)
        throw std::logic_error("kernel_exponent is defined for the polytropic law only");
    return (3.0 - gamma1_) / (2.0 * (gamma1_ - 1.0));
}

double PressureLaw::gamma_at(double rho) const {
    return rho <= rho_lo_ ? gamma1_ : gamma2_;
}

// local exponent gamma2 + (gamma1 - gamma2)(1 - S(t)) in t = log(rho/rho*)/Y
double PressureLaw::blend_local_gamma(double t) const {
    return gamma2_ + (gamma1_ - gamma2_) * (1.0 - smoothstep4(t));
}

// primitive of the smoothstep, int_0^t S
static double smoothstep4_int(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 0.5 + (t - 1.0);
    const double t6 = t * t * t * t * t * t;
    return t6 * (21.0 + t * (-60.0 + t * (67.5 + t * (-35.0 + t * 7.0))));
}

double PressureLaw::pressure(double rho) const {
    if (rho < 0.0) throw std::domain_error("pressure: negative density");
    if (rho == 0.0) return 0.0;
    if (kind_ == Kind::Polytropic || rho <= rho_lo_)
        return kappa1_ * std::pow(rho, gamma1_);
    if (rho >= rho_hi_) return kappa2_ * std::pow(rho, gamma2_);
    const double y = std::log(rho_hi_ / rho_lo_);
    const double t = std::log(rho / rho_lo_) / y;
    const double logp = std::log(kappa1_) + gamma1_ * std::log(rho_lo_) +
                        y * (gamma1_ * t - (gamma1_ - gamma2_) * smoothstep4_int(t));
    return std::exp(logp);
}

double PressureLaw::dpressure(double rho) const {
    if (rho < 0.0) throw std::domain_error("dpressure: negative density");
    if (rho == 0.0) return 0.0;
    if (kind_ == Kind::Polytropic || rho <= rho_lo_)
        return kappa1_ * gamma1_ * std::pow(rho, gamma1_ - 1.0);
    if (rho >= rho_hi_) return kappa2_ * gamma2_ * std::pow(rho, gamma2_ - 1.0);
    const double y = std::log(rho_hi_ / rho_lo_);
    const double t = std::log(rho / rho_lo_) / y;
    return pressure(rho) * blend_local_gamma(t) / rho;
}

double PressureLaw::d2pressure(double rho) const {
    if (rho < 0.0) throw std::domain_error("d2pressure: negative density");
    if (rho == 0.0) return 0.0;
    if (kind_ == Kind::Polytropic || rho <= rho_lo_)
        return kappa1_ * gamma1_ * (gamma1_ - 1.0) * std::pow(rho, gamma1_ - 2.0);
    if (rho >= rho_hi_)
        return kappa2_ * gamma2_ * (gamma2_ - 1.0) * std::pow(rho, gamma2_ - 2.0);
    const double y = std::log(rho_hi_ / rho_lo_);
    const double t = std::log(rho / rho_lo_) / y;
    const double g = blend_local_gamma(t);
    const double dg_dy = -(gamma1_ - gamma2_) * smoothstep4_d(t) / y;
    return pressure(rho) * (g * g - g + dg_dy) / (rho * rho);
}

double PressureLaw::internal_energy(double rho) const {
    if (rho < 0.0) throw std::domain_error("internal_energy: negative density");
    if (rho == 0.0) return 0.0;
    if (kind_ == Kind::Polytropic || rho <= rho_lo_)
        return kappa1_ / (gamma1_ - 1.0) * std::pow(rho, gamma1_ - 1.0);
    const double e_lo = kappa1_ / (gamma1_ - 1.0) * std::pow(rho_lo_, gamma1_ - 1.0);
    if (rho < rho_hi_) return e_lo + e_mid_(rho);
    return e_lo + e_at_hi_ +
           kappa2_ / (gamma2_ - 1.0) *
               (std::pow(rho, gamma2_ - 1.0) - std::pow(rho_hi_, gamma2_ - 1.0));
}

double PressureLaw::sound_integral(double rho) const {
    if (rho < 0.0) throw std::domain_error("sound_integral: negative density");
    if (rho == 0.0) return 0.0;
    if (kind_ == Kind::Polytropic || rho <= rho_lo_)
        return std::sqrt(kappa1_ * gamma1_) / theta1_ * std::pow(rho, theta1_);
    const double k_lo = std::sqrt(kappa1_ * gamma1_) / theta1_ * std::pow(rho_lo_, theta1_);
    if (rho < rho_hi_) return k_lo + k_mid_(rho);
    return k_lo + k_at_hi_ +
           std::sqrt(kappa2_ * gamma2_) / theta2_ *
               (std::pow(rho, theta2_) - std::pow(rho_hi_, theta2_));
}

double PressureLaw::sound_integral_derivative(double rho) const {
    if (!(rho > 0.0)) return 0.0;
    return std::sqrt(dpressure(rho)) / rho;
}

std::string PressureLaw::HypothesisReport::summary() const {
    std::ostringstream os;
    os << (pass ? "pass" : "FAIL")
       << "  low-regime P'/(k1 g1 rho^{g1-1}) in [" << low.min_ratio << ", " << low.max_ratio
       << "] bracket=" << (low.bracket_ok ? "ok" : "violated")
       << "  high-regime ratio in [" << high.min_ratio << ", " << high.max_ratio
       << "] bracket=" << (high.bracket_ok ? "ok" : "violated")
       << "  min P'=" << min_dpressure
       << "  min 2P'+rho P''=" << min_genuine_nonlinearity;
    if (!note.empty()) os << "  note: " << note;
    return os.str();
}

PressureLaw::HypothesisReport
PressureLaw::validate_hypotheses(const std::vector<double>& grid) const {
    HypothesisReport rep;
    rep.low.min_ratio = rep.high.min_ratio = 1e300;
    rep.low.max_ratio = rep.high.max_ratio = -1e300;
    rep.low.bracket_ok = rep.high.bracket_ok = true;
    rep.min_dpressure = 1e300;
    rep.min_genuine_nonlinearity = 1e300;

    bool saw_low = false, saw_high = false;
    for (double rho : grid) {
        if (!(rho > 0.0)) continue;
        const double p = pressure(rho);
        const double dp = dpressure(rho);
        const double gn = 2.0 * dp + rho * d2pressure(rho);
        rep.min_dpressure = std::min(rep.min_dpressure, dp);
        rep.min_genuine_nonlinearity = std::min(rep.min_genuine_nonlinearity, gn);
        if (rho <= rho_lo_) {
            saw_low = true;
            const double ref = kappa1_ * gamma1_ * std::pow(rho, gamma1_ - 1.0);
            const double r = dp / ref;
            rep.low.min_ratio = std::min(rep.low.min_ratio, r);
            rep.low.max_ratio = std::max(rep.low.max_ratio, r);
            const double p_ref = kappa1_ * std::pow(rho, gamma1_);
            if (!(p >= 0.5 * p_ref && p <= 2.0 * p_ref)) rep.low.bracket_ok = false;
        } else if (rho >= rho_hi_) {
            saw_high = true;
            const double ref = kappa2_ * gamma2_ * std::pow(rho, gamma2_ - 1.0);
            const double r = dp / ref;
            rep.high.min_ratio = std::min(rep.high.min_ratio, r);
            rep.high.max_ratio = std::max(rep.high.max_ratio, r);
            const double p_ref = kappa2_ * std::pow(rho, gamma2_);
            if (!(p >= 0.5 * p_ref && p <= 2.0 * p_ref)) rep.high.bracket_ok = false;
        }
    }
    rep.pass = saw_low && saw_high && rep.low.bracket_ok && rep.high.bracket_ok &&
               rep.min_dpressure > 0.0 && rep.min_genuine_nonlinearity > 0.0;
    if (kind_ == Kind::GeneralBlend)
        rep.note = "order-4 remainder decay constants of the blend are not evaluated";
    return rep;
}

} // namespace vvlab
