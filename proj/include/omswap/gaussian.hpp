#pragma once

// Phase-space description of the three-pulse protocol: the QND and
// pulse--displace--delay cycle maps, their composition into the full transfer
// matrix with additive noise covariance, Gaussian state propagation, and the
// cooling analytics built on top.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "omswap/detail/simplex.hpp"
#include "omswap/params.hpp"
#include "omswap/symplectic.hpp"

namespace omswap {

struct ProtocolMap {
    Mat4 m = Mat4::Identity();     // transfer matrix on (X_M, P_M, X_L, P_L)
    Mat4 v_ff = Mat4::Zero();      // covariance of the additive noise term
};

struct GaussianState {
    Vec4 mean = Vec4::Zero();
    Mat4 cov = Mat4::Identity();   // Re<X X^T>, vacuum variance 1
};

inline GaussianState joint_state(const Vec2& mech_mean, const Mat2& mech_cov,
                                 const Vec2& light_mean, const Mat2& light_cov) {
    GaussianState s;
    s.mean.head<2>() = mech_mean;
    s.mean.tail<2>() = light_mean;
    s.cov.setZero();
    s.cov.block<2, 2>(0, 0) = mech_cov;
    s.cov.block<2, 2>(2, 2) = light_cov;
    return s;
}

inline Mat2 thermal_cov(double n_mean) { return (2.0 * n_mean + 1.0) * Mat2::Identity(); }

inline GaussianState thermal_vacuum_state(double n_mech) {
    return joint_state(Vec2::Zero(), thermal_cov(n_mech), Vec2::Zero(), Mat2::Identity());
}

// QND interaction including the open-loop displacement that cancels the
// classical momentum kick: P_M += chi X_L, P_L += chi X_M.
inline Mat4 qnd_map(double chi) {
    if (!std::isfinite(chi)) throw std::invalid_argument("chi must be finite");
    Mat4 m = Mat4::Identity();
    m(1, 2) = chi;
    m(3, 0) = chi;
    return m;
}

struct CycleMap {
    Mat4 m = Mat4::Identity();
    Mat4 v_f = Mat4::Zero();
};

// One pulse--displace--delay cycle: QND interaction, quarter-cycle damped
// mechanical evolution, optical displacement (noise rotation) and loss.
//
// Mechanical noise block: the quoted quarter-cycle correlators of the damped
// oscillator under white thermal noise are
//   <dX^2> = <dP^2> = (2 n_B + 1)(1/eta_m - 1 - 2 eps^2),
//   Re<dX dP> = 2 (2 n_B + 1) eps / sigma,
// entering the cycle noise as eta_m * Cov(dX, dP). The cross term is the
// exact integral value; it keeps the noise covariance positive semidefinite,
// which the published factor 4 does not.
// Optical noise: vacuum admixture of amplitude sqrt(1 - eta_l), i.e.
// variance (1 - eta_l) per quadrature, as required by commutator
// preservation and by the eta_l terms of the occupancy expansion.
inline CycleMap cycle_map(double chi, double eta_l, double eta_m, double sigma, double epsilon,
                          double n_bath) {
    check_efficiency(eta_l, "eta_l");
    check_efficiency(eta_m, "eta_m");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in (0,1]");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (!(n_bath >= 0.0)) throw std::invalid_argument("n_bath must be >= 0");
    if (!std::isfinite(chi)) throw std::invalid_argument("chi must be finite");

    const double sm = std::sqrt(eta_m);
    const double sl = std::sqrt(eta_l);
    CycleMap c;
    c.m << epsilon * sm, sm / sigma, sm * chi / sigma, 0.0,
          -sm / sigma, -epsilon * sm, -epsilon * chi * sm, 0.0,
           sl * chi, 0.0, 0.0, sl,
           0.0, 0.0, -sl, 0.0;

    const double heat = 2.0 * n_bath + 1.0;
    const double diag = heat * (1.0 / eta_m - 1.0 - 2.0 * epsilon * epsilon);
    const double cross = 2.0 * heat * epsilon / sigma;
    c.v_f.setZero();
    c.v_f(0, 0) = c.v_f(1, 1) = eta_m * diag;
    c.v_f(0, 1) = c.v_f(1, 0) = eta_m * cross;
    c.v_f(2, 2) = c.v_f(3, 3) = 1.0 - eta_l;
    return c;
}

// Closed-form three-pulse transfer matrix in terms of the pulse strengths.
inline Mat4 protocol_map_closed_form(const std::array<double, 3>& mu, double eta_l, double eta_m,
                                     double sigma, double epsilon) {
    const double m1 = mu[0], m2 = mu[1], m3 = mu[2];
    if (m2 == 0.0) throw std::invalid_argument("mu[1] must be nonzero");
    const double m23 = (eta_l * m3 + m1 * (eta_m - m3)) / m2;
    const double m31 = (eta_m * m3 + m1 * (eta_l - m3)) / m2;
    Mat4 m;
    m << m1 - eta_m, 0.0, 0.0, -m2,
         epsilon * sigma * (m3 - m1), m3 - eta_m, m23, m2 * epsilon * sigma,
         -m2 * epsilon * sigma, -m2, m1 - eta_l, 0.0,
         m31, 0.0, 0.0, m3 - eta_l;
    return m;
}

// Full protocol: M = M_QND^(3) M^(2) M^(1),
// V_FF = M_QND^(3) (M^(2) V_F^(1) M^(2)^T + V_F^(2)) M_QND^(3)^T.
// The composed matrix is checked against the closed form on every call.
inline ProtocolMap protocol_map(const PulsePlan& plan, const DerivedQuantities& d, double eta_l,
                                double n_bath) {
    const CycleMap c1 = cycle_map(plan.chi[0], eta_l, d.eta_m, d.sigma, d.epsilon, n_bath);
    const CycleMap c2 = cycle_map(plan.chi[1], eta_l, d.eta_m, d.sigma, d.epsilon, n_bath);
    const Mat4 q3 = qnd_map(plan.chi[2]);

    ProtocolMap pm;
    pm.m = q3 * c2.m * c1.m;
    pm.v_ff = q3 * (c2.m * c1.v_f * c2.m.transpose() + c2.v_f) * q3.transpose();

    const Mat4 closed = protocol_map_closed_form(plan.mu, eta_l, d.eta_m, d.sigma, d.epsilon);
    const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
    if ((pm.m - closed).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::runtime_error("protocol map composition disagrees with closed form");
    return pm;
}

// Mean phonon number, including the contribution of nonzero means.
inline double mech_occupancy(const GaussianState& s) {
    const double xx = s.cov(0, 0) + s.mean(0) * s.mean(0);
    const double pp = s.cov(1, 1) + s.mean(1) * s.mean(1);
    return 0.25 * (xx + pp - 2.0);
}

// V' = M V M^T + V_FF. Physicality of the output is verified, not clipped.
inline GaussianState propagate(const GaussianState& s, const ProtocolMap& pm,
                               double physicality_tol = 1e-9) {
    GaussianState out;
    out.mean = pm.m * s.mean;
    out.cov = pm.m * s.cov * pm.m.transpose() + pm.v_ff;
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    const double margin = physicality_margin(out.cov);
    const double scale = std::max(1.0, out.cov.cwiseAbs().maxCoeff());
    if (margin < -physicality_tol * scale)
        throw std::runtime_error("propagate produced an unphysical covariance (min eig of V+iOmega = " +
                                 std::to_string(margin) + "); check v_ff");
    return out;
}

// Small-epsilon expansion of the output occupancy (4<n'> expression),
// evaluated exactly as displayed. Valid for eps << 1; the full covariance
// pipeline is the ground truth.
inline double analytic_occupancy(const std::array<double, 3>& mu, double epsilon, double eta_l,
                                 double n_bath) {
    check_efficiency(eta_l, "eta_l");
    const double m1 = mu[0], m2 = mu[1], m3 = mu[2];
    const double pe = M_PI * epsilon;
    const double heat = 2.0 * n_bath + 1.0;
    double four_n = heat * ((m1 - 1.0) * (m1 + 2.0 * pe - 1.0) +
                            (m3 - 1.0) * (m3 + 2.0 * pe - 1.0) +
                            pe * (4.0 - m3 * (2.0 - m3)));
    four_n += (1.0 / (m2 * m2)) * (m3 * m3 - 2.0 * eta_l * m1 * m3 * (m3 + pe - 1.0) +
                                   m1 * m1 * (m3 - 1.0) * (m3 + 2.0 * pe - 1.0));
    four_n += m2 * m2 / eta_l - 2.0;
    return 0.25 * four_n;
}

// Minimum occupancy at mu = (1,1,1), to first order in epsilon.
inline double min_occupancy_estimate(double epsilon, double eta_l, double n_bath) {
    return 0.25 * M_PI * epsilon * (3.0 * (2.0 * n_bath + 1.0) - 2.0 * eta_l) +
           0.25 * (1.0 / eta_l - 1.0);
}

struct OptimalPlan {
    std::array<double, 3> mu_analytic{};   // (eta_m, (1+eta_m)/2 * eta_l^(1/4), eta_m)
    double n_min_analytic = 0.0;           // minimum-occupancy estimate
    std::array<double, 3> mu_numeric{};    // simplex minimizer of analytic_occupancy
    double n_min_numeric = 0.0;
    bool converged = false;
    int iterations = 0;
    double simplex_diameter = 0.0;
};

inline OptimalPlan optimal_plan(double epsilon, double eta_l, double eta_m, double n_bath) {
    check_efficiency(eta_l, "eta_l");
    check_efficiency(eta_m, "eta_m");
    OptimalPlan plan;
    plan.mu_analytic = {eta_m, 0.5 * (1.0 + eta_m) * std::pow(eta_l, 0.25), eta_m};
    plan.n_min_analytic = min_occupancy_estimate(epsilon, eta_l, n_bath);

    auto objective = [&](const std::array<double, 3>& mu) {
        return analytic_occupancy(mu, epsilon, eta_l, n_bath);
    };
    const auto r = detail::nelder_mead<3>(objective, {1.0, 1.0, 1.0}, {0.5, 0.5, 0.5},
                                          {1.5, 1.5, 1.5}, 1e-6);
    plan.mu_numeric = r.x;
    plan.n_min_numeric = r.fmin;
    plan.converged = r.converged;
    plan.iterations = r.iterations;
    plan.simplex_diameter = r.diameter;
    if (!r.converged)
        throw std::runtime_error("pulse-strength minimizer did not converge: " +
                                 std::to_string(r.iterations) + " iterations, simplex diameter " +
                                 std::to_string(r.diameter));
    return plan;
}

// Instantaneous cooperativity time-averaged over the three-pulse sequence.
inline double cooperativity(const std::array<double, 3>& mu, double epsilon, double sigma,
                            double eta_l, double eta_m) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("cooperativity is undefined for an undamped oscillator");
    check_efficiency(eta_l, "eta_l");
    check_efficiency(eta_m, "eta_m");
    const double m2sq = mu[1] * mu[1];
    if (m2sq == 0.0) throw std::invalid_argument("mu[1] must be nonzero");
    return (1.0 / (8.0 * M_PI * epsilon)) *
           ((mu[0] * mu[0] + mu[2] * mu[2]) / m2sq + sigma * sigma * m2sq / (eta_l * eta_m));
}

struct CoolingCriteria {
    bool thermal_occupancy_ok = false;    // n_B < 2/(3 pi eps), i.e. n_B < 4 w_M / 3 pi Gamma
    bool cooperativity_ok = false;        // n_B < 16 C / (3 (2 + 1/eta_l))
    bool optical_efficiency_ok = false;   // eta_l > 1/5
    double thermal_bound = 0.0;
    double cooperativity_bound = 0.0;
};

inline CoolingCriteria cooling_criteria(double epsilon, double eta_l, double n_bath, double c) {
    CoolingCriteria crit;
    crit.thermal_bound = (epsilon > 0.0) ? 2.0 / (3.0 * M_PI * epsilon)
                                         : std::numeric_limits<double>::infinity();
    crit.cooperativity_bound = 16.0 * c / (3.0 * (2.0 + 1.0 / eta_l));
    crit.thermal_occupancy_ok = n_bath < crit.thermal_bound;
    crit.cooperativity_ok = n_bath < crit.cooperativity_bound;
    crit.optical_efficiency_ok = eta_l > 0.2;
    return crit;
}

struct ToleranceWidth {
    double width_numeric = 0.0;   // mu-width of the cooling dip at 2x minimum
    double width_analytic = 0.0;  // sqrt(6 pi eps)
    double dn_over_n = 0.0;       // tolerable fractional photon-number variation
};

// Width of the occupancy dip along mu = (mu, mu, mu), found by locating the
// two crossings of twice the dip minimum.
inline ToleranceWidth tolerance_width(double epsilon, double eta_l, double n_bath) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("tolerance width requires epsilon > 0");
    ToleranceWidth w;
    w.width_analytic = std::sqrt(6.0 * M_PI * epsilon);
    w.dn_over_n = 2.0 * w.width_analytic;

    auto line = [&](double mu) { return analytic_occupancy({mu, mu, mu}, epsilon, eta_l, n_bath); };
    const double mu_min = detail::golden_min(line, 0.5, 1.5, 1e-12);
    const double target = 2.0 * line(mu_min);
    auto crossing = [&](double mu) { return line(mu) - target; };
    const double lo = detail::bisect(crossing, mu_min - 0.5, mu_min, 1e-10);
    const double hi = detail::bisect(crossing, mu_min, mu_min + 0.5, 1e-10);
    w.width_numeric = hi - lo;
    return w;
}

struct CoolingCell {
    double gamma_over_omega = 0.0;
    double n_bath = 0.0;
    double n_final = 0.0;      // pipeline occupancy at mu = (1,1,1)
    double eq15_bound = 0.0;   // thermal-occupancy bound 2/(3 pi eps)
};

struct CoolingSurfaceSpec {
    double gamma_over_omega_lo = 1e-8;
    double gamma_over_omega_hi = 1e-2;
    double n_bath_lo = 1.0;
    double n_bath_hi = 1e6;
    int n_gamma = 64;
    int n_bath_pts = 64;
    double eta_l = 1.0;
};

inline std::vector<CoolingCell> cooling_surface(const CoolingSurfaceSpec& spec) {
    if (spec.n_gamma < 1 || spec.n_bath_pts < 1)
        throw std::invalid_argument("cooling surface needs at least one cell per axis");
    if (!(spec.gamma_over_omega_lo > 0.0 && spec.gamma_over_omega_hi >= spec.gamma_over_omega_lo))
        throw std::invalid_argument("gamma range must be positive and ordered");
    if (!(spec.n_bath_lo > 0.0 && spec.n_bath_hi >= spec.n_bath_lo))
        throw std::invalid_argument("n_bath range must be positive and ordered");

    auto log_grid = [](double lo, double hi, int n, int i) {
        if (n == 1) return lo;
        const double t = static_cast<double>(i) / (n - 1);
        return lo * std::pow(hi / lo, t);
    };

    std::vector<CoolingCell> cells;
    cells.reserve(static_cast<size_t>(spec.n_gamma) * spec.n_bath_pts);
    for (int ig = 0; ig < spec.n_gamma; ++ig) {
        const double g = log_grid(spec.gamma_over_omega_lo, spec.gamma_over_omega_hi, spec.n_gamma, ig);
        DerivedQuantities d;
        d.sigma = std::sqrt(1.0 - 0.25 * g * g);
        d.epsilon = 0.5 * g / d.sigma;
        d.eta_m = std::exp(-M_PI * d.epsilon);
        const PulsePlan plan = chi_for_mu({1.0, 1.0, 1.0}, spec.eta_l, d.eta_m, d.sigma);
        for (int ib = 0; ib < spec.n_bath_pts; ++ib) {
            CoolingCell cell;
            cell.gamma_over_omega = g;
            cell.n_bath = log_grid(spec.n_bath_lo, spec.n_bath_hi, spec.n_bath_pts, ib);
            const ProtocolMap pm = protocol_map(plan, d, spec.eta_l, cell.n_bath);
            cell.n_final = mech_occupancy(propagate(thermal_vacuum_state(cell.n_bath), pm));
            cell.eq15_bound = 2.0 / (3.0 * M_PI * d.epsilon);
            cells.push_back(cell);
        }
    }
    return cells;
}

// Recovers the squeezing parameter xi = -ln(mu2) of a lossless
// mu = (1, mu2, 1) map, verifying the squeeze-then-swap factorization.
inline double squeeze_decompose(const ProtocolMap& pm, double tol = 1e-10) {
    const double mu2 = -pm.m(0, 3);
    if (!(mu2 > 0.0))
        throw std::invalid_argument("map is not a squeezed swap: -m(0,3) must be positive");
    Mat4 expected = Mat4::Zero();
    expected(0, 3) = -mu2;
    expected(1, 2) = 1.0 / mu2;
    expected(2, 1) = -mu2;
    expected(3, 0) = 1.0 / mu2;
    const double defect = (pm.m - expected).cwiseAbs().maxCoeff();
    const double noise = pm.v_ff.cwiseAbs().maxCoeff();
    if (defect > tol * std::max(1.0, mu2) || noise > tol)
        throw std::invalid_argument("map does not factor into squeeze * swap within tolerance");
    return -std::log(mu2);
}

struct CoolingReport {
    double n_final = 0.0;           // pipeline occupancy for the supplied plan
    double n_min_analytic = 0.0;    // minimum-occupancy estimate
    CoolingCriteria criteria;
    double cooperativity_value = 0.0;
    std::array<double, 3> mu_optimal{};
};

inline CoolingReport cooling_report(const PulsePlan& plan, const DerivedQuantities& d,
                                    double eta_l, double n_bath) {
    CoolingReport r;
    const ProtocolMap pm = protocol_map(plan, d, eta_l, n_bath);
    r.n_final = mech_occupancy(propagate(thermal_vacuum_state(n_bath), pm));
    r.n_min_analytic = min_occupancy_estimate(d.epsilon, eta_l, n_bath);
    r.cooperativity_value = cooperativity(plan.mu, d.epsilon, d.sigma, eta_l, d.eta_m);
    r.criteria = cooling_criteria(d.epsilon, eta_l, n_bath, r.cooperativity_value);
    r.mu_optimal = {d.eta_m, 0.5 * (1.0 + d.eta_m) * std::pow(eta_l, 0.25), d.eta_m};
    return r;
}

}  // namespace omswap
