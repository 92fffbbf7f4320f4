#pragma once

// Raw experimental parameters and the derived protocol-level quantities
// (sigma, epsilon, eta_m, n_bath) plus the chi <-> mu pulse-strength maps.
// All angular frequencies are stored in rad/s; configuration files carry
// Hz values with explicit _hz suffixes (see config.hpp).

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "omswap/constants.hpp"

namespace omswap {

struct PhysicalParams {
    double omega_m = 0.0;      // mechanical angular frequency, rad/s
    double gamma = 0.0;        // mechanical damping rate, rad/s
    double kappa = 0.0;        // optical linewidth, rad/s
    double g0 = 0.0;           // zero-point optomechanical coupling, rad/s
    double temperature = 0.0;  // bath temperature, K
    double eta_l = 1.0;        // optical efficiency per cycle, (0,1]

    // mean photon number per pulse, optional alternative to pulse strengths
    std::optional<std::array<double, 3>> photon_numbers;

    void validate() const {
        if (!(omega_m > 0.0)) throw std::invalid_argument("omega_m must be > 0");
        if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
        if (!(g0 >= 0.0)) throw std::invalid_argument("g0 must be >= 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
        if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
        if (!(eta_l > 0.0 && eta_l <= 1.0)) throw std::invalid_argument("eta_l must be in (0,1]");
        if (!(gamma < 2.0 * omega_m))
            throw std::invalid_argument("oscillator must be underdamped (gamma < 2*omega_m)");
        if (photon_numbers) {
            for (double n : *photon_numbers)
                if (!(n >= 0.0) || !std::isfinite(n))
                    throw std::invalid_argument("photon numbers must be finite and >= 0");
        }
    }
};

struct DerivedQuantities {
    double sigma = 1.0;         // frequency-reduction factor sqrt(1 - (gamma/2w)^2)
    double epsilon = 0.0;       // gamma / (2 sigma omega_m)
    double eta_m = 1.0;         // exp(-pi epsilon), quarter-cycle mechanical efficiency
    double n_bath = 0.0;        // Bose-Einstein occupancy of the bath
    std::optional<double> q_m;  // omega_m / gamma; absent for gamma = 0
};

// Equilibrium bath occupancy, exact Bose-Einstein form. T = 0 gives 0.
inline double bath_occupancy(double omega_m, double temperature) {
    if (!(omega_m > 0.0)) throw std::invalid_argument("omega_m must be > 0");
    if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega_m / (constants::k_boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

inline DerivedQuantities derive_quantities(const PhysicalParams& p) {
    p.validate();
    DerivedQuantities d;
    const double half_ratio = p.gamma / (2.0 * p.omega_m);
    d.sigma = std::sqrt(1.0 - half_ratio * half_ratio);
    d.epsilon = p.gamma / (2.0 * d.sigma * p.omega_m);
    d.eta_m = std::exp(-M_PI * d.epsilon);
    d.n_bath = bath_occupancy(p.omega_m, p.temperature);
    if (p.gamma > 0.0) d.q_m = p.omega_m / p.gamma;
    return d;
}

struct PulsePlan {
    std::array<double, 3> chi{};  // interaction strengths, <= 0 by convention
    std::array<double, 3> mu{};   // decoherence-weighted pulse strengths
};

inline void check_efficiency(double eta, const char* name) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument(std::string(name) + " must be in (0,1]");
}

// mu^(2) = -sqrt(eta_l eta_m) chi^(2) / sigma, mu^(1,3) = -chi^(1,3) mu^(2)
inline PulsePlan pulse_strengths(const std::array<double, 3>& chi, double eta_l, double eta_m,
                                 double sigma) {
    check_efficiency(eta_l, "eta_l");
    check_efficiency(eta_m, "eta_m");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in (0,1]");
    for (double c : chi)
        if (!std::isfinite(c)) throw std::invalid_argument("chi must be finite");
    PulsePlan plan;
    plan.chi = chi;
    plan.mu[1] = -std::sqrt(eta_l * eta_m) * chi[1] / sigma;
    plan.mu[0] = -chi[0] * plan.mu[1];
    plan.mu[2] = -chi[2] * plan.mu[1];
    return plan;
}

// Inverse of pulse_strengths. The outer strengths are undefined for mu[1] = 0.
inline PulsePlan chi_for_mu(const std::array<double, 3>& mu, double eta_l, double eta_m,
                            double sigma) {
    check_efficiency(eta_l, "eta_l");
    check_efficiency(eta_m, "eta_m");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in (0,1]");
    if (mu[1] == 0.0)
        throw std::invalid_argument("mu[1] = 0 leaves the outer-pulse chi undefined");
    PulsePlan plan;
    plan.mu = mu;
    plan.chi[1] = -sigma * mu[1] / std::sqrt(eta_l * eta_m);
    plan.chi[0] = -mu[0] / mu[1];
    plan.chi[2] = -mu[2] / mu[1];
    return plan;
}

// chi = -8 g0 sqrt(N) / kappa and its inverse. N is reported only; mu is the
// protocol control. The alternate coefficient 4 is kept for reporting because
// published example parameters are consistent with it rather than with 8.
inline double chi_for_photons(double n_photons, double g0, double kappa) {
    if (!(n_photons >= 0.0)) throw std::invalid_argument("photon number must be >= 0");
    return -8.0 * g0 * std::sqrt(n_photons) / kappa;
}

inline double photons_for_chi(double chi, double g0, double kappa) {
    if (!(g0 > 0.0)) throw std::invalid_argument("g0 must be > 0 to convert chi to photons");
    const double s = chi * kappa / (8.0 * g0);
    return s * s;
}

inline double photons_for_chi_alt(double chi, double g0, double kappa) {
    if (!(g0 > 0.0)) throw std::invalid_argument("g0 must be > 0 to convert chi to photons");
    const double s = chi * kappa / (4.0 * g0);
    return s * s;
}

// Silicon-nitride microstring / silica microsphere system of published
// pulsed-optomechanics experiments; the standard worked example in this
// library and its tests.
inline PhysicalParams reference_microstring_params(double temperature_k) {
    PhysicalParams p;
    p.omega_m = 2.0 * M_PI * 100.2e3;
    p.gamma = 2.0 * M_PI * 31e-3;
    p.kappa = 2.0 * M_PI * 25.6e6;
    p.g0 = 2.0 * M_PI * 75.0;
    p.temperature = temperature_k;
    p.eta_l = 1.0;
    return p;
}

}  // namespace omswap
