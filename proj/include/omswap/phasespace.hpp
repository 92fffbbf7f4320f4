#pragma once

// Characteristic-function representation of Gaussian, Fock and cat states,
// the pushforward through the protocol channel, Wigner synthesis on phase
// space grids, and the overlap/negativity metrics.
//
// States are kept as evaluable closures over closed forms; the only sampled
// object is the final Wigner grid.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "omswap/gaussian.hpp"
#include "omswap/parallel.hpp"
#include "omswap/symplectic.hpp"

namespace omswap {

using cplx = std::complex<double>;

struct StateSpec {
    enum class Kind { Gaussian, Fock, Cat };

    Kind kind = Kind::Gaussian;
    Eigen::VectorXd mean;   // Gaussian only, 2 or 4 components
    Eigen::MatrixXd cov;    // Gaussian only
    int n = 0;              // Fock only
    cplx alpha{0.0, 0.0};   // Cat only
    int parity = -1;        // Cat only, +1 even / -1 odd

    static StateSpec gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
        if (!(mean.size() == 2 || mean.size() == 4))
            throw std::invalid_argument("gaussian state must have 1 or 2 modes");
        if (cov.rows() != mean.size() || cov.cols() != mean.size())
            throw std::invalid_argument("gaussian covariance/mean size mismatch");
        if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("gaussian covariance must be symmetric");
        if (!is_physical(cov))
            throw std::invalid_argument("gaussian covariance violates the uncertainty bound");
        StateSpec s;
        s.kind = Kind::Gaussian;
        s.mean = mean;
        s.cov = cov;
        return s;
    }

    static StateSpec vacuum() { return gaussian(Eigen::Vector2d::Zero(), Mat2::Identity()); }

    static StateSpec thermal(double n_mean) {
        return gaussian(Eigen::Vector2d::Zero(), thermal_cov(n_mean));
    }

    static StateSpec fock(int n) {
        if (n < 0) throw std::invalid_argument("fock index must be >= 0");
        StateSpec s;
        s.kind = Kind::Fock;
        s.n = n;
        return s;
    }

    static StateSpec cat(cplx alpha, int parity) {
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
            throw std::invalid_argument("cat amplitude must be finite");
        if (parity != 1 && parity != -1) throw std::invalid_argument("cat parity must be +1 or -1");
        if (parity == -1 && std::abs(alpha) == 0.0)
            throw std::invalid_argument("odd cat is undefined at alpha = 0");
        StateSpec s;
        s.kind = Kind::Cat;
        s.alpha = alpha;
        s.parity = parity;
        return s;
    }

    int modes() const { return (kind == Kind::Gaussian) ? static_cast<int>(mean.size()) / 2 : 1; }
};

// Evaluable characteristic function chi(beta). Satisfies chi(0) = 1 and
// chi(-beta) = conj(chi(beta)) for any valid state.
class CharacteristicFunction {
  public:
    using Fn1 = std::function<cplx(const Vec2&)>;
    using Fn2 = std::function<cplx(const Vec4&)>;

    static CharacteristicFunction single(Fn1 f) {
        CharacteristicFunction c;
        c.n_modes_ = 1;
        c.f1_ = std::move(f);
        return c;
    }
    static CharacteristicFunction joint(Fn2 f) {
        CharacteristicFunction c;
        c.n_modes_ = 2;
        c.f2_ = std::move(f);
        return c;
    }

    int modes() const { return n_modes_; }

    cplx operator()(const Vec2& beta) const {
        if (n_modes_ != 1) throw std::invalid_argument("expected a 2-component beta for a 1-mode chi");
        return f1_(beta);
    }
    cplx operator()(const Vec4& beta) const {
        if (n_modes_ != 2) throw std::invalid_argument("expected a 4-component beta for a 2-mode chi");
        return f2_(beta);
    }
    cplx operator()(double bx, double bp) const { return (*this)(Vec2(bx, bp)); }

  private:
    int n_modes_ = 1;
    Fn1 f1_;
    Fn2 f2_;
};

namespace detail {

inline double laguerre(int n, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double lp = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp;
    }
    return l;
}

}  // namespace detail

inline CharacteristicFunction make_cf(const StateSpec& spec) {
    switch (spec.kind) {
        case StateSpec::Kind::Gaussian: {
            const int dim = static_cast<int>(spec.mean.size());
            const Eigen::MatrixXd omega = (dim == 2) ? Eigen::MatrixXd(omega2()) : Eigen::MatrixXd(omega4());
            const Eigen::MatrixXd quad = omega.transpose() * spec.cov * omega;
            const Eigen::VectorXd lin = omega.transpose() * spec.mean;  // <X>.(Omega beta) = (Omega^T <X>).beta
            if (dim == 2) {
                Mat2 q = quad;
                Vec2 l = lin;
                return CharacteristicFunction::single([q, l](const Vec2& b) {
                    return std::exp(cplx(-0.5 * b.dot(q * b), l.dot(b)));
                });
            }
            Mat4 q = quad;
            Vec4 l = lin;
            return CharacteristicFunction::joint([q, l](const Vec4& b) {
                return std::exp(cplx(-0.5 * b.dot(q * b), l.dot(b)));
            });
        }
        case StateSpec::Kind::Fock: {
            const int n = spec.n;
            return CharacteristicFunction::single([n](const Vec2& b) {
                const double b2 = b.squaredNorm();
                return cplx(std::exp(-0.5 * b2) * detail::laguerre(n, b2), 0.0);
            });
        }
        case StateSpec::Kind::Cat: {
            const cplx alpha = spec.alpha;
            const double pm = spec.parity;
            const double damp = std::exp(-2.0 * std::norm(alpha));
            const double norm = 1.0 / (1.0 + pm * damp);
            return CharacteristicFunction::single([alpha, pm, damp, norm](const Vec2& b) {
                const cplx beta(b(0), b(1));
                const cplx ab = std::conj(alpha) * beta;
                // cosh(a*b - b*a) = cos(2 Im(a*b)), cosh(a*b + b*a) = cosh(2 Re(a*b))
                const double val = std::cos(2.0 * ab.imag()) + pm * damp * std::cosh(2.0 * ab.real());
                return cplx(norm * std::exp(-0.5 * std::norm(beta)) * val, 0.0);
            });
        }
    }
    throw std::invalid_argument("unknown state kind");
}

// Heisenberg pushforward of a separable two-mode state through the channel:
// chi'(beta) = chi_M(E_M g) chi_L(E_L g) exp(-1/2 beta^T Omega^T V_FF Omega beta)
// with g = Omega^T M^T Omega beta. (Omega^T, not Omega: the argument map must
// reduce to the identity for M = 1.)
inline CharacteristicFunction evolve_joint_cf(const CharacteristicFunction& cf_m,
                                              const CharacteristicFunction& cf_l,
                                              const ProtocolMap& pm) {
    if (cf_m.modes() != 1 || cf_l.modes() != 1)
        throw std::invalid_argument("evolve_joint_cf expects single-mode inputs");
    const Mat4 omega = omega4();
    const Mat4 arg_map = omega.transpose() * pm.m.transpose() * omega;
    const Mat4 noise_quad = omega.transpose() * pm.v_ff * omega;
    return CharacteristicFunction::joint(
        [cf_m, cf_l, arg_map, noise_quad](const Vec4& beta) {
            const Vec4 g = arg_map * beta;
            const double kernel = -0.5 * beta.dot(noise_quad * beta);
            return cf_m(Vec2(g(0), g(1))) * cf_l(Vec2(g(2), g(3))) * std::exp(kernel);
        });
}

// Restriction of a two-mode chi to the mechanical plane beta = (b, 0).
inline CharacteristicFunction reduce_to_mechanics(const CharacteristicFunction& cf2) {
    if (cf2.modes() != 2) throw std::invalid_argument("reduce_to_mechanics expects a 2-mode chi");
    return CharacteristicFunction::single(
        [cf2](const Vec2& b) { return cf2(Vec4(b(0), b(1), 0.0, 0.0)); });
}

struct WignerGridSpec {
    double extent = 7.0;  // symmetric range [-extent, extent)
    int n_points = 256;   // per axis, power of two
};

struct WignerGrid {
    double extent = 7.0;
    int n_points = 0;
    Eigen::ArrayXXd values;           // values(ix, ip)
    double boundary_chi_max = 0.0;    // max |chi| on the beta-grid boundary
    bool aliasing_risk = false;       // boundary_chi_max > 1e-6

    double step() const { return 2.0 * extent / n_points; }
    double cell_area() const { return step() * step(); }
    double coord(int i) const { return (i - n_points / 2) * step(); }
    double integral() const { return values.sum() * cell_area(); }
};

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// DFT with kernel exp(-2 pi i j k / n); the conjugate flag selects the
// opposite sign.
inline void dft(Eigen::FFT<double>& fft, std::vector<cplx>& data, bool conjugate) {
    if (conjugate)
        for (auto& v : data) v = std::conj(v);
    std::vector<cplx> out(data.size());
    fft.fwd(out, data);
    if (conjugate)
        for (auto& v : out) v = std::conj(v);
    data = std::move(out);
}

}  // namespace detail

// Numerical Wigner function
//   W(r) = (1/4 pi^2) \int chi(beta) exp(-i r . Omega beta) d^2 beta
// on a symmetric grid, via a 2-D discrete Fourier transform over the
// conjugate beta grid (spacing pi/extent). The integrand separates into a
// forward transform along beta_p (against x) and a conjugate transform along
// beta_x (against p), with alternating-sign phase corrections for the
// symmetric extents.
inline WignerGrid wigner_grid(const CharacteristicFunction& cf, const WignerGridSpec& spec,
                              unsigned n_threads = 1) {
    if (cf.modes() != 1) throw std::invalid_argument("wigner_grid expects a single-mode chi");
    if (!detail::is_pow2(spec.n_points) || spec.n_points < 4)
        throw std::invalid_argument("grid resolution must be a power of two (>= 4)");
    if (!(spec.extent > 0.0)) throw std::invalid_argument("grid extent must be positive");

    const int n = spec.n_points;
    const double dbeta = M_PI / spec.extent;  // conjugate spacing: dr * dbeta = 2 pi / n

    WignerGrid grid;
    grid.extent = spec.extent;
    grid.n_points = n;
    grid.values.resize(n, n);

    // chi on the beta grid, pre-multiplied by the (-1)^(m+l) input phase
    Eigen::MatrixXcd f(n, n);
    std::vector<double> boundary_max(n, 0.0);
    parallel_for(static_cast<std::size_t>(n), n_threads, [&](std::size_t m) {
        const double bx = (static_cast<int>(m) - n / 2) * dbeta;
        double bmax = 0.0;
        for (int l = 0; l < n; ++l) {
            const double bp = (l - n / 2) * dbeta;
            const cplx chi = cf(bx, bp);
            const double sign = ((static_cast<int>(m) + l) % 2 == 0) ? 1.0 : -1.0;
            f(static_cast<int>(m), l) = sign * chi;
            if (m == 0 || static_cast<int>(m) == n - 1 || l == 0 || l == n - 1)
                bmax = std::max(bmax, std::abs(chi));
        }
        boundary_max[m] = bmax;
    });
    for (double b : boundary_max) grid.boundary_chi_max = std::max(grid.boundary_chi_max, b);
    grid.aliasing_risk = grid.boundary_chi_max > 1e-6;

    Eigen::FFT<double> fft;
    std::vector<cplx> buf(n);
    // forward transform along beta_p (axis l -> x index j)
    for (int m = 0; m < n; ++m) {
        for (int l = 0; l < n; ++l) buf[l] = f(m, l);
        detail::dft(fft, buf, false);
        for (int j = 0; j < n; ++j) f(m, j) = buf[j];
    }
    // conjugate transform along beta_x (axis m -> p index k)
    const double scale = dbeta * dbeta / (4.0 * M_PI * M_PI);
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) buf[m] = f(m, j);
        detail::dft(fft, buf, true);
        for (int k = 0; k < n; ++k) {
            const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
            grid.values(j, k) = scale * sign * buf[k].real();
        }
    }
    return grid;
}

// Closed-form Wigner functions evaluated directly on the grid; used as
// fidelity targets and as oracles for the Fourier path.
inline WignerGrid analytic_wigner(const StateSpec& spec, const WignerGridSpec& gspec) {
    if (spec.modes() != 1) throw std::invalid_argument("analytic_wigner expects a single-mode state");
    if (!detail::is_pow2(gspec.n_points) || gspec.n_points < 4)
        throw std::invalid_argument("grid resolution must be a power of two (>= 4)");
    const int n = gspec.n_points;
    WignerGrid grid;
    grid.extent = gspec.extent;
    grid.n_points = n;
    grid.values.resize(n, n);

    std::function<double(double, double)> w;
    switch (spec.kind) {
        case StateSpec::Kind::Gaussian: {
            const Mat2 v = spec.cov;
            const Mat2 vinv = v.inverse();
            const double norm = 1.0 / (2.0 * M_PI * std::sqrt(v.determinant()));
            const Vec2 mean = spec.mean;
            w = [vinv, norm, mean](double x, double p) {
                const Vec2 d(x - mean(0), p - mean(1));
                return norm * std::exp(-0.5 * d.dot(vinv * d));
            };
            break;
        }
        case StateSpec::Kind::Fock: {
            const int nn = spec.n;
            const double sgn = (nn % 2 == 0) ? 1.0 : -1.0;
            w = [nn, sgn](double x, double p) {
                const double r2 = x * x + p * p;
                return sgn / (2.0 * M_PI) * std::exp(-0.5 * r2) * detail::laguerre(nn, r2);
            };
            break;
        }
        case StateSpec::Kind::Cat: {
            const Vec2 a(spec.alpha.real(), spec.alpha.imag());
            const Vec2 wa = omega2() * a;
            const double pm = spec.parity;
            const double damp = std::exp(-2.0 * a.squaredNorm());
            const double norm = 1.0 / (2.0 * M_PI * (1.0 + pm * damp));
            w = [a, wa, pm, damp, norm](double x, double p) {
                const Vec2 r(x, p);
                return norm * std::exp(-0.5 * r.squaredNorm()) *
                       (damp * std::cosh(2.0 * r.dot(a)) + pm * std::cos(2.0 * r.dot(wa)));
            };
            break;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) grid.values(i, k) = w(grid.coord(i), grid.coord(k));
    return grid;
}

struct FidelityResult {
    double fidelity = 0.0;
    double infidelity = 0.0;
    double quadrature_error_estimate = 0.0;
};

// Phase-space overlap form of the state fidelity: F = 4 pi \int W1 W2.
// The quadrature error is estimated by re-summing at half resolution.
inline FidelityResult fidelity(const WignerGrid& w1, const WignerGrid& w2) {
    if (w1.n_points != w2.n_points || w1.extent != w2.extent)
        throw std::invalid_argument("fidelity requires identical grids");
    const int n = w1.n_points;
    double full = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) full += w1.values(i, k) * w2.values(i, k);
    full *= 4.0 * M_PI * w1.cell_area();

    double half = 0.0;
    for (int i = 0; i < n; i += 2)
        for (int k = 0; k < n; k += 2) half += w1.values(i, k) * w2.values(i, k);
    half *= 4.0 * M_PI * 4.0 * w1.cell_area();

    FidelityResult r;
    r.fidelity = full;
    r.infidelity = 1.0 - full;
    r.quadrature_error_estimate = std::abs(full - half);
    return r;
}

struct NegativityResult {
    double min_value = 0.0;
    double integrated_negativity = 0.0;
};

inline NegativityResult negativity(const WignerGrid& w) {
    NegativityResult r;
    r.min_value = w.values.minCoeff();
    r.integrated_negativity = (-w.values).cwiseMax(0.0).sum() * w.cell_area();
    return r;
}

}  // namespace omswap
