#pragma once

// Independent brute-force validators for the Gaussian channel and the
// lossless protocol: Monte-Carlo sampling of the linear map, and a truncated
// number-basis unitary simulation with its own Wigner synthesis.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "omswap/gaussian.hpp"
#include "omswap/parallel.hpp"
#include "omswap/phasespace.hpp"
#include "omswap/rng.hpp"

namespace omswap::oracle {

struct McConfig {
    std::size_t n_samples = 1000000;
    std::uint64_t seed = 0;
    int batches = 16;  // jackknife batches; sample values do not depend on the split
};

struct McCovariance {
    Mat4 cov = Mat4::Zero();
    Mat4 se = Mat4::Zero();  // jackknife standard error per entry
    std::size_t n_samples = 0;
};

namespace detail {

// Symmetric PSD square root; small negative eigenvalues within tolerance are
// clipped to zero, anything worse is rejected.
inline Mat4 psd_sqrt(const Mat4& v, const char* name) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (v + v.transpose()));
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    Vec4 lam = es.eigenvalues();
    for (int i = 0; i < 4; ++i) {
        if (lam(i) < -1e-9 * scale)
            throw std::invalid_argument(std::string(name) + " is not positive semidefinite");
        lam(i) = std::sqrt(std::max(0.0, lam(i)));
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

// Samples y = M x + f with x ~ N(0, v_in) and f ~ N(0, v_ff) and returns the
// sample covariance with jackknife errors. Every sample is a pure function of
// (seed, sample index), so results are bit-identical for any thread count;
// batch partials are merged in fixed order.
inline McCovariance mc_covariance(const ProtocolMap& pm, const Mat4& v_in, const McConfig& cfg,
                                  unsigned n_threads = 1) {
    if (cfg.n_samples < 10000)
        throw std::invalid_argument("mc_covariance needs at least 1e4 samples");
    if (cfg.batches < 2 || static_cast<std::size_t>(cfg.batches) > cfg.n_samples)
        throw std::invalid_argument("batch count must be in [2, n_samples]");
    const Mat4 a_in = detail::psd_sqrt(v_in, "input covariance");
    const Mat4 a_ff = detail::psd_sqrt(pm.v_ff, "noise covariance");
    const Mat4 m = pm.m;

    const int nb = cfg.batches;
    std::vector<Vec4> sum1(nb, Vec4::Zero());
    std::vector<Mat4> sum2(nb, Mat4::Zero());
    std::vector<std::size_t> counts(nb, 0);
    const std::size_t chunk = (cfg.n_samples + nb - 1) / nb;

    parallel_for(static_cast<std::size_t>(nb), n_threads, [&](std::size_t b) {
        const std::size_t lo = b * chunk;
        const std::size_t hi = std::min(cfg.n_samples, lo + chunk);
        Vec4 s1 = Vec4::Zero();
        Mat4 s2 = Mat4::Zero();
        for (std::size_t i = lo; i < hi; ++i) {
            const auto zx0 = normal_pair(cfg.seed, 0, 2 * i);
            const auto zx1 = normal_pair(cfg.seed, 0, 2 * i + 1);
            const auto zf0 = normal_pair(cfg.seed, 1, 2 * i);
            const auto zf1 = normal_pair(cfg.seed, 1, 2 * i + 1);
            const Vec4 x = a_in * Vec4(zx0[0], zx0[1], zx1[0], zx1[1]);
            const Vec4 f = a_ff * Vec4(zf0[0], zf0[1], zf1[0], zf1[1]);
            const Vec4 y = m * x + f;
            s1 += y;
            s2 += y * y.transpose();
        }
        sum1[b] = s1;
        sum2[b] = s2;
        counts[b] = hi - lo;
    });

    Vec4 tot1 = Vec4::Zero();
    Mat4 tot2 = Mat4::Zero();
    std::size_t n = 0;
    for (int b = 0; b < nb; ++b) {
        tot1 += sum1[b];
        tot2 += sum2[b];
        n += counts[b];
    }
    auto sample_cov = [](const Vec4& s1, const Mat4& s2, std::size_t cnt) -> Mat4 {
        const Vec4 mean = s1 / static_cast<double>(cnt);
        return (s2 - static_cast<double>(cnt) * mean * mean.transpose()) /
               static_cast<double>(cnt - 1);
    };

    McCovariance r;
    r.n_samples = n;
    r.cov = sample_cov(tot1, tot2, n);

    std::vector<Mat4> loo;
    loo.reserve(nb);
    Mat4 loo_mean = Mat4::Zero();
    for (int b = 0; b < nb; ++b) {
        if (counts[b] == 0) continue;
        const Mat4 c = sample_cov(tot1 - sum1[b], tot2 - sum2[b], n - counts[b]);
        loo.push_back(c);
        loo_mean += c;
    }
    const double nb_used = static_cast<double>(loo.size());
    loo_mean /= nb_used;
    Mat4 var = Mat4::Zero();
    for (const Mat4& c : loo) var += (c - loo_mean).cwiseProduct(c - loo_mean);
    r.se = ((nb_used - 1.0) / nb_used * var).cwiseSqrt();
    return r;
}

// ---------------------------------------------------------------------------
// Truncated number-basis simulation of the lossless protocol
// ---------------------------------------------------------------------------

struct FockSimConfig {
    int dim_m = 32;
    int dim_l = 32;
    std::array<double, 3> chi{-1.0, -1.0, -1.0};
    double leakage_threshold = 1e-8;
};

struct FockOracleResult {
    Eigen::MatrixXcd rho_m;  // reduced mechanical density matrix
    double leakage = 0.0;    // population outside the (dim - 4) guard band
};

inline Eigen::MatrixXd ladder(int dim) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Eigen::VectorXcd fock_vector(int n, int dim) {
    if (n < 0 || n >= dim) throw std::invalid_argument("fock index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(n) = 1.0;
    return v;
}

inline Eigen::VectorXcd coherent_vector(cplx alpha, int dim) {
    Eigen::VectorXcd v(dim);
    cplx amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        v(n) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

inline Eigen::VectorXcd cat_vector(cplx alpha, int parity, int dim) {
    const double pm = (parity >= 0) ? 1.0 : -1.0;
    Eigen::VectorXcd v = coherent_vector(alpha, dim) + pm * coherent_vector(-alpha, dim);
    const double nrm = v.norm();
    if (nrm == 0.0) throw std::invalid_argument("cat state is null for this alpha/parity");
    return v / nrm;
}

// S(xi) = exp(xi/2 (a^2 - a+^2)) for real xi (position squeeze for xi > 0).
inline Eigen::MatrixXd squeeze_operator(double xi, int dim) {
    const Eigen::MatrixXd a = ladder(dim);
    const Eigen::MatrixXd gen = 0.5 * xi * (a * a - (a * a).transpose());
    return gen.exp();
}

namespace detail {

struct QuadratureEigs {
    Eigen::MatrixXd basis;
    Eigen::VectorXd values;
};

inline QuadratureEigs x_eigs(int dim) {
    const Eigen::MatrixXd a = ladder(dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a + a.transpose());
    return {es.eigenvectors(), es.eigenvalues()};
}

}  // namespace detail

// Applies QND / rotate / QND / rotate / QND to psi_m (x) psi_l. The QND
// unitary exp(i chi/2 X_M X_L) generates P' = P + chi X on both modes under
// the [X, P] = 2i convention; quarter-period delays and optical displacements
// are the number-operator phase exp(-i pi n/2).
inline FockOracleResult fock_protocol_oracle(const FockSimConfig& cfg,
                                             const Eigen::VectorXcd& psi_m,
                                             const Eigen::VectorXcd& psi_l) {
    if (cfg.dim_m < 8 || cfg.dim_l < 8)
        throw std::invalid_argument("truncation dimensions must be >= 8");
    if (psi_m.size() != cfg.dim_m || psi_l.size() != cfg.dim_l)
        throw std::invalid_argument("input state dimensions do not match the configuration");

    const auto xm = detail::x_eigs(cfg.dim_m);
    const auto xl = detail::x_eigs(cfg.dim_l);
    Eigen::VectorXcd rot_m(cfg.dim_m), rot_l(cfg.dim_l);
    for (int n = 0; n < cfg.dim_m; ++n) rot_m(n) = std::exp(cplx(0.0, -0.5 * M_PI * n));
    for (int n = 0; n < cfg.dim_l; ++n) rot_l(n) = std::exp(cplx(0.0, -0.5 * M_PI * n));

    Eigen::MatrixXcd psi = psi_m * psi_l.transpose();
    for (int pulse = 0; pulse < 3; ++pulse) {
        Eigen::MatrixXcd amp = xm.basis.transpose() * psi * xl.basis;
        for (int i = 0; i < cfg.dim_m; ++i)
            for (int j = 0; j < cfg.dim_l; ++j)
                amp(i, j) *= std::exp(cplx(0.0, 0.5 * cfg.chi[pulse] * xm.values(i) * xl.values(j)));
        psi = xm.basis * amp * xl.basis.transpose();
        if (pulse < 2) psi = rot_m.asDiagonal() * psi * rot_l.asDiagonal();
    }

    double kept = 0.0;
    for (int i = 0; i < cfg.dim_m - 4; ++i)
        for (int j = 0; j < cfg.dim_l - 4; ++j) kept += std::norm(psi(i, j));
    FockOracleResult r;
    r.leakage = 1.0 - kept;
    if (r.leakage > cfg.leakage_threshold)
        throw std::runtime_error("truncation leakage " + std::to_string(r.leakage) +
                                 " exceeds threshold; increase dim_m/dim_l");
    r.rho_m = psi * psi.adjoint();
    return r;
}

inline double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace_distance requires equal dimensions");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho - sigma, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Wigner function synthesized directly from number-basis matrix elements,
//   W(r) = e^{-r.r/2}/(2 pi) Re sum_{m<=n} w_mn rho_mn (x+ip)^{n-m} L_m^{n-m}(r.r),
// independent of the characteristic-function pipeline.
inline WignerGrid dm_wigner(const Eigen::MatrixXcd& rho, const WignerGridSpec& spec,
                            unsigned n_threads = 1) {
    const int dim = static_cast<int>(rho.rows());
    if (rho.cols() != dim) throw std::invalid_argument("density matrix must be square");
    const int n = spec.n_points;
    if (!omswap::detail::is_pow2(n) || n < 4)
        throw std::invalid_argument("grid resolution must be a power of two (>= 4)");

    // (-1)^m sqrt(m!/(m+k)!) coefficient table
    std::vector<double> lgam(dim + 1);
    for (int i = 0; i <= dim; ++i) lgam[i] = std::lgamma(static_cast<double>(i) + 1.0);
    const double rho_scale = std::max(1e-300, rho.cwiseAbs().maxCoeff());
    std::vector<int> active_diagonals;
    for (int k = 0; k < dim; ++k) {
        double mx = 0.0;
        for (int m = 0; m + k < dim; ++m) mx = std::max(mx, std::abs(rho(m, m + k)));
        if (mx > 1e-15 * rho_scale) active_diagonals.push_back(k);
    }

    WignerGrid grid;
    grid.extent = spec.extent;
    grid.n_points = n;
    grid.values.resize(n, n);

    parallel_for(static_cast<std::size_t>(n), n_threads, [&](std::size_t ix) {
        const double x = grid.coord(static_cast<int>(ix));
        for (int ip = 0; ip < n; ++ip) {
            const double p = grid.coord(ip);
            const double r2 = x * x + p * p;
            const cplx z(x, p);
            cplx acc(0.0, 0.0);
            for (int k : active_diagonals) {
                // L_m^{(k)}(r2) recurrence in m while accumulating the diagonal
                double lm1 = 0.0, lm = 1.0;
                cplx diag_sum(0.0, 0.0);
                for (int m = 0; m + k < dim; ++m) {
                    if (m == 1) {
                        lm1 = lm;
                        lm = 1.0 + k - r2;
                    } else if (m > 1) {
                        const double lp = ((2.0 * (m - 1) + k + 1.0 - r2) * lm - (m - 1.0 + k) * lm1) / m;
                        lm1 = lm;
                        lm = lp;
                    }
                    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                    const double coef = sign * std::exp(0.5 * (lgam[m] - lgam[m + k]));
                    diag_sum += rho(m, m + k) * coef * lm;
                }
                const cplx zk = (k == 0) ? cplx(1.0, 0.0) : std::pow(z, k);
                acc += (k == 0) ? diag_sum : 2.0 * zk * diag_sum;
            }
            grid.values(static_cast<int>(ix), ip) =
                std::exp(-0.5 * r2) / (2.0 * M_PI) * acc.real();
        }
    });
    return grid;
}

}  // namespace omswap::oracle
