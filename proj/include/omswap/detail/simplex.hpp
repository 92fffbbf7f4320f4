#pragma once

// Derivative-free Nelder-Mead simplex minimization on a box, plus golden
// section and bisection helpers for the one-dimensional analyses.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace omswap::detail {

template <int N>
struct SimplexResult {
    std::array<double, N> x{};
    double fmin = 0.0;
    bool converged = false;
    int iterations = 0;
    double diameter = 0.0;
};

template <int N, typename F>
SimplexResult<N> nelder_mead(F&& f, std::array<double, N> start, std::array<double, N> lo,
                             std::array<double, N> hi, double diameter_tol = 1e-6,
                             int max_iter = 5000, double initial_step = 0.05) {
    using Point = std::array<double, N>;
    auto clamp = [&](Point p) {
        for (int i = 0; i < N; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
        return p;
    };
    struct Vertex {
        Point x;
        double fx;
    };
    std::vector<Vertex> s;
    s.reserve(N + 1);
    s.push_back({clamp(start), 0.0});
    for (int i = 0; i < N; ++i) {
        Point p = start;
        p[i] += (p[i] + initial_step <= hi[i]) ? initial_step : -initial_step;
        s.push_back({clamp(p), 0.0});
    }
    for (auto& v : s) v.fx = f(v.x);

    auto diameter = [&]() {
        double d = 0.0;
        for (size_t a = 0; a < s.size(); ++a)
            for (size_t b = a + 1; b < s.size(); ++b) {
                double r = 0.0;
                for (int i = 0; i < N; ++i) {
                    const double dd = s[a].x[i] - s[b].x[i];
                    r += dd * dd;
                }
                d = std::max(d, std::sqrt(r));
            }
        return d;
    };

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
        if (diameter() < diameter_tol) break;

        Point centroid{};
        for (int v = 0; v < N; ++v)
            for (int i = 0; i < N; ++i) centroid[i] += s[v].x[i] / N;

        auto blend = [&](double t) {
            Point p;
            for (int i = 0; i < N; ++i) p[i] = centroid[i] + t * (centroid[i] - s[N].x[i]);
            return clamp(p);
        };

        const Point xr = blend(1.0);
        const double fr = f(xr);
        if (fr < s[0].fx) {
            const Point xe = blend(2.0);
            const double fe = f(xe);
            s[N] = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[N - 1].fx) {
            s[N] = {xr, fr};
        } else {
            const Point xc = blend(-0.5);
            const double fc = f(xc);
            if (fc < s[N].fx) {
                s[N] = {xc, fc};
            } else {
                for (int v = 1; v <= N; ++v) {
                    for (int i = 0; i < N; ++i) s[v].x[i] = 0.5 * (s[v].x[i] + s[0].x[i]);
                    s[v].fx = f(s[v].x);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    SimplexResult<N> r;
    r.x = s[0].x;
    r.fmin = s[0].fx;
    r.iterations = iter;
    r.diameter = diameter();
    r.converged = r.diameter < diameter_tol;
    return r;
}

// Golden-section minimum of a unimodal function on [a, b].
template <typename F>
double golden_min(F&& f, double a, double b, double xtol = 1e-12) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Bisection root of f on [a, b]; requires a sign change over the bracket.
template <typename F>
double bisect(F&& f, double a, double b, double xtol = 1e-10) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::runtime_error("bisection bracket failure: f(a) and f(b) have the same sign");
    while (b - a > xtol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace omswap::detail
