#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hocf/errors.hpp"

namespace hocf {

/// Uniformly sampled real signal, linear interpolation between samples.
struct Samples {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    double t_end() const { return t0 + dt * static_cast<double>(values.size() - 1); }
    std::size_t size() const { return values.size(); }

    bool covers(double t, double slack = 1e-9) const {
        return t >= t0 - slack * dt && t <= t_end() + slack * dt;
    }

    /// Linear interpolation; clamps a fraction of a step beyond the ends.
    double at(double t) const {
        if (values.empty()) throw GridError("Samples::at on empty signal");
        if (values.size() == 1) return values.front();
        double s = (t - t0) / dt;
        if (s <= 0.0) {
            if (s < -1e-6) throw DomainError("Samples::at: t below range");
            return values.front();
        }
        auto last = static_cast<double>(values.size() - 1);
        if (s >= last) {
            if (s > last + 1e-6) throw DomainError("Samples::at: t above range");
            return values.back();
        }
        auto j = static_cast<std::size_t>(s);
        double w = s - static_cast<double>(j);
        return (1.0 - w) * values[j] + w * values[j + 1];
    }

    /// Piecewise-constant lookup (value held from the previous sample).
    double zoh(double t) const {
        if (values.empty()) throw GridError("Samples::zoh on empty signal");
        if (t <= t0) return values.front();
        double s = (t - t0) / dt;
        auto j = static_cast<std::size_t>(std::floor(s + 1e-12));
        if (j >= values.size()) return values.back();
        return values[j];
    }
};

inline Samples uniform_samples(double t0, double t1, std::size_t count) {
    if (count < 2) throw GridError("uniform_samples: need at least 2 points");
    Samples s;
    s.t0 = t0;
    s.dt = (t1 - t0) / static_cast<double>(count - 1);
    s.values.assign(count, 0.0);
    return s;
}

/// Trapezoidal rule on uniform samples.
inline double trapz(const std::vector<double>& v, double h) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
    return s * h;
}

/// Cumulative trapezoid from the left, result[0] = 0.
inline std::vector<double> cumtrapz(const std::vector<double>& v, double h) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t j = 1; j < v.size(); ++j)
        out[j] = out[j - 1] + 0.5 * h * (v[j - 1] + v[j]);
    return out;
}

/// Tail integrals W[j] = integral from x_j to the end, W.back() = 0.
inline std::vector<double> tail_integrals(const std::vector<double>& v, double h) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t j = v.size() - 1; j-- > 0;)
        out[j] = out[j + 1] + 0.5 * h * (v[j] + v[j + 1]);
    return out;
}

/// First derivative of uniform samples, 4th-order stencils (one-sided at the ends).
/// Endpoint values matter here: they feed point evaluations downstream.
inline std::vector<double> derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 5) throw GridTooCoarse("derivative: need at least 5 samples");
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * h);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t j = 2; j + 2 < n; ++j)
        d[j] = c * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
    d[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    d[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
    return d;
}

/// Derivatives up to `order`; stack[i] is the i-th derivative.
inline std::vector<std::vector<double>> derivative_stack(const std::vector<double>& f,
                                                         double h, int order) {
    std::vector<std::vector<double>> stack;
    stack.reserve(static_cast<std::size_t>(order) + 1);
    stack.push_back(f);
    for (int i = 0; i < order; ++i) stack.push_back(derivative(stack.back(), h));
    return stack;
}

inline double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double l2_norm(const std::vector<double>& v, double h) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        double w = (j == 0 || j + 1 == v.size()) ? 0.5 : 1.0;
        s += w * v[j] * v[j];
    }
    return std::sqrt(s * h);
}

}  // namespace hocf
