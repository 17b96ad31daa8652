#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hocf/errors.hpp"

namespace hocf {

/// Piecewise-linear coefficient profile on [0,1]. Integrals of the
/// interpolant are evaluated exactly (trapezoids on the sample intervals).
struct CoefficientField {
    std::vector<double> grid;
    std::vector<double> values;

    static CoefficientField constant(double v) { return {{0.0, 1.0}, {v, v}}; }

    void validate() const {
        if (grid.size() < 2 || grid.size() != values.size())
            throw GridError("coefficient field needs matching grids with >= 2 points");
        if (grid.front() != 0.0 || grid.back() != 1.0)
            throw GridError("coefficient grid must start at 0 and end at 1");
        for (std::size_t j = 1; j < grid.size(); ++j)
            if (!(grid[j] > grid[j - 1]))
                throw GridError("coefficient grid must be strictly increasing");
        for (double v : values)
            if (!std::isfinite(v)) throw GridError("coefficient values must be finite");
    }

    double value(double z) const {
        if (z < -1e-12 || z > 1.0 + 1e-12)
            throw DomainError("coefficient query outside [0,1]");
        z = std::clamp(z, 0.0, 1.0);
        auto it = std::upper_bound(grid.begin(), grid.end(), z);
        if (it == grid.begin()) return values.front();
        if (it == grid.end()) return values.back();
        std::size_t j = static_cast<std::size_t>(it - grid.begin());
        double w = (z - grid[j - 1]) / (grid[j] - grid[j - 1]);
        return (1.0 - w) * values[j - 1] + w * values[j];
    }

    /// Exact integral of the piecewise-linear interpolant over [a,b] in [0,1].
    /// Antisymmetric in (a,b).
    double integral(double a, double b) const {
        if (a > b) return -integral(b, a);
        if (a < -1e-12 || b > 1.0 + 1e-12)
            throw DomainError("integration bounds outside [0,1]");
        a = std::clamp(a, 0.0, 1.0);
        b = std::clamp(b, 0.0, 1.0);
        double sum = 0.0;
        for (std::size_t j = 1; j < grid.size(); ++j) {
            double lo = std::max(a, grid[j - 1]);
            double hi = std::min(b, grid[j]);
            if (hi <= lo) continue;
            sum += 0.5 * (value(lo) + value(hi)) * (hi - lo);
        }
        return sum;
    }

    double min_value() const { return *std::min_element(values.begin(), values.end()); }

    bool strictly_positive() const { return min_value() > 0.0; }
};

}  // namespace hocf
