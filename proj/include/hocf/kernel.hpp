#pragma once

#include <array>
#include <string>
#include <vector>

#include "hocf/numerics.hpp"
#include "hocf/system.hpp"

namespace hocf {

/// Sampled 2x2 kernel matrix on the triangular influence domain of (z0, 0).
/// Row j lives on z_grid[j] with tau in [tau_lo, tau_hi] where
/// tau_lo = -gamma^+(z0; z) and tau_hi = gamma^-(z0; z). Component order in
/// each sample: (k--, k-+, k+-, k++).
struct KernelTable {
    double z0 = 1.0;
    std::vector<double> z_grid;
    struct Row {
        double tau_lo = 0.0;
        double tau_hi = 0.0;
        std::vector<std::array<double, 4>> k;

        double dtau() const {
            return k.size() > 1 ? (tau_hi - tau_lo) / static_cast<double>(k.size() - 1) : 0.0;
        }
    };
    std::vector<Row> rows;

    /// Bilinear interpolation; tau is clamped to each row's interval so that
    /// boundary-curve values extend continuously to queries on the curves.
    std::array<double, 4> value(double z, double tau) const;

    bool all_zero(double tol = 0.0) const;
};

/// Successive approximation of the Goursat-type kernel system along
/// characteristics. Boundary conditions are imposed exactly every sweep.
KernelTable solve_kernels(const ValidatedSystem& sys, double z0, std::size_t resolution,
                          double tol = 1e-10);

/// Convolution of the kernel row at z against a boundary trace x(z0, .):
/// out(t) = int k(z,tau) x(z0, t - tau) dtau, both matrix rows.
/// trace_minus/trace_plus share one uniform time grid.
struct TracePair {
    Samples minus;
    Samples plus;
};

std::pair<std::vector<double>, std::vector<double>> kernel_convolve(
    const KernelTable& table, double z, const TracePair& trace,
    const std::vector<double>& eval_times);

void write_kernels_csv(const KernelTable& table, const std::string& path);

}  // namespace hocf
