#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hocf/kernel.hpp"
#include "hocf/numerics.hpp"
#include "hocf/system.hpp"

namespace hocf {

/// N of the boundary parameterization x(1,t) = N (y(t), u(t))^T.
struct BoundaryMatrix {
    double n1_minus = 0.0, n2_minus = 0.0;
    double n1_plus = 0.0, n2_plus = 0.0;
};

BoundaryMatrix boundary_matrix(const ValidatedSystem& sys);

/// Neutral FDE before the Newton-Leibniz reduction:
///   sum_i c_i y^(i)(t + tau_hat) + sum_i d_i y^(i)(t)
///     + sum_i int_0^tau_hat w_i(s) y^(i)(t+s) ds = 0,  c_n = 1.
/// Densities w_i are sampled on a shared uniform grid over [0, tau_hat].
struct RawFDE {
    int n = 0;
    double tau_hat = 0.0;
    std::vector<double> c;               // length n+1
    std::vector<double> d;               // length n+1
    std::vector<std::vector<double>> w;  // n+1 rows, shared grid

    double ds() const {
        return tau_hat / static_cast<double>(w.front().size() - 1);
    }
};

/// BV measure alpha on [0, tau_hat]: point atoms plus a continuous density.
/// No atom may sit at tau_hat and the density extends continuously to it.
struct AlphaMeasure {
    std::vector<std::pair<double, double>> atoms;  // (location, mass)
    std::vector<double> density;                   // uniform grid on [0, tau_hat]
    double tau_hat = 0.0;

    double dtau() const {
        return tau_hat / static_cast<double>(density.size() - 1);
    }
    double density_at(double tau) const {
        return Samples{0.0, dtau(), density}.at(tau);
    }
};

/// Canonical data {a_0..a_{n-1}, alpha} of the neutral FDE
///   sum_{i<n} a_i y^(i)(t) + y^(n)(t + tau_hat) + int y^(n)(t+tau) dalpha = 0.
struct CanonicalFDE {
    int n = 0;
    double tau_hat = 0.0;
    std::vector<double> a;  // length n
    AlphaMeasure alpha;
};

/// Point coefficients from the boundary-ODE identity, distributed parts from
/// the z = 0 kernel row. Normalized so the leading predicted coefficient is 1.
RawFDE assemble_raw_fde(const ValidatedSystem& sys, const KernelTable& kernels,
                        std::size_t ntau = 512);

/// Repeated Newton-Leibniz promotion of all terms below order n.
CanonicalFDE reduce_to_canonical(const RawFDE& raw);

/// Max residual of the canonical FDE over all admissible t in the record,
/// finite-difference derivatives and trapezoid-plus-atom quadrature.
double fde_residual(const CanonicalFDE& fde, const Samples& y);

/// Same evaluation for the pre-reduction form (used by equivalence checks).
double raw_fde_residual(const RawFDE& raw, const Samples& y);

std::string canonical_fde_to_json(const CanonicalFDE& fde);
CanonicalFDE parse_canonical_fde_json(const std::string& text);

}  // namespace hocf
