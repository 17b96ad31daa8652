#pragma once

#include <vector>

#include "hocf/fde.hpp"
#include "hocf/simulator.hpp"
#include "hocf/system.hpp"
#include "hocf/transforms.hpp"

namespace hocf {

/// Mass-spring terminated string in Riemann invariants. All transforms of the
/// generic pipeline have closed forms here, which makes this the reference
/// case for everything else.
struct StringParams {
    double k = 1.0;  // spring stiffness
    double m = 1.0;  // tip mass
};

ValidatedSystem build_string_system(const StringParams& p);

/// Change of basis for the boundary ODE; xi_canonical = O xi_physical with
/// xi_physical = (displacement, velocity).
ObservabilityForm string_ode_form(const StringParams& p);
std::vector<double> string_xi_physical(const StringParams& p,
                                       const std::vector<double>& xi_canonical);
std::vector<double> string_xi_canonical(const StringParams& p,
                                        const std::vector<double>& xi_physical);

/// a_0 = a_1 = 2k/m, unit atom at 0, density (k/m)(2 - tau) - 1/m on [0,2].
CanonicalFDE closed_form_fde(const StringParams& p, std::size_t ntau = 512);

ObserverState closed_form_eta(const StringParams& p, const ObservabilityState& ybar);

/// State at window start: closed-form state at t + 1, then the boundary ODE
/// integrated in reverse time (RK4) and the transport solved exactly along
/// characteristics.
StateSnapshot closed_form_state(const StringParams& p, const CanonicalFDE& fde,
                                const ObservabilityState& ybar, const ObserverState& eta,
                                std::size_t nz);

/// x^- = dz_x + dt_x, x^+ = dz_x - dt_x on a shared grid.
StateSnapshot physical_to_riemann(const StringParams& p, const std::vector<double>& dz_x,
                                  const std::vector<double>& dt_x, double xi,
                                  double xi_dot);

/// Displacement profile x(z) = xi + int_0^z (x^- + x^+)/2.
std::vector<double> riemann_to_physical(const StringParams& p, const StateSnapshot& snap);

/// E = m/2 xi_dot^2 + k/2 xi^2 + 1/4 int (x^-)^2 + (x^+)^2 dz.
double string_energy(const StringParams& p, const StateSnapshot& snap);

}  // namespace hocf
