#pragma once

#include <string>
#include <vector>

#include "hocf/fde.hpp"
#include "hocf/kernel.hpp"
#include "hocf/simulator.hpp"
#include "hocf/system.hpp"

namespace hocf {

/// Observer coordinates: integrator-chain state eta_1..eta_n plus the
/// distributed transport state eta_{n+1} sampled on [0, tau_hat].
struct ObserverState {
    std::vector<double> eta;
    std::vector<double> eta_dist;
    double tau_hat = 0.0;

    double dtau() const {
        return tau_hat / static_cast<double>(eta_dist.size() - 1);
    }
    Samples dist_samples() const { return Samples{0.0, dtau(), eta_dist}; }
};

/// Observability -> observer chart. eta_i by point evaluation of derivative
/// stacks plus Stieltjes integrals; eta_dist by the Volterra relation. The
/// atom of alpha acts at the closed lower endpoint, i.e. only at tau = 0.
ObserverState obs_to_observer(const CanonicalFDE& fde, const ObservabilityState& ybar);

/// Inverse chart: marches the triangular Volterra system; by construction the
/// exact inverse of the discrete map used in obs_to_observer.
ObservabilityState observer_to_obs(const CanonicalFDE& fde, const ObserverState& eta);

/// State at t + tau_minus from ybar at t: distributed components via shifted
/// trace parameterization plus kernel convolutions, the ODE state via the
/// derivative-stack identity against D_H.
StateSnapshot parameterize_state_shifted(const ValidatedSystem& sys,
                                         const KernelTable& kernels,
                                         const CanonicalFDE& fde,
                                         const ObservabilityState& ybar, std::size_t nz);

/// Full inverse of the observability map: shifted parameterization followed by
/// the reverse-time solve over [t, t + tau_minus].
StateSnapshot obs_to_state(const ValidatedSystem& sys, const KernelTable& kernels,
                           const CanonicalFDE& fde, const ObservabilityState& ybar,
                           std::size_t nz);

std::string observer_state_to_json(const ObserverState& s);
ObserverState parse_observer_state_json(const std::string& text);

}  // namespace hocf
