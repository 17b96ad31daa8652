#pragma once

#include <string>
#include <vector>

#include "hocf/fde.hpp"
#include "hocf/transforms.hpp"

namespace hocf {

/// The observer canonical form itself: integrator chain with output injection
/// feeding a transport PDE whose outflow is the output.
struct HOCFSystem {
    CanonicalFDE fde;
};

struct HocfTrajectory {
    std::vector<double> times;
    std::vector<double> y;
    std::vector<std::vector<double>> eta;        // chain states per step
    std::vector<std::vector<double>> eta_dist;   // transport state per step (optional)
    bool store_dist = false;
};

/// Explicit upwind march of the transport state with source -alpha'(tau) y(t);
/// the atom of alpha never appears as a source, it lives inside eta_n via the
/// transformation. y is read from the outflow node, so there is no algebraic loop.
HocfTrajectory simulate_hocf(const HOCFSystem& hocf, const ObserverState& eta0, double T,
                             std::size_t resolution, bool store_dist = false);

void write_hocf_trajectory_csv(const HocfTrajectory& traj, const std::string& path);

}  // namespace hocf
