#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hocf/numerics.hpp"
#include "hocf/system.hpp"

namespace hocf {

/// Input signal: uniform samples with zero-order hold between them.
struct InputSignal {
    Samples samples;

    static InputSignal zero() {
        return {Samples{0.0, 1.0, {0.0, 0.0}}};
    }
    static InputSignal sampled(double t0, double dt, std::vector<double> values) {
        return {Samples{t0, dt, std::move(values)}};
    }
    static InputSignal from_function(const std::function<double(double)>& fn, double t0,
                                     double t1, std::size_t count) {
        Samples s = uniform_samples(t0, t1, count);
        for (std::size_t j = 0; j < count; ++j)
            s.values[j] = fn(s.t0 + s.dt * static_cast<double>(j));
        return {s};
    }
    double operator()(double t) const { return samples.zoh(t); }
};

struct Trajectory {
    std::vector<double> times;  // uniform
    std::vector<double> y;
    std::vector<double> u;
    std::vector<StateSnapshot> snapshots;  // empty when not stored

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    Samples y_samples() const { return Samples{times.front(), dt(), y}; }
};

/// Output trajectory restricted to [0, tau_hat], sampled uniformly.
struct ObservabilityState {
    double tau_hat = 0.0;
    std::vector<double> ybar;
    int smoothness_order = 0;

    double dtau() const { return tau_hat / static_cast<double>(ybar.size() - 1); }
    Samples samples() const { return Samples{0.0, dtau(), ybar}; }
};

struct SimulateOptions {
    double cfl_safety = 0.9;
    bool store_snapshots = true;
};

/// First-order upwind march of the coupled PDE-ODE system; boundary
/// conditions are imposed exactly at every step.
Trajectory simulate_forward(const ValidatedSystem& sys, const StateSnapshot& X0,
                            const InputSignal& u, double T, std::size_t nz,
                            const SimulateOptions& opts = {});

/// Reverse-time march over [t, t+tau_minus]: recovers the state at t from the
/// state at t+tau_minus and the recorded output on the window (u = 0).
StateSnapshot simulate_backward(const ValidatedSystem& sys, const StateSnapshot& X_end,
                                const Samples& y_window,
                                const SimulateOptions& opts = {});

/// ybar(tau) = y(tau) for the autonomous system started at X0.
ObservabilityState observability_map(const ValidatedSystem& sys, const StateSnapshot& X0,
                                     std::size_t nt);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_snapshot_csv(const StateSnapshot& snap, const std::string& path);

}  // namespace hocf
