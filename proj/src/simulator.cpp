#include "hocf/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "io_util.hpp"

namespace hocf {

namespace {

struct GridCoeffs {
    std::vector<double> sig_m, sig_p, mu_m, mu_p;
};

GridCoeffs sample_coeffs(const HyperbolicSystem& sys, std::size_t nz) {
    GridCoeffs c;
    c.sig_m.resize(nz + 1);
    c.sig_p.resize(nz + 1);
    c.mu_m.resize(nz + 1);
    c.mu_p.resize(nz + 1);
    for (std::size_t j = 0; j <= nz; ++j) {
        double z = static_cast<double>(j) / static_cast<double>(nz);
        c.sig_m[j] = sys.sigma_minus.value(z);
        c.sig_p[j] = sys.sigma_plus.value(z);
        c.mu_m[j] = sys.mu_minus.value(z);
        c.mu_p[j] = sys.mu_plus.value(z);
    }
    return c;
}

double max_stable_dt(const HyperbolicSystem& sys, double dz, double safety) {
    double smin = std::min(sys.sigma_minus.min_value(), sys.sigma_plus.min_value());
    return safety * dz * smin;
}

std::vector<double> ode_rhs(const Mat& F, const std::vector<double>& g,
                            const std::vector<double>& xi, double xm0) {
    std::vector<double> r = F.mul(xi);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += g[i] * xm0;
    return r;
}

}  // namespace

Trajectory simulate_forward(const ValidatedSystem& sys, const StateSnapshot& X0,
                            const InputSignal& u, double T, std::size_t nz,
                            const SimulateOptions& opts) {
    if (nz < 4) throw ResolutionError("simulate_forward: nz must be >= 4");
    if (!(T > 0.0)) throw DomainError("simulate_forward: horizon must be positive");
    const HyperbolicSystem& p = sys.raw();
    const double dz = 1.0 / static_cast<double>(nz);
    const double dt_max = max_stable_dt(p, dz, opts.cfl_safety);
    const auto nt = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-12));
    const double dt = T / static_cast<double>(nt);
    const GridCoeffs c = sample_coeffs(p, nz);
    const Mat& F = sys.companion();

    StateSnapshot s = resample_snapshot(X0, nz);
    s.time = X0.time;
    // Boundary conditions are imposed, including on the initial data.
    s.x_plus[0] = s.xi[0] + p.q0 * s.x_minus[0];
    s.x_minus[nz] = p.q1 * s.x_plus[nz] + p.b1_bar * u(s.time);

    Trajectory traj;
    traj.times.reserve(nt + 1);
    traj.y.reserve(nt + 1);
    traj.u.reserve(nt + 1);
    if (opts.store_snapshots) traj.snapshots.reserve(nt + 1);

    auto record = [&](const StateSnapshot& st, double ut) {
        traj.times.push_back(st.time);
        traj.y.push_back(p.m_plus * st.x_plus[nz] + p.d1 * ut);
        traj.u.push_back(ut);
        if (opts.store_snapshots) traj.snapshots.push_back(st);
    };
    record(s, u(s.time));

    StateSnapshot next = s;
    for (std::size_t k = 0; k < nt; ++k) {
        const double t_next = X0.time + dt * static_cast<double>(k + 1);
        for (std::size_t j = 0; j < nz; ++j)
            next.x_minus[j] =
                s.x_minus[j] + dt *
                                   ((s.x_minus[j + 1] - s.x_minus[j]) / dz -
                                    c.mu_m[j] * s.x_plus[j]) /
                                   c.sig_m[j];
        for (std::size_t j = nz; j >= 1; --j)
            next.x_plus[j] =
                s.x_plus[j] + dt *
                                  (c.mu_p[j] * s.x_minus[j] -
                                   (s.x_plus[j] - s.x_plus[j - 1]) / dz) /
                                  c.sig_p[j];
        std::vector<double> rhs = ode_rhs(F, p.g, s.xi, s.x_minus[0]);
        for (std::size_t i = 0; i < next.xi.size(); ++i) next.xi[i] = s.xi[i] + dt * rhs[i];
        const double u_next = u(t_next);
        next.x_minus[nz] = p.q1 * next.x_plus[nz] + p.b1_bar * u_next;
        next.x_plus[0] = next.xi[0] + p.q0 * next.x_minus[0];
        next.time = t_next;
        s = next;
        record(s, u_next);
    }
    return traj;
}

StateSnapshot simulate_backward(const ValidatedSystem& sys, const StateSnapshot& X_end,
                                const Samples& y_window, const SimulateOptions& opts) {
    const HyperbolicSystem& p = sys.raw();
    const TransportTimes tt = transport_times(sys);
    const std::size_t nz = X_end.nodes() - 1;
    if (nz < 4) throw ResolutionError("simulate_backward: nz must be >= 4");
    const double dz = 1.0 / static_cast<double>(nz);
    const double dt_max = max_stable_dt(p, dz, opts.cfl_safety);
    const auto nt = static_cast<std::size_t>(std::ceil(tt.tau_minus / dt_max - 1e-12));
    const double dt = tt.tau_minus / static_cast<double>(nt);
    const double duration = y_window.t_end() - y_window.t0;
    if (std::abs(duration - tt.tau_minus) > std::max(dt, y_window.dt) + 1e-12)
        throw WindowMismatch("simulate_backward: y window must span tau_minus");

    const GridCoeffs c = sample_coeffs(p, nz);
    const Mat& F = sys.companion();
    const double t_start = X_end.time - tt.tau_minus;

    StateSnapshot s = X_end;
    s.x_plus[nz] = y_window.at(y_window.t_end()) / p.m_plus;
    s.x_minus[0] = (s.x_plus[0] - s.xi[0]) / p.q0;

    StateSnapshot prev = s;
    for (std::size_t k = nt; k-- > 0;) {
        const double t_k = t_start + dt * static_cast<double>(k);
        for (std::size_t j = 1; j <= nz; ++j)
            prev.x_minus[j] =
                s.x_minus[j] - dt *
                                   ((s.x_minus[j] - s.x_minus[j - 1]) / dz -
                                    c.mu_m[j] * s.x_plus[j]) /
                                   c.sig_m[j];
        for (std::size_t j = 0; j < nz; ++j)
            prev.x_plus[j] =
                s.x_plus[j] - dt *
                                  (c.mu_p[j] * s.x_minus[j] -
                                   (s.x_plus[j + 1] - s.x_plus[j]) / dz) /
                                  c.sig_p[j];
        std::vector<double> rhs = ode_rhs(F, p.g, s.xi, s.x_minus[0]);
        for (std::size_t i = 0; i < prev.xi.size(); ++i) prev.xi[i] = s.xi[i] - dt * rhs[i];
        prev.x_plus[nz] = y_window.at(y_window.t0 + (t_k - t_start)) / p.m_plus;
        prev.x_minus[0] = (prev.x_plus[0] - prev.xi[0]) / p.q0;
        prev.time = t_k;
        s = prev;
    }
    return s;
}

ObservabilityState observability_map(const ValidatedSystem& sys, const StateSnapshot& X0,
                                     std::size_t nt) {
    if (nt < 8) throw ResolutionError("observability_map: nt must be >= 8");
    const TransportTimes tt = transport_times(sys);
    SimulateOptions opts;
    opts.store_snapshots = false;
    Trajectory traj = simulate_forward(sys, X0, InputSignal::zero(), tt.tau_hat,
                                       X0.nodes() - 1, opts);
    Samples y = traj.y_samples();
    ObservabilityState obs;
    obs.tau_hat = tt.tau_hat;
    obs.smoothness_order = 0;
    obs.ybar.resize(nt + 1);
    for (std::size_t j = 0; j <= nt; ++j) {
        double tau = tt.tau_hat * static_cast<double>(j) / static_cast<double>(nt);
        obs.ybar[j] = y.at(X0.time + std::min(tau, y.t_end() - X0.time));
    }
    return obs;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    auto out = detail::open_out(path);
    out << "t, y, u";
    std::size_t n_ode = traj.snapshots.empty() ? 0 : traj.snapshots.front().xi.size();
    for (std::size_t i = 1; i <= n_ode; ++i) out << ", xi_" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << detail::format_double(traj.times[k]) << ", "
            << detail::format_double(traj.y[k]) << ", " << detail::format_double(traj.u[k]);
        if (!traj.snapshots.empty())
            for (double xi : traj.snapshots[k].xi) out << ", " << detail::format_double(xi);
        out << "\n";
    }
}

void write_snapshot_csv(const StateSnapshot& snap, const std::string& path) {
    auto out = detail::open_out(path);
    out << "z, x_minus, x_plus\n";
    const double dz = snap.dz();
    for (std::size_t j = 0; j < snap.nodes(); ++j)
        out << detail::format_double(dz * static_cast<double>(j)) << ", "
            << detail::format_double(snap.x_minus[j]) << ", "
            << detail::format_double(snap.x_plus[j]) << "\n";
}

}  // namespace hocf
