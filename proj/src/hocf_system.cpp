#include "hocf/hocf_system.hpp"

#include <cmath>

#include "io_util.hpp"

namespace hocf {

HocfTrajectory simulate_hocf(const HOCFSystem& hocf, const ObserverState& eta0, double T,
                             std::size_t resolution, bool store_dist) {
    if (resolution < 8) throw ResolutionError("simulate_hocf: resolution must be >= 8");
    if (!(T > 0.0)) throw DomainError("simulate_hocf: horizon must be positive");
    const CanonicalFDE& fde = hocf.fde;
    const auto n = static_cast<std::size_t>(fde.n);
    const std::size_t M = resolution;
    const double dtau = fde.tau_hat / static_cast<double>(M);
    const auto nt = static_cast<std::size_t>(std::ceil(T / dtau - 1e-12));
    const double dt = T / static_cast<double>(nt);

    std::vector<double> dens(M + 1);
    for (std::size_t j = 0; j <= M; ++j)
        dens[j] = fde.alpha.density_at(dtau * static_cast<double>(j));
    double atom0 = 0.0;
    for (const auto& [loc, mass] : fde.alpha.atoms) {
        if (std::abs(loc) > 1e-12)
            throw DomainError("simulate_hocf: interior atoms are not supported");
        atom0 += mass;
    }

    std::vector<double> chain = eta0.eta;
    if (chain.size() != n) throw GridError("simulate_hocf: eta0 order mismatch");
    // The transported quantity is the continuous extension of eta_dist: at the
    // inflow the atom of alpha sits inside the boundary value eta_n, so the
    // value entering the domain is eta_n - atom * y.
    std::vector<double> dist(M + 1);
    const Samples d0 = eta0.dist_samples();
    for (std::size_t j = 0; j <= M; ++j) dist[j] = d0.at(dtau * static_cast<double>(j));
    dist[0] -= atom0 * dist[M];

    HocfTrajectory traj;
    traj.store_dist = store_dist;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.y.push_back(dist[M]);
        traj.eta.push_back(chain);
        if (store_dist) {
            traj.eta_dist.push_back(dist);
            traj.eta_dist.back()[0] += atom0 * dist[M];
        }
    };
    record(0.0);

    std::vector<double> next_dist(M + 1);
    for (std::size_t k = 0; k < nt; ++k) {
        const double y = dist[M];
        std::vector<double> next_chain(n);
        next_chain[0] = chain[0] - dt * fde.a[0] * y;
        for (std::size_t i = 1; i < n; ++i)
            next_chain[i] = chain[i] + dt * (chain[i - 1] - fde.a[i] * y);
        const double lam = dt / dtau;
        for (std::size_t j = M; j >= 1; --j)
            next_dist[j] = dist[j] - lam * (dist[j] - dist[j - 1]) - dt * dens[j] * y;
        next_dist[0] = next_chain[n - 1] - atom0 * next_dist[M];
        chain = next_chain;
        dist = next_dist;
        record(dt * static_cast<double>(k + 1));
    }
    return traj;
}

void write_hocf_trajectory_csv(const HocfTrajectory& traj, const std::string& path) {
    auto out = detail::open_out(path);
    std::size_t n = traj.eta.empty() ? 0 : traj.eta.front().size();
    out << "t, y";
    for (std::size_t i = 1; i <= n; ++i) out << ", eta_" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << detail::format_double(traj.times[k]) << ", "
            << detail::format_double(traj.y[k]);
        for (double e : traj.eta[k]) out << ", " << detail::format_double(e);
        out << "\n";
    }
}

}  // namespace hocf
