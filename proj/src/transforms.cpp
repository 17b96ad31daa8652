#include "hocf/transforms.hpp"

#include <cmath>

#include <json.hpp>

#include "hocf/errors.hpp"

namespace hocf {

namespace {

std::vector<double> resample_density(const AlphaMeasure& alpha, std::size_t count) {
    if (alpha.density.size() == count) return alpha.density;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = alpha.density_at(alpha.tau_hat * static_cast<double>(k) /
                                  static_cast<double>(count - 1));
    return out;
}

double trap_weight(std::size_t k, std::size_t lo, std::size_t hi) {
    return (k == lo || k == hi) ? 0.5 : 1.0;
}

void check_resolution(const ObservabilityState& ybar, int n) {
    if (ybar.ybar.size() < std::max<std::size_t>(8 * static_cast<std::size_t>(n), 9))
        throw GridTooCoarse("ybar grid too coarse for order-n derivative stacks");
}

Mat lower_toeplitz_dh(const HyperbolicSystem& p) {
    const auto n = static_cast<std::size_t>(p.n);
    Mat D(n);
    for (std::size_t r = 0; r < n; ++r) {
        D(r, r) = p.q0;
        for (std::size_t c = 0; c < r; ++c) D(r, c) = p.g[r - c - 1];
    }
    return D;
}

}  // namespace

ObserverState obs_to_observer(const CanonicalFDE& fde, const ObservabilityState& ybar) {
    check_resolution(ybar, fde.n);
    const auto n = static_cast<std::size_t>(fde.n);
    const std::size_t M = ybar.ybar.size() - 1;
    const double h = ybar.dtau();
    const std::vector<double> dens = resample_density(fde.alpha, M + 1);
    const auto stacks = derivative_stack(ybar.ybar, h, fde.n);

    ObserverState out;
    out.tau_hat = fde.tau_hat;
    out.eta.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        // eta_{n-i}(t) = y^(i)(t+tau_hat) + (a_n* y^(i))(t) + sum a_{n-j} y^(i-j)(t)
        const std::vector<double>& Yi = stacks[i];
        double v = Yi.back();
        Samples yi{0.0, h, Yi};
        for (const auto& [loc, mass] : fde.alpha.atoms) v += mass * yi.at(loc);
        double s = 0.0;
        for (std::size_t k = 0; k <= M; ++k) s += trap_weight(k, 0, M) * dens[k] * Yi[k];
        v += s * h;
        for (std::size_t j = 1; j <= i; ++j) v += fde.a[n - j] * stacks[i - j].front();
        out.eta[n - i - 1] = v;
    }

    out.eta_dist.assign(M + 1, 0.0);
    const std::vector<double>& y0 = ybar.ybar;
    for (std::size_t j = 0; j <= M; ++j) {
        double tau = h * static_cast<double>(j);
        double v = y0[M - j];
        double s = 0.0;
        for (std::size_t k = j; k <= M; ++k)
            s += trap_weight(k, j, M) * dens[k] * y0[k - j];
        if (j < M) v += s * h;
        for (const auto& [loc, mass] : fde.alpha.atoms) {
            // closed lower endpoint only at tau = 0
            if (loc > tau + 1e-12 || (j == 0 && std::abs(loc) <= 1e-12))
                v += mass * Samples{0.0, h, y0}.at(loc - tau);
        }
        out.eta_dist[j] = v;
    }
    return out;
}

ObservabilityState observer_to_obs(const CanonicalFDE& fde, const ObserverState& eta) {
    if (eta.eta_dist.size() < 9)
        throw GridTooCoarse("observer_to_obs: eta_dist grid too coarse");
    const std::size_t M = eta.eta_dist.size() - 1;
    const double h = eta.dtau();
    const std::vector<double> dens = resample_density(fde.alpha, M + 1);

    std::vector<double> y(M + 1, 0.0);
    y[0] = eta.eta_dist[M];
    for (std::size_t j = M; j-- > 0;) {
        const std::size_t r = M - j;  // index being determined
        double rhs = eta.eta_dist[j];
        for (std::size_t k = j; k < M; ++k)
            rhs -= h * trap_weight(k, j, M) * dens[k] * y[k - j];
        if (j == 0) {
            for (const auto& [loc, mass] : fde.alpha.atoms) {
                if (std::abs(loc) <= 1e-12)
                    rhs -= mass * y[0];
                else if (loc > 1e-12)
                    rhs -= mass * Samples{0.0, h, y}.at(loc);
            }
        }
        double diag = 1.0 + 0.5 * h * dens[M];
        if (std::abs(diag) < 1e-12)
            throw SingularMarch("observer_to_obs: vanishing march coefficient");
        y[r] = rhs / diag;
    }
    ObservabilityState out;
    out.tau_hat = fde.tau_hat;
    out.ybar = std::move(y);
    out.smoothness_order = fde.n;
    return out;
}

StateSnapshot parameterize_state_shifted(const ValidatedSystem& sys,
                                         const KernelTable& kernels,
                                         const CanonicalFDE& fde,
                                         const ObservabilityState& ybar, std::size_t nz) {
    check_resolution(ybar, sys.n());
    const HyperbolicSystem& p = sys.raw();
    const TransportTimes tt = transport_times(sys);
    const BoundaryMatrix N = boundary_matrix(sys);
    const auto n = static_cast<std::size_t>(p.n);
    const std::size_t M = ybar.ybar.size() - 1;
    const double h = ybar.dtau();
    const auto stacks = derivative_stack(ybar.ybar, h, std::max(1, p.n - 1));
    const bool no_kernels = kernels.all_zero();
    (void)fde;

    // kappa^{-/+}_z(tau): the z-row of the kernel contracted with N's first column.
    auto kappa = [&](double z, double tau) {
        std::array<double, 4> k = kernels.value(z, tau);
        return std::pair<double, double>{k[0] * N.n1_minus + k[1] * N.n1_plus,
                                         k[2] * N.n1_minus + k[3] * N.n1_plus};
    };

    // ODE state: xi = P+ y^[n-1] - D_H P- y^[n-1], all shifts landing in [0, tau_hat].
    std::vector<double> Pp(n, 0.0), Pm(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double>& Yi = stacks[i];
        double conv_p = 0.0, conv_m = 0.0;
        if (!no_kernels) {
            for (std::size_t k = 0; k <= M; ++k) {
                double s = h * static_cast<double>(k);
                auto [km, kp] = kappa(0.0, tt.tau_minus - s);
                double wq = trap_weight(k, 0, M);
                conv_m += wq * km * Yi[k];
                conv_p += wq * kp * Yi[k];
            }
            conv_m *= h;
            conv_p *= h;
        }
        Pp[i] = N.n1_plus * Yi.back() + conv_p;
        Pm[i] = N.n1_minus * Yi.front() + conv_m;
    }
    const Mat D = lower_toeplitz_dh(p);
    std::vector<double> DPm = D.mul(Pm);

    StateSnapshot snap;
    snap.xi.resize(n);
    for (std::size_t i = 0; i < n; ++i) snap.xi[i] = Pp[i] - DPm[i];
    snap.time = tt.tau_minus;
    snap.x_minus.resize(nz + 1);
    snap.x_plus.resize(nz + 1);
    const Samples yb = ybar.samples();
    for (std::size_t j = 0; j <= nz; ++j) {
        double z = static_cast<double>(j) / static_cast<double>(nz);
        double gm = characteristic_time(sys, Branch::minus, z, 1.0);
        double gp = characteristic_time(sys, Branch::plus, z, 1.0);
        double xm = N.n1_minus * yb.at(tt.tau_minus - gm);
        double xp = N.n1_plus * yb.at(tt.tau_minus + gp);
        if (!no_kernels && gm + gp > 1e-14) {
            auto nq = std::max<std::size_t>(4, static_cast<std::size_t>(
                                                   std::ceil((gm + gp) / h)));
            double ds = (gm + gp) / static_cast<double>(nq);
            double sm = 0.0, sp = 0.0;
            for (std::size_t q = 0; q <= nq; ++q) {
                double s = tt.tau_minus - gm + ds * static_cast<double>(q);
                auto [km, kp] = kappa(z, tt.tau_minus - s);
                double wq = (q == 0 || q == nq) ? 0.5 : 1.0;
                sm += wq * km * yb.at(s);
                sp += wq * kp * yb.at(s);
            }
            xm += sm * ds;
            xp += sp * ds;
        }
        snap.x_minus[j] = xm;
        snap.x_plus[j] = xp;
    }
    return snap;
}

StateSnapshot obs_to_state(const ValidatedSystem& sys, const KernelTable& kernels,
                           const CanonicalFDE& fde, const ObservabilityState& ybar,
                           std::size_t nz) {
    const TransportTimes tt = transport_times(sys);
    StateSnapshot shifted = parameterize_state_shifted(sys, kernels, fde, ybar, nz);
    const Samples yb = ybar.samples();
    auto count = std::max<std::size_t>(9, static_cast<std::size_t>(
                                              std::ceil(tt.tau_minus / yb.dt)) + 1);
    Samples window = uniform_samples(0.0, tt.tau_minus, count);
    for (std::size_t k = 0; k < count; ++k)
        window.values[k] = yb.at(window.dt * static_cast<double>(k));
    StateSnapshot out = simulate_backward(sys, shifted, window);
    out.time = 0.0;
    return out;
}

using nlohmann::json;

std::string observer_state_to_json(const ObserverState& s) {
    json j;
    j["eta"] = s.eta;
    std::vector<double> grid(s.eta_dist.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = s.dtau() * static_cast<double>(k);
    j["eta_dist"] = {{"grid", grid}, {"values", s.eta_dist}};
    j["tau_hat"] = s.tau_hat;
    return j.dump(2);
}

ObserverState parse_observer_state_json(const std::string& text) {
    try {
        json j = json::parse(text);
        ObserverState s;
        s.eta = j.at("eta").get<std::vector<double>>();
        s.eta_dist = j.at("eta_dist").at("values").get<std::vector<double>>();
        s.tau_hat = j.at("tau_hat").get<double>();
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("observer state file error: ") + e.what());
    }
}

}  // namespace hocf
