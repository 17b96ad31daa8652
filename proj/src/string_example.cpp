#include "hocf/string_example.hpp"

#include <cmath>

namespace hocf {

namespace {

void check_params(const StringParams& p) {
    if (!(p.k > 0.0) || !(p.m > 0.0))
        throw DomainError("string example: k and m must be positive");
}

double alpha_density(const StringParams& p, double tau) {
    return p.k / p.m * (2.0 - tau) - 1.0 / p.m;
}

}  // namespace

ObservabilityForm string_ode_form(const StringParams& p) {
    check_params(p);
    Mat F(2);
    F(0, 1) = 1.0;
    F(1, 0) = -p.k / p.m;
    F(1, 1) = 1.0 / p.m;
    std::vector<double> g = {0.0, -1.0 / p.m};
    std::vector<double> c0 = {0.0, -2.0};
    return to_observability_form(F, g, c0);
}

ValidatedSystem build_string_system(const StringParams& p) {
    ObservabilityForm form = string_ode_form(p);
    HyperbolicSystem sys;
    sys.sigma_minus = CoefficientField::constant(1.0);
    sys.sigma_plus = CoefficientField::constant(1.0);
    sys.mu_minus = CoefficientField::constant(0.0);
    sys.mu_plus = CoefficientField::constant(0.0);
    sys.n = 2;
    sys.f = form.f;
    sys.g = form.g_bar;
    sys.q0 = 1.0;
    sys.q1 = -1.0;
    sys.b1_bar = 2.0;
    sys.m_plus = -1.0;
    sys.d1 = 1.0;
    return validate_system(sys);
}

std::vector<double> string_xi_physical(const StringParams& p,
                                       const std::vector<double>& xi_canonical) {
    return string_ode_form(p).O.inverse().mul(xi_canonical);
}

std::vector<double> string_xi_canonical(const StringParams& p,
                                        const std::vector<double>& xi_physical) {
    return string_ode_form(p).O.mul(xi_physical);
}

CanonicalFDE closed_form_fde(const StringParams& p, std::size_t ntau) {
    check_params(p);
    if (ntau < 8) throw ResolutionError("closed_form_fde: ntau must be >= 8");
    CanonicalFDE fde;
    fde.n = 2;
    fde.tau_hat = 2.0;
    fde.a = {2.0 * p.k / p.m, 2.0 * p.k / p.m};
    fde.alpha.tau_hat = 2.0;
    fde.alpha.atoms.emplace_back(0.0, 1.0);
    fde.alpha.density.resize(ntau + 1);
    for (std::size_t j = 0; j <= ntau; ++j)
        fde.alpha.density[j] =
            alpha_density(p, 2.0 * static_cast<double>(j) / static_cast<double>(ntau));
    return fde;
}

ObserverState closed_form_eta(const StringParams& p, const ObservabilityState& ybar) {
    check_params(p);
    if (ybar.ybar.size() < 16) throw GridTooCoarse("closed_form_eta: ybar grid too coarse");
    const std::size_t M = ybar.ybar.size() - 1;
    const double h = ybar.dtau();
    const std::vector<double>& y = ybar.ybar;
    const std::vector<double> dy = derivative(y, h);
    std::vector<double> dens(M + 1);
    for (std::size_t j = 0; j <= M; ++j)
        dens[j] = alpha_density(p, h * static_cast<double>(j));

    ObserverState out;
    out.tau_hat = 2.0;
    out.eta.resize(2);
    out.eta[0] = dy.front() + dy.back() + (y.front() - y.back()) / p.m +
                 p.k / p.m * trapz(y, h);
    std::vector<double> dy_weighted(M + 1);
    for (std::size_t j = 0; j <= M; ++j) dy_weighted[j] = dens[j] * y[j];
    out.eta[1] = y.front() + y.back() + trapz(dy_weighted, h);

    out.eta_dist.resize(M + 1);
    for (std::size_t j = 0; j <= M; ++j) {
        double v = y[M - j];
        if (j == 0) v += y[0];  // the unit atom sits at the closed lower endpoint
        if (j < M) {
            double s = 0.0;
            for (std::size_t k = j; k <= M; ++k) {
                double wq = (k == j || k == M) ? 0.5 : 1.0;
                s += wq * dens[k] * y[k - j];
            }
            v += s * h;
        }
        out.eta_dist[j] = v;
    }
    return out;
}

StateSnapshot closed_form_state(const StringParams& p, const CanonicalFDE& fde,
                                const ObservabilityState& ybar, const ObserverState& eta,
                                std::size_t nz) {
    check_params(p);
    if (ybar.ybar.size() < 16 || nz < 8)
        throw GridTooCoarse("closed_form_state: grid too coarse");
    (void)fde;
    const double h = ybar.dtau();
    const std::vector<double>& y = ybar.ybar;
    const std::size_t M = y.size() - 1;
    const Samples yb = ybar.samples();

    std::vector<double> dy_weighted(M + 1);
    for (std::size_t j = 0; j <= M; ++j)
        dy_weighted[j] = alpha_density(p, h * static_cast<double>(j)) * y[j];
    double xi1 = -p.m / (2.0 * p.k) * eta.eta[0] + 0.5 * trapz(y, h);
    double xi2 = 0.5 * (eta.eta[1] - trapz(dy_weighted, h));

    // reverse-time RK4 over [t, t+1], forcing y(s+1) = ybar(1+s)
    auto rhs = [&](double s, double a, double b) {
        return std::pair<double, double>{
            b, -p.k / p.m * a - 1.0 / p.m * b + yb.at(1.0 + s) / p.m};
    };
    const double dz = 1.0 / static_cast<double>(nz);
    std::vector<double> xi2_record(nz + 1);
    xi2_record[nz] = xi2;
    for (std::size_t j = nz; j-- > 0;) {
        double s = dz * static_cast<double>(j + 1);
        const double hs = -dz;
        auto [k1a, k1b] = rhs(s, xi1, xi2);
        auto [k2a, k2b] = rhs(s + 0.5 * hs, xi1 + 0.5 * hs * k1a, xi2 + 0.5 * hs * k1b);
        auto [k3a, k3b] = rhs(s + 0.5 * hs, xi1 + 0.5 * hs * k2a, xi2 + 0.5 * hs * k2b);
        auto [k4a, k4b] = rhs(s + hs, xi1 + hs * k3a, xi2 + hs * k3b);
        xi1 += hs / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        xi2 += hs / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        xi2_record[j] = xi2;
    }

    StateSnapshot snap;
    snap.time = 0.0;
    snap.xi = string_xi_canonical(p, {xi1, xi2});
    snap.x_minus.resize(nz + 1);
    snap.x_plus.resize(nz + 1);
    for (std::size_t j = 0; j <= nz; ++j) {
        double z = dz * static_cast<double>(j);
        // x^-(z,t) = x^-(0,t+z) = x^+(0,t+z) + 2 xi_2(t+z), x^+(0,t+z) = -ybar(1+z)
        snap.x_minus[j] = -yb.at(1.0 + z) + 2.0 * xi2_record[j];
        snap.x_plus[j] = -yb.at(1.0 - z);
    }
    return snap;
}

StateSnapshot physical_to_riemann(const StringParams& p, const std::vector<double>& dz_x,
                                  const std::vector<double>& dt_x, double xi,
                                  double xi_dot) {
    if (dz_x.size() != dt_x.size() || dz_x.size() < 2)
        throw GridError("physical_to_riemann: mismatched or degenerate grids");
    StateSnapshot snap;
    snap.time = 0.0;
    snap.x_minus.resize(dz_x.size());
    snap.x_plus.resize(dz_x.size());
    for (std::size_t j = 0; j < dz_x.size(); ++j) {
        snap.x_minus[j] = dz_x[j] + dt_x[j];
        snap.x_plus[j] = dz_x[j] - dt_x[j];
    }
    snap.xi = string_xi_canonical(p, {xi, xi_dot});
    return snap;
}

std::vector<double> riemann_to_physical(const StringParams& p, const StateSnapshot& snap) {
    if (snap.nodes() < 2 || snap.x_plus.size() != snap.nodes())
        throw GridError("riemann_to_physical: degenerate snapshot");
    std::vector<double> mean(snap.nodes());
    for (std::size_t j = 0; j < mean.size(); ++j)
        mean[j] = 0.5 * (snap.x_minus[j] + snap.x_plus[j]);
    std::vector<double> x = cumtrapz(mean, snap.dz());
    const double offset = string_xi_physical(p, snap.xi)[0];
    for (double& v : x) v += offset;
    return x;
}

double string_energy(const StringParams& p, const StateSnapshot& snap) {
    std::vector<double> xi = string_xi_physical(p, snap.xi);
    std::vector<double> sq(snap.nodes());
    for (std::size_t j = 0; j < sq.size(); ++j)
        sq[j] = snap.x_minus[j] * snap.x_minus[j] + snap.x_plus[j] * snap.x_plus[j];
    return 0.5 * p.m * xi[1] * xi[1] + 0.5 * p.k * xi[0] * xi[0] +
           0.25 * trapz(sq, snap.dz());
}

}  // namespace hocf
