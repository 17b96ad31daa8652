#include "hocf/fde.hpp"

#include <cmath>

#include <json.hpp>

#include "hocf/errors.hpp"

namespace hocf {

BoundaryMatrix boundary_matrix(const ValidatedSystem& sys) {
    const HyperbolicSystem& p = sys.raw();
    BoundaryMatrix N;
    N.n1_minus = p.q1 / p.m_plus;
    N.n2_minus = (p.b1_bar * p.m_plus - p.q1 * p.d1) / p.m_plus;
    N.n1_plus = 1.0 / p.m_plus;
    N.n2_plus = -p.d1 / p.m_plus;
    return N;
}

namespace {

/// f_hat = (f, 1); g_eff extends g_hat = (g_n..g_1, q0) by the lower-triangular
/// correction D_H^T f that the successive differentiation of the boundary
/// output relation produces. Validated against the closed-form string FDE.
struct OdeCoefficients {
    std::vector<double> f_hat;
    std::vector<double> g_eff;
};

OdeCoefficients ode_coefficients(const HyperbolicSystem& p) {
    const std::size_t n = static_cast<std::size_t>(p.n);
    OdeCoefficients out;
    out.f_hat.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.f_hat[i] = p.f[i];
    out.f_hat[n] = 1.0;
    out.g_eff.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.g_eff[i] = p.g[n - 1 - i];
    out.g_eff[n] = p.q0;
    for (std::size_t c = 0; c < n; ++c) {
        double v = p.q0 * p.f[c];
        for (std::size_t r = c + 1; r < n; ++r) v += p.f[r] * p.g[r - c - 1];
        out.g_eff[c] += v;
    }
    return out;
}

}  // namespace

RawFDE assemble_raw_fde(const ValidatedSystem& sys, const KernelTable& kernels,
                        std::size_t ntau) {
    const HyperbolicSystem& p = sys.raw();
    if (std::abs(kernels.z0 - 1.0) > 1e-12)
        throw KernelDomainError("assemble_raw_fde: kernels must be anchored at z0 = 1");
    if (kernels.rows.empty() || std::abs(kernels.z_grid.front()) > 1e-12)
        throw KernelDomainError("assemble_raw_fde: kernel table does not reach z = 0");
    if (ntau < 8) throw ResolutionError("assemble_raw_fde: ntau must be >= 8");
    const TransportTimes tt = transport_times(sys);
    const BoundaryMatrix N = boundary_matrix(sys);
    const OdeCoefficients oc = ode_coefficients(p);
    const std::size_t n = static_cast<std::size_t>(p.n);

    RawFDE raw;
    raw.n = p.n;
    raw.tau_hat = tt.tau_hat;
    raw.c = oc.f_hat;
    raw.d.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) raw.d[i] = -p.q1 * oc.g_eff[i];
    raw.w.assign(n + 1, std::vector<double>(ntau + 1, 0.0));

    // Distributed parts from the z = 0 kernel row, support shifted to [0, tau_hat]
    // by the tau_minus prediction: s = tau_minus - tau.
    std::vector<double> kappa_m(ntau + 1), kappa_p(ntau + 1);
    bool any = false;
    for (std::size_t k = 0; k <= ntau; ++k) {
        double s = raw.tau_hat * static_cast<double>(k) / static_cast<double>(ntau);
        std::array<double, 4> kv = kernels.value(0.0, tt.tau_minus - s);
        kappa_m[k] = kv[0] * N.n1_minus + kv[1] * N.n1_plus;
        kappa_p[k] = kv[2] * N.n1_minus + kv[3] * N.n1_plus;
        any = any || kappa_m[k] != 0.0 || kappa_p[k] != 0.0;
    }
    if (any)
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t k = 0; k <= ntau; ++k)
                raw.w[i][k] =
                    p.m_plus * (oc.f_hat[i] * kappa_p[k] - oc.g_eff[i] * kappa_m[k]);
    return raw;
}

CanonicalFDE reduce_to_canonical(const RawFDE& raw) {
    const std::size_t n = static_cast<std::size_t>(raw.n);
    if (std::abs(raw.c[n] - 1.0) > 1e-9)
        throw DomainError("reduce_to_canonical: leading coefficient must be 1");
    std::vector<double> c = raw.c;
    std::vector<double> d = raw.d;
    std::vector<std::vector<double>> w = raw.w;
    const double h = raw.ds();

    for (std::size_t i = 0; i < n; ++i) {
        // y^(i)(t+tau_hat) -> y^(i)(t) + int y^(i+1).
        if (c[i] != 0.0) {
            d[i] += c[i];
            for (double& v : w[i + 1]) v += c[i];
            c[i] = 0.0;
        }
        // int w_i y^(i)(t+s) ds -> (int w_i) y^(i)(t) + int W_i y^(i+1).
        d[i] += trapz(w[i], h);
        std::vector<double> tail = tail_integrals(w[i], h);
        for (std::size_t k = 0; k < w[i].size(); ++k) w[i + 1][k] += tail[k];
        std::fill(w[i].begin(), w[i].end(), 0.0);
    }

    CanonicalFDE out;
    out.n = raw.n;
    out.tau_hat = raw.tau_hat;
    out.a.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n));
    out.alpha.tau_hat = raw.tau_hat;
    out.alpha.density = w[n];
    if (d[n] != 0.0) out.alpha.atoms.emplace_back(0.0, d[n]);
    return out;
}

namespace {

struct ResidualContext {
    std::vector<std::vector<double>> stacks;  // derivative stacks as Samples values
    double t0, dt;

    double eval(std::size_t order, double t) const {
        return Samples{t0, dt, stacks[order]}.at(t);
    }
};

ResidualContext make_context(const Samples& y, int n, double tau_hat) {
    if (y.size() < 16) throw WindowTooShort("fde residual: record too short");
    if (y.t_end() - y.t0 < tau_hat + 8.0 * y.dt)
        throw WindowTooShort("fde residual: record shorter than tau_hat plus margin");
    ResidualContext ctx;
    ctx.stacks = derivative_stack(y.values, y.dt, n);
    ctx.t0 = y.t0;
    ctx.dt = y.dt;
    return ctx;
}

}  // namespace

double fde_residual(const CanonicalFDE& fde, const Samples& y) {
    const auto n = static_cast<std::size_t>(fde.n);
    ResidualContext ctx = make_context(y, fde.n, fde.tau_hat);
    const double dtau = fde.alpha.dtau();
    const std::size_t m = fde.alpha.density.size();
    const std::size_t margin = 4;
    double worst = 0.0;
    for (std::size_t j = margin; j < y.size() - margin; ++j) {
        double t = y.t0 + y.dt * static_cast<double>(j);
        if (t + fde.tau_hat > y.t_end() - static_cast<double>(margin) * y.dt) break;
        double r = ctx.eval(n, t + fde.tau_hat);
        for (std::size_t i = 0; i < n; ++i) r += fde.a[i] * ctx.eval(i, t);
        for (const auto& [loc, mass] : fde.alpha.atoms) r += mass * ctx.eval(n, t + loc);
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            double wq = (k == 0 || k + 1 == m) ? 0.5 : 1.0;
            s += wq * fde.alpha.density[k] * ctx.eval(n, t + dtau * static_cast<double>(k));
        }
        r += s * dtau;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double raw_fde_residual(const RawFDE& raw, const Samples& y) {
    const auto n = static_cast<std::size_t>(raw.n);
    ResidualContext ctx = make_context(y, raw.n, raw.tau_hat);
    const double h = raw.ds();
    const std::size_t m = raw.w.front().size();
    const std::size_t margin = 4;
    double worst = 0.0;
    for (std::size_t j = margin; j < y.size() - margin; ++j) {
        double t = y.t0 + y.dt * static_cast<double>(j);
        if (t + raw.tau_hat > y.t_end() - static_cast<double>(margin) * y.dt) break;
        double r = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            r += raw.c[i] * ctx.eval(i, t + raw.tau_hat) + raw.d[i] * ctx.eval(i, t);
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                double wq = (k == 0 || k + 1 == m) ? 0.5 : 1.0;
                s += wq * raw.w[i][k] * ctx.eval(i, t + h * static_cast<double>(k));
            }
            r += s * h;
        }
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

using nlohmann::json;

std::string canonical_fde_to_json(const CanonicalFDE& fde) {
    json j;
    j["n"] = fde.n;
    j["tau_hat"] = fde.tau_hat;
    j["a"] = fde.a;
    json atoms = json::array();
    for (const auto& [loc, mass] : fde.alpha.atoms) atoms.push_back({loc, mass});
    j["atoms"] = atoms;
    std::vector<double> grid(fde.alpha.density.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = fde.alpha.dtau() * static_cast<double>(k);
    j["density"] = {{"grid", grid}, {"values", fde.alpha.density}};
    return j.dump(2);
}

CanonicalFDE parse_canonical_fde_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
        CanonicalFDE fde;
        fde.n = j.at("n").get<int>();
        fde.tau_hat = j.at("tau_hat").get<double>();
        fde.a = j.at("a").get<std::vector<double>>();
        for (const auto& atom : j.at("atoms"))
            fde.alpha.atoms.emplace_back(atom.at(0).get<double>(), atom.at(1).get<double>());
        fde.alpha.density = j.at("density").at("values").get<std::vector<double>>();
        fde.alpha.tau_hat = fde.tau_hat;
        return fde;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("canonical FDE file error: ") + e.what());
    }
}

}  // namespace hocf
