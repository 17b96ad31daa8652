#include "hocf/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "io_util.hpp"

namespace hocf {

namespace {

constexpr int kMM = 0, kMP = 1, kPM = 2, kPP = 3;

struct Geometry {
    const HyperbolicSystem* sys;
    double z0;

    double gamma_plus(double a, double b) const { return sys->sigma_plus.integral(a, b); }
    double gamma_minus(double a, double b) const { return sys->sigma_minus.integral(a, b); }

    // Characteristic of the k^{+.} equations through (z, tau), dtau/ds = +sigma^+.
    double tau_on_plus_path(double z, double tau, double s) const {
        return tau + gamma_plus(z, s);
    }
    // Characteristic of the k^{-.} equations, dtau/ds = -sigma^-.
    double tau_on_minus_path(double z, double tau, double s) const {
        return tau - gamma_minus(z, s);
    }

    // Upper boundary curve tau = gamma^-(z0; z), lower tau = -gamma^+(z0; z).
    double upper(double z) const { return gamma_minus(z, z0); }
    double lower(double z) const { return -gamma_plus(z, z0); }

    /// Where the k^{+.} characteristic through (z,tau) meets the upper curve.
    double hit_upper(double z, double tau) const {
        double lo = z, hi = z0;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            double h = tau_on_plus_path(z, tau, mid) - upper(mid);
            (h < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// Where the k^{-.} characteristic through (z,tau) meets the lower curve.
    double hit_lower(double z, double tau) const {
        double lo = z, hi = z0;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            double h = tau_on_minus_path(z, tau, mid) - lower(mid);
            (h > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    double bc_pm(double z) const {
        return sys->mu_plus.value(z) / (sys->sigma_plus.value(z) + sys->sigma_minus.value(z));
    }
    double bc_mp(double z) const {
        return sys->mu_minus.value(z) / (sys->sigma_plus.value(z) + sys->sigma_minus.value(z));
    }
};

}  // namespace

std::array<double, 4> KernelTable::value(double z, double tau) const {
    if (rows.empty()) throw KernelDomainError("kernel table is empty");
    if (z < -1e-12 || z > z0 + 1e-12)
        throw KernelDomainError("kernel query outside [0, z0]");
    double pos = std::clamp(z / z0, 0.0, 1.0) * static_cast<double>(rows.size() - 1);
    auto j = static_cast<std::size_t>(pos);
    if (j + 1 >= rows.size()) j = rows.size() - 2;
    double wz = pos - static_cast<double>(j);

    auto row_value = [tau](const Row& row) {
        if (row.k.size() == 1) return row.k.front();
        double t = std::clamp(tau, row.tau_lo, row.tau_hi);
        double p = (t - row.tau_lo) / (row.tau_hi - row.tau_lo) *
                   static_cast<double>(row.k.size() - 1);
        auto i = static_cast<std::size_t>(p);
        if (i + 1 >= row.k.size()) i = row.k.size() - 2;
        double w = p - static_cast<double>(i);
        std::array<double, 4> out{};
        for (int c = 0; c < 4; ++c)
            out[c] = (1.0 - w) * row.k[i][c] + w * row.k[i + 1][c];
        return out;
    };
    std::array<double, 4> a = row_value(rows[j]);
    std::array<double, 4> b = row_value(rows[j + 1]);
    std::array<double, 4> out{};
    for (int c = 0; c < 4; ++c) out[c] = (1.0 - wz) * a[c] + wz * b[c];
    return out;
}

bool KernelTable::all_zero(double tol) const {
    for (const Row& row : rows)
        for (const auto& k : row.k)
            for (double v : k)
                if (std::abs(v) > tol) return false;
    return true;
}

KernelTable solve_kernels(const ValidatedSystem& vsys, double z0, std::size_t resolution,
                          double tol) {
    if (z0 <= 0.0 || z0 > 1.0 + 1e-12)
        throw DomainError("solve_kernels: z0 must lie in (0, 1]");
    if (resolution < 4) throw ResolutionError("solve_kernels: resolution must be >= 4");
    if (!(tol > 0.0)) throw DomainError("solve_kernels: tol must be positive");
    const HyperbolicSystem& sys = vsys.raw();
    Geometry geo{&sys, z0};

    KernelTable table;
    table.z0 = z0;
    const std::size_t R = resolution;
    table.z_grid.resize(R + 1);
    table.rows.resize(R + 1);
    const double width0 = geo.upper(0.0) - geo.lower(0.0);
    for (std::size_t j = 0; j <= R; ++j) {
        double z = z0 * static_cast<double>(j) / static_cast<double>(R);
        table.z_grid[j] = z;
        KernelTable::Row& row = table.rows[j];
        row.tau_lo = geo.lower(z);
        row.tau_hi = geo.upper(z);
        double width = row.tau_hi - row.tau_lo;
        std::size_t m =
            (j == R) ? 0
                     : std::max<std::size_t>(
                           2, static_cast<std::size_t>(std::ceil(
                                  static_cast<double>(R) * width / width0)));
        row.k.assign(m + 1, {0.0, 0.0, 0.0, 0.0});
    }

    const double dz_row = z0 / static_cast<double>(R);

    // One characteristic-path integral: trapezoid of mu(s) * source(s, tau(s)).
    auto path_integral = [&](double z, double tau, double z_b, bool plus_family,
                             int source_a, int source_b, double& int_a, double& int_b) {
        int_a = 0.0;
        int_b = 0.0;
        double len = z_b - z;
        if (len <= 1e-14) return;
        auto nq = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(len / dz_row)) + 1);
        double ds = len / static_cast<double>(nq - 1);
        double prev_a = 0.0, prev_b = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            double s = z + ds * static_cast<double>(q);
            double taus = plus_family ? geo.tau_on_plus_path(z, tau, s)
                                      : geo.tau_on_minus_path(z, tau, s);
            double mu = plus_family ? sys.mu_plus.value(std::min(s, 1.0))
                                    : sys.mu_minus.value(std::min(s, 1.0));
            std::array<double, 4> k = table.value(std::min(s, z0), taus);
            double fa = mu * k[static_cast<std::size_t>(source_a)];
            double fb = mu * k[static_cast<std::size_t>(source_b)];
            if (q > 0) {
                int_a += 0.5 * ds * (prev_a + fa);
                int_b += 0.5 * ds * (prev_b + fb);
            }
            prev_a = fa;
            prev_b = fb;
        }
    };

    double change = 0.0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        change = 0.0;
        std::vector<KernelTable::Row> next = table.rows;
        for (std::size_t j = 0; j <= R; ++j) {
            KernelTable::Row& row = next[j];
            const double z = table.z_grid[j];
            const double dtau = row.dtau();
            for (std::size_t i = 0; i < row.k.size(); ++i) {
                double tau = row.k.size() == 1 ? 0.0
                                               : row.tau_lo + dtau * static_cast<double>(i);
                // k^{+-}, k^{++}: data on the upper curve, integrate back along
                // the +sigma^+ characteristic.
                double zb_up = geo.hit_upper(z, tau);
                double ia, ib;
                path_integral(z, tau, zb_up, true, kMM, kMP, ia, ib);
                double v_pm = geo.bc_pm(zb_up) - ia;
                double v_pp = 0.0 - ib;
                // k^{--}, k^{-+}: data on the lower curve.
                double zb_lo = geo.hit_lower(z, tau);
                path_integral(z, tau, zb_lo, false, kPM, kPP, ia, ib);
                double v_mm = 0.0 - ia;
                double v_mp = geo.bc_mp(zb_lo) - ib;

                change = std::max({change, std::abs(v_mm - row.k[i][kMM]),
                                   std::abs(v_mp - row.k[i][kMP]),
                                   std::abs(v_pm - row.k[i][kPM]),
                                   std::abs(v_pp - row.k[i][kPP])});
                row.k[i] = {v_mm, v_mp, v_pm, v_pp};
            }
        }
        table.rows = std::move(next);
        if (change < tol) return table;
    }
    throw NoConvergence("solve_kernels: successive approximation did not reach tolerance");
}

std::pair<std::vector<double>, std::vector<double>> kernel_convolve(
    const KernelTable& table, double z, const TracePair& trace,
    const std::vector<double>& eval_times) {
    if (trace.minus.size() != trace.plus.size() ||
        std::abs(trace.minus.t0 - trace.plus.t0) > 1e-12)
        throw GridError("kernel_convolve: trace components must share one grid");
    double pos = std::clamp(z / table.z0, 0.0, 1.0) *
                 static_cast<double>(table.rows.size() - 1);
    // Interpolated tau bounds at z.
    auto j0 = static_cast<std::size_t>(pos);
    if (j0 + 1 >= table.rows.size()) j0 = table.rows.size() - 2;
    double w = pos - static_cast<double>(j0);
    double tau_lo = (1.0 - w) * table.rows[j0].tau_lo + w * table.rows[j0 + 1].tau_lo;
    double tau_hi = (1.0 - w) * table.rows[j0].tau_hi + w * table.rows[j0 + 1].tau_hi;

    auto nq = std::max<std::size_t>(
        4, std::max(table.rows[j0].k.size(),
                    static_cast<std::size_t>(std::ceil(
                        (tau_hi - tau_lo) / std::max(trace.minus.dt, 1e-12)))));
    std::vector<double> out_m(eval_times.size(), 0.0), out_p(eval_times.size(), 0.0);
    if (tau_hi - tau_lo < 1e-14) return {out_m, out_p};
    double dq = (tau_hi - tau_lo) / static_cast<double>(nq);
    for (std::size_t e = 0; e < eval_times.size(); ++e) {
        double t = eval_times[e];
        if (!trace.minus.covers(t - tau_hi) || !trace.minus.covers(t - tau_lo))
            throw InsufficientTrace("kernel_convolve: trace window too short");
        double sm = 0.0, sp = 0.0;
        for (std::size_t q = 0; q <= nq; ++q) {
            double tau = tau_lo + dq * static_cast<double>(q);
            std::array<double, 4> k = table.value(z, tau);
            double xm = trace.minus.at(t - tau);
            double xp = trace.plus.at(t - tau);
            double wq = (q == 0 || q == nq) ? 0.5 : 1.0;
            sm += wq * (k[kMM] * xm + k[kMP] * xp);
            sp += wq * (k[kPM] * xm + k[kPP] * xp);
        }
        out_m[e] = sm * dq;
        out_p[e] = sp * dq;
    }
    return {out_m, out_p};
}

void write_kernels_csv(const KernelTable& table, const std::string& path) {
    auto out = detail::open_out(path);
    out << "z, tau, kmm, kmp, kpm, kpp\n";
    for (std::size_t j = 0; j < table.rows.size(); ++j) {
        const KernelTable::Row& row = table.rows[j];
        double dtau = row.dtau();
        for (std::size_t i = 0; i < row.k.size(); ++i) {
            double tau = row.k.size() == 1 ? 0.0 : row.tau_lo + dtau * static_cast<double>(i);
            out << detail::format_double(table.z_grid[j]) << ", "
                << detail::format_double(tau);
            for (int c = 0; c < 4; ++c)
                out << ", " << detail::format_double(row.k[i][static_cast<std::size_t>(c)]);
            out << "\n";
        }
    }
}

}  // namespace hocf
