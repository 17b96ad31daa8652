#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hocf/hocf_system.hpp"
#include "hocf/string_example.hpp"
#include "../src/io_util.hpp"

namespace {

using namespace hocf;

struct RunConfig {
    std::string system;
    std::string state;
    std::string out = ".";
    std::size_t nz = 128;
    std::size_t nt = 0;
    double T = 0.0;
    double tol = 0.0;
};

ValidatedSystem resolve_system(const std::string& arg) {
    if (arg.rfind("string:", 0) == 0) {
        StringParams p;
        std::istringstream in(arg.substr(7));
        char comma = 0;
        if (!(in >> p.k >> comma >> p.m) || comma != ',')
            throw ConfigError("expected string:k,m, got \"" + arg + "\"");
        return build_string_system(p);
    }
    return validate_system(load_system(arg));
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    return (std::filesystem::path(cfg.out) / name).string();
}

std::size_t thread_cap(std::size_t want) {
    if (const char* env = std::getenv("HOCF_KIT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || v < 1) throw ConfigError("HOCF_KIT_THREADS must be a positive integer");
        want = std::min<std::size_t>(want, static_cast<std::size_t>(v));
    }
    return std::max<std::size_t>(1, want);
}

/// Fixed-seed smooth output window; every command that needs a nontrivial
/// state derives it from this so runs stay reproducible.
ObservabilityState smooth_window(double tau_hat, std::size_t count, unsigned seed = 7) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(0.2, 1.0), phase(0.0, 6.28318);
    ObservabilityState w;
    w.tau_hat = tau_hat;
    w.ybar.assign(count, 0.0);
    for (int j = 1; j <= 3; ++j) {
        double a = amp(rng) / j, ph = phase(rng);
        double om = 3.14159265358979 * j / tau_hat;
        for (std::size_t i = 0; i < count; ++i) {
            double tau = tau_hat * static_cast<double>(i) / static_cast<double>(count - 1);
            w.ybar[i] += a * std::sin(om * tau + ph);
        }
    }
    return w;
}

void write_svg(const std::string& path, const std::vector<double>& t,
               const std::vector<std::vector<double>>& curves) {
    const int W = 640, H = 360, pad = 40;
    double ymin = 1e300, ymax = -1e300;
    for (const auto& c : curves)
        for (double v : c) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax - ymin < 1e-12) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    auto out = detail::open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad
        << "\" height=\"" << H - 2 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
    const char* colors[] = {"steelblue", "firebrick", "seagreen"};
    for (std::size_t c = 0; c < curves.size(); ++c) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[c % 3] << "\" points=\"";
        for (std::size_t j = 0; j < t.size(); ++j) {
            double x = pad + (W - 2.0 * pad) * (t[j] - t.front()) / (t.back() - t.front());
            double y = H - pad - (H - 2.0 * pad) * (curves[c][j] - ymin) / (ymax - ymin);
            out << detail::format_double(x) << "," << detail::format_double(y) << " ";
        }
        out << "\"/>\n";
    }
    out << "<text x=\"4\" y=\"" << pad << "\" font-size=\"12\">"
        << detail::format_double(ymax) << "</text>\n<text x=\"4\" y=\"" << H - pad
        << "\" font-size=\"12\">" << detail::format_double(ymin) << "</text>\n</svg>\n";
}

struct Pipeline {
    ValidatedSystem sys;
    TransportTimes times;
    KernelTable kernels;
    CanonicalFDE fde;
};

Pipeline build_pipeline(const RunConfig& cfg) {
    Pipeline p{resolve_system(cfg.system), {}, {}, {}};
    p.times = transport_times(p.sys);
    p.kernels = solve_kernels(p.sys, 1.0, std::max<std::size_t>(cfg.nz, 32),
                              cfg.tol > 0.0 ? cfg.tol : 1e-10);
    RawFDE raw = assemble_raw_fde(p.sys, p.kernels, std::max<std::size_t>(2 * cfg.nz, 64));
    p.fde = reduce_to_canonical(raw);
    return p;
}

ObservabilityState default_window(const Pipeline& p, std::size_t count) {
    ObservabilityState w = smooth_window(p.times.tau_hat, count);
    w.smoothness_order = p.sys.n();
    return w;
}

std::size_t window_count(const Pipeline& p, const RunConfig& cfg) {
    std::size_t nt = cfg.nt;
    if (nt == 0)
        nt = static_cast<std::size_t>(std::ceil(p.times.tau_hat * static_cast<double>(cfg.nz)));
    return std::max<std::size_t>(nt, 32) + 1;
}

int cmd_simulate(const RunConfig& cfg) {
    ValidatedSystem sys = resolve_system(cfg.system);
    TransportTimes tt = transport_times(sys);
    double T = cfg.T > 0.0 ? cfg.T : 3.0 * tt.tau_hat;
    Trajectory traj = simulate_forward(sys, zero_snapshot(cfg.nz, static_cast<std::size_t>(sys.n())),
                                       InputSignal::zero(), T, cfg.nz);
    write_trajectory_csv(traj, out_path(cfg, "traj.csv"));
    write_svg(out_path(cfg, "y.svg"), traj.times, {traj.y});
    std::cout << "wrote traj.csv, y.svg (" << traj.times.size() << " steps)\n";
    return 0;
}

int cmd_kernels(const RunConfig& cfg) {
    ValidatedSystem sys = resolve_system(cfg.system);
    KernelTable table = solve_kernels(sys, 1.0, std::max<std::size_t>(cfg.nz, 32),
                                      cfg.tol > 0.0 ? cfg.tol : 1e-10);
    write_kernels_csv(table, out_path(cfg, "kernels.csv"));
    std::cout << "wrote kernels.csv (" << table.rows.size() << " rows)\n";
    return 0;
}

int cmd_canonical(const RunConfig& cfg) {
    Pipeline p = build_pipeline(cfg);
    write_kernels_csv(p.kernels, out_path(cfg, "kernels.csv"));
    detail::open_out(out_path(cfg, "fde.json")) << canonical_fde_to_json(p.fde) << "\n";
    std::cout << "wrote kernels.csv, fde.json (n=" << p.fde.n
              << ", tau_hat=" << detail::format_double(p.fde.tau_hat) << ")\n";
    return 0;
}

ObservabilityState load_or_default_window(const Pipeline& p, const RunConfig& cfg) {
    if (!cfg.state.empty()) {
        std::ifstream in(cfg.state);
        if (!in) throw IOError("cannot read state file: " + cfg.state);
        std::stringstream buf;
        buf << in.rdbuf();
        ObserverState eta = parse_observer_state_json(buf.str());
        return observer_to_obs(p.fde, eta);
    }
    return default_window(p, window_count(p, cfg));
}

int cmd_to_hocf(const RunConfig& cfg) {
    Pipeline p = build_pipeline(cfg);
    ObservabilityState w = default_window(p, window_count(p, cfg));
    ObserverState eta = obs_to_observer(p.fde, w);
    detail::open_out(out_path(cfg, "observer.json")) << observer_state_to_json(eta) << "\n";
    std::cout << "wrote observer.json\n";
    return 0;
}

int cmd_from_hocf(const RunConfig& cfg) {
    Pipeline p = build_pipeline(cfg);
    if (cfg.state.empty()) throw ConfigError("from-hocf requires --state observer.json");
    ObservabilityState w = load_or_default_window(p, cfg);
    StateSnapshot snap = obs_to_state(p.sys, p.kernels, p.fde, w, cfg.nz);
    write_snapshot_csv(snap, out_path(cfg, "state.csv"));
    nlohmann::json j;
    j["xi"] = snap.xi;
    j["time"] = snap.time;
    detail::open_out(out_path(cfg, "state.json")) << j.dump(2) << "\n";
    std::cout << "wrote state.csv, state.json\n";
    return 0;
}

int cmd_simulate_hocf(const RunConfig& cfg) {
    Pipeline p = build_pipeline(cfg);
    double T = cfg.T > 0.0 ? cfg.T : 3.0 * p.times.tau_hat;
    ObservabilityState w = load_or_default_window(p, cfg);
    ObserverState eta0 = obs_to_observer(p.fde, w);
    HocfTrajectory traj = simulate_hocf({p.fde}, eta0, T, w.ybar.size() - 1);
    write_hocf_trajectory_csv(traj, out_path(cfg, "hocf_traj.csv"));
    write_svg(out_path(cfg, "y.svg"), traj.times, {traj.y});
    std::cout << "wrote hocf_traj.csv, y.svg (" << traj.times.size() << " steps)\n";
    return 0;
}

double snapshot_l2_diff(const StateSnapshot& a, const StateSnapshot& b) {
    StateSnapshot rb = resample_snapshot(b, a.nodes() - 1);
    std::vector<double> diff;
    for (std::size_t j = 0; j < a.nodes(); ++j) {
        diff.push_back(a.x_minus[j] - rb.x_minus[j]);
        diff.push_back(a.x_plus[j] - rb.x_plus[j]);
    }
    double s = l2_norm(diff, a.dz());
    for (std::size_t i = 0; i < a.xi.size(); ++i) {
        double d = a.xi[i] - rb.xi[i];
        s = std::hypot(s, d);
    }
    return s;
}

double snapshot_l2(const StateSnapshot& a) {
    return snapshot_l2_diff(a, zero_snapshot(a.nodes() - 1, a.xi.size()));
}

int cmd_roundtrip(const RunConfig& cfg) {
    RunConfig base = cfg;
    std::vector<std::size_t> sizes = {cfg.nz, 2 * cfg.nz, 4 * cfg.nz};
    std::vector<double> errors(sizes.size(), 0.0);
    std::vector<std::string> failures(sizes.size());
    auto run = [&](std::size_t idx) {
        try {
            RunConfig c = base;
            c.nz = sizes[idx];
            Pipeline p = build_pipeline(c);
            ObservabilityState w = default_window(p, window_count(p, c));
            StateSnapshot X0 = obs_to_state(p.sys, p.kernels, p.fde, w, c.nz);
            ObservabilityState w1 = observability_map(p.sys, X0, w.ybar.size() - 1);
            ObserverState eta = obs_to_observer(p.fde, w1);
            ObservabilityState w2 = observer_to_obs(p.fde, eta);
            StateSnapshot X1 = obs_to_state(p.sys, p.kernels, p.fde, w2, c.nz);
            errors[idx] = snapshot_l2_diff(X0, X1) / std::max(snapshot_l2(X0), 1e-12);
        } catch (const std::exception& e) {
            failures[idx] = e.what();
        }
    };
    std::size_t cap = thread_cap(sizes.size());
    for (std::size_t lo = 0; lo < sizes.size(); lo += cap) {
        std::vector<std::thread> pool;
        for (std::size_t i = lo; i < std::min(lo + cap, sizes.size()); ++i)
            pool.emplace_back(run, i);
        for (auto& th : pool) th.join();
    }
    for (const auto& f : failures)
        if (!f.empty()) throw NoConvergence("roundtrip run failed: " + f);

    nlohmann::json report;
    report["runs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < sizes.size(); ++i)
        report["runs"].push_back(
            {{"nz", sizes[i]}, {"h", 1.0 / static_cast<double>(sizes[i])}, {"l2_error", errors[i]}});
    double order = std::log2(std::max(errors[0], 1e-15) / std::max(errors.back(), 1e-15)) /
                   std::log2(static_cast<double>(sizes.back()) / static_cast<double>(sizes[0]));
    report["observed_order"] = order;
    detail::open_out(out_path(cfg, "roundtrip.json")) << report.dump(2) << "\n";
    std::cout << "roundtrip errors:";
    for (double e : errors) std::cout << " " << detail::format_double(e);
    std::cout << "  order " << detail::format_double(order) << "\n";
    return order >= 0.8 ? 0 : 3;
}

int cmd_equivalence(const RunConfig& cfg) {
    Pipeline p = build_pipeline(cfg);
    double T = cfg.T > 0.0 ? cfg.T : 3.0 * p.times.tau_hat;
    double threshold = cfg.tol > 0.0 ? cfg.tol : 0.05;
    ObservabilityState w = default_window(p, window_count(p, cfg));
    ObserverState eta0 = obs_to_observer(p.fde, w);
    StateSnapshot X0 = obs_to_state(p.sys, p.kernels, p.fde, w, cfg.nz);
    Trajectory orig = simulate_forward(p.sys, X0, InputSignal::zero(), T, cfg.nz,
                                       {0.9, false});
    HocfTrajectory hocf = simulate_hocf({p.fde}, eta0, T, w.ybar.size() - 1);

    Samples y_orig = orig.y_samples();
    double sup = 0.0;
    std::vector<double> y_ref(hocf.times.size());
    for (std::size_t j = 0; j < hocf.times.size(); ++j) {
        y_ref[j] = y_orig.at(std::min(hocf.times[j], y_orig.t_end()));
        sup = std::max(sup, std::abs(y_ref[j] - hocf.y[j]));
    }
    nlohmann::json report;
    report["sup_error"] = sup;
    report["threshold"] = threshold;
    report["T"] = T;
    report["nz"] = cfg.nz;
    detail::open_out(out_path(cfg, "equivalence.json")) << report.dump(2) << "\n";
    write_svg(out_path(cfg, "y.svg"), hocf.times, {y_ref, hocf.y});
    std::cout << "sup|y_orig - y_hocf| = " << detail::format_double(sup) << "\n";
    return sup <= threshold ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic observer canonical form toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub, bool needs_state = false) {
        sub->add_option("--system", cfg.system, "system JSON path or string:k,m")->required();
        sub->add_option("--nz", cfg.nz, "spatial resolution");
        sub->add_option("--nt", cfg.nt, "time/window resolution (0 = derive from nz)");
        sub->add_option("--T", cfg.T, "simulation horizon (0 = 3 tau_hat)");
        sub->add_option("--tol", cfg.tol, "solver tolerance / pass threshold");
        sub->add_option("--out", cfg.out, "output directory");
        if (needs_state) sub->add_option("--state", cfg.state, "observer state JSON input");
        return sub;
    };

    add_common(app.add_subcommand("simulate", "simulate the original system"));
    add_common(app.add_subcommand("kernels", "solve the trace-parameterization kernels"));
    add_common(app.add_subcommand("canonical", "kernels plus canonical FDE"));
    add_common(app.add_subcommand("to-hocf", "map an output window to observer coordinates"));
    add_common(app.add_subcommand("from-hocf", "recover the state from observer coordinates"), true);
    add_common(app.add_subcommand("simulate-hocf", "simulate the observer canonical form"), true);
    add_common(app.add_subcommand("roundtrip", "state-to-state roundtrip convergence study"));
    add_common(app.add_subcommand("equivalence", "original vs canonical-form output comparison"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "simulate") return cmd_simulate(cfg);
        if (name == "kernels") return cmd_kernels(cfg);
        if (name == "canonical") return cmd_canonical(cfg);
        if (name == "to-hocf") return cmd_to_hocf(cfg);
        if (name == "from-hocf") return cmd_from_hocf(cfg);
        if (name == "simulate-hocf") return cmd_simulate_hocf(cfg);
        if (name == "roundtrip") return cmd_roundtrip(cfg);
        if (name == "equivalence") return cmd_equivalence(cfg);
        return 2;
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
