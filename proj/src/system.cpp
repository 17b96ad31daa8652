#include "hocf/system.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hocf/errors.hpp"
#include "hocf/numerics.hpp"

namespace hocf {

StateSnapshot zero_snapshot(std::size_t nz, std::size_t n_ode, double time) {
    StateSnapshot s;
    s.x_minus.assign(nz + 1, 0.0);
    s.x_plus.assign(nz + 1, 0.0);
    s.xi.assign(n_ode, 0.0);
    s.time = time;
    return s;
}

StateSnapshot resample_snapshot(const StateSnapshot& s, std::size_t nz) {
    if (s.x_minus.size() != s.x_plus.size() || s.x_minus.size() < 2)
        throw GridError("snapshot components must share a grid with >= 2 nodes");
    StateSnapshot out;
    out.xi = s.xi;
    out.time = s.time;
    out.x_minus.resize(nz + 1);
    out.x_plus.resize(nz + 1);
    Samples sm{0.0, s.dz(), s.x_minus};
    Samples sp{0.0, s.dz(), s.x_plus};
    for (std::size_t j = 0; j <= nz; ++j) {
        double z = static_cast<double>(j) / static_cast<double>(nz);
        out.x_minus[j] = sm.at(z);
        out.x_plus[j] = sp.at(z);
    }
    return out;
}

static Mat companion_from_f(const std::vector<double>& f) {
    std::size_t n = f.size();
    Mat F(n);
    for (std::size_t i = 0; i + 1 < n; ++i) F(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) F(n - 1, j) = -f[j];
    return F;
}

ValidatedSystem validate_system(const HyperbolicSystem& sys) {
    try {
        sys.sigma_minus.validate();
        sys.sigma_plus.validate();
        sys.mu_minus.validate();
        sys.mu_plus.validate();
    } catch (const GridError&) {
        throw;
    }
    if (!sys.sigma_minus.strictly_positive() || !sys.sigma_plus.strictly_positive())
        throw PositivityViolation("transport coefficients sigma must be strictly positive");
    if (sys.n < 1) throw GridError("boundary ODE order n must be >= 1");
    if (sys.f.size() != static_cast<std::size_t>(sys.n) ||
        sys.g.size() != static_cast<std::size_t>(sys.n))
        throw GridError("f and g must have length n");
    if (sys.q0 == 0.0) throw ZeroParameter("q0 must be nonzero");
    if (sys.m_plus == 0.0) throw ZeroParameter("m_plus must be nonzero");
    for (double v : sys.f)
        if (!std::isfinite(v)) throw GridError("f must be finite");
    for (double v : sys.g)
        if (!std::isfinite(v)) throw GridError("g must be finite");
    ValidatedSystem out;
    out.sys_ = sys;
    out.companion_ = companion_from_f(sys.f);
    return out;
}

double characteristic_time(const ValidatedSystem& sys, Branch branch, double z0, double z) {
    if (z0 < -1e-12 || z0 > 1.0 + 1e-12 || z < -1e-12 || z > 1.0 + 1e-12)
        throw DomainError("characteristic_time arguments must lie in [0,1]");
    const CoefficientField& sigma =
        branch == Branch::minus ? sys.raw().sigma_minus : sys.raw().sigma_plus;
    return sigma.integral(z0, z);
}

TransportTimes transport_times(const ValidatedSystem& sys) {
    TransportTimes t;
    t.tau_minus = characteristic_time(sys, Branch::minus, 0.0, 1.0);
    t.tau_plus = characteristic_time(sys, Branch::plus, 0.0, 1.0);
    t.tau_hat = t.tau_minus + t.tau_plus;
    return t;
}

ObservabilityForm to_observability_form(const Mat& F, const std::vector<double>& g,
                                        const std::vector<double>& c0) {
    std::size_t n = F.n;
    if (g.size() != n || c0.size() != n)
        throw GridError("to_observability_form: dimension mismatch");
    // Rows of the observability matrix: c0^T F^k. The target pair (companion,
    // e1^T) has identity observability matrix, so O itself is the transform.
    Mat O(n);
    std::vector<double> row = c0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) O(k, j) = row[j];
        std::vector<double> next(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) next[j] += row[i] * F(i, j);
        row = next;
    }
    Mat Oinv;
    try {
        Oinv = O.inverse();
    } catch (const NotObservable&) {
        throw NotObservable("(F, c0) is not observable");
    }
    ObservabilityForm out;
    out.O = O;
    out.F_bar = O.mul(F).mul(Oinv);
    out.g_bar = O.mul(g);
    out.f.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.f[j] = -out.F_bar(n - 1, j);
    return out;
}

// ---------------------------------------------------------------------------
// JSON system files

using nlohmann::json;

static CoefficientField field_from_json(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing field: " + key);
    const json& f = j.at(key);
    if (f.is_number()) return CoefficientField::constant(f.get<double>());
    if (!f.is_object() || !f.contains("grid") || !f.contains("values"))
        throw ConfigError("field " + key + " must be {grid, values} or a number");
    CoefficientField out;
    out.grid = f.at("grid").get<std::vector<double>>();
    out.values = f.at("values").get<std::vector<double>>();
    return out;
}

HyperbolicSystem parse_system_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("system file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("schema", "") != "hocf-kit/v1")
        throw ConfigError("system file must carry schema \"hocf-kit/v1\"");
    HyperbolicSystem sys;
    try {
        sys.sigma_minus = field_from_json(j, "sigma_minus");
        sys.sigma_plus = field_from_json(j, "sigma_plus");
        sys.mu_minus = field_from_json(j, "mu_minus");
        sys.mu_plus = field_from_json(j, "mu_plus");
        sys.n = j.at("n").get<int>();
        sys.f = j.at("f").get<std::vector<double>>();
        sys.g = j.at("g").get<std::vector<double>>();
        sys.q0 = j.at("q0").get<double>();
        sys.q1 = j.at("q1").get<double>();
        sys.b1_bar = j.at("b1_bar").get<double>();
        sys.m_plus = j.at("m_plus").get<double>();
        sys.d1 = j.at("d1").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("system file field error: ") + e.what());
    }
    return sys;
}

HyperbolicSystem load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open system file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_system_json(buf.str());
}

static json field_to_json(const CoefficientField& f) {
    return json{{"grid", f.grid}, {"values", f.values}};
}

std::string system_to_json(const HyperbolicSystem& sys) {
    json j;
    j["schema"] = "hocf-kit/v1";
    j["sigma_minus"] = field_to_json(sys.sigma_minus);
    j["sigma_plus"] = field_to_json(sys.sigma_plus);
    j["mu_minus"] = field_to_json(sys.mu_minus);
    j["mu_plus"] = field_to_json(sys.mu_plus);
    j["n"] = sys.n;
    j["f"] = sys.f;
    j["g"] = sys.g;
    j["q0"] = sys.q0;
    j["q1"] = sys.q1;
    j["b1_bar"] = sys.b1_bar;
    j["m_plus"] = sys.m_plus;
    j["d1"] = sys.d1;
    return j.dump(2);
}

}  // namespace hocf
