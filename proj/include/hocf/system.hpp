#pragma once

#include <string>
#include <vector>

#include "hocf/coefficient_field.hpp"
#include "hocf/linalg.hpp"

namespace hocf {

/// PDE-ODE plant data. The boundary ODE is expected in observability
/// canonical form: companion F with last row -f^T and output row e1^T.
/// Use to_observability_form() to bring other realizations into this shape.
struct HyperbolicSystem {
    CoefficientField sigma_minus;  // inverse transport speed, leftward branch
    CoefficientField sigma_plus;   // inverse transport speed, rightward branch
    CoefficientField mu_minus;     // coupling onto x^-
    CoefficientField mu_plus;      // coupling onto x^+
    int n = 0;                     // boundary ODE order
    std::vector<double> f;         // negated last companion row, f_1..f_n
    std::vector<double> g;         // input coupling, g_1..g_n
    double q0 = 0.0;
    double q1 = 0.0;
    double b1_bar = 0.0;
    double m_plus = 0.0;
    double d1 = 0.0;
};

enum class Branch { minus, plus };

struct TransportTimes {
    double tau_minus = 0.0;
    double tau_plus = 0.0;
    double tau_hat = 0.0;  // tau_minus + tau_plus
};

/// State X(t): distributed components on a shared uniform grid over [0,1]
/// plus the boundary ODE state.
struct StateSnapshot {
    std::vector<double> x_minus;
    std::vector<double> x_plus;
    std::vector<double> xi;
    double time = 0.0;

    std::size_t nodes() const { return x_minus.size(); }
    double dz() const { return 1.0 / static_cast<double>(nodes() - 1); }
};

StateSnapshot zero_snapshot(std::size_t nz, std::size_t n_ode, double time = 0.0);

/// Resample the distributed components onto nz+1 uniform nodes.
StateSnapshot resample_snapshot(const StateSnapshot& s, std::size_t nz);

/// A system that passed validate_system(). Carries the precomputed
/// companion matrix so downstream code never rebuilds it.
class ValidatedSystem {
  public:
    const HyperbolicSystem& raw() const { return sys_; }
    const Mat& companion() const { return companion_; }
    int n() const { return sys_.n; }

  private:
    friend ValidatedSystem validate_system(const HyperbolicSystem& sys);
    HyperbolicSystem sys_;
    Mat companion_;
};

ValidatedSystem validate_system(const HyperbolicSystem& sys);

/// Characteristic travel time gamma^{branch}(z; z0) = int_{z0}^{z} sigma.
double characteristic_time(const ValidatedSystem& sys, Branch branch, double z0, double z);

TransportTimes transport_times(const ValidatedSystem& sys);

/// Result of the observability-coordinates normalization of (F, g, c0).
struct ObservabilityForm {
    std::vector<double> f;      // from the companion's last row
    std::vector<double> g_bar;  // O g
    Mat O;                      // change of basis, xi_bar = O xi
    Mat F_bar;                  // O F O^{-1}, companion
};

/// Change of basis sending (F, c0) to the companion/e1 pair. Throws
/// NotObservable when the observability matrix is singular.
ObservabilityForm to_observability_form(const Mat& F, const std::vector<double>& g,
                                        const std::vector<double>& c0);

// System definition files, schema "hocf-kit/v1".
HyperbolicSystem load_system(const std::string& path);
HyperbolicSystem parse_system_json(const std::string& text);
std::string system_to_json(const HyperbolicSystem& sys);

}  // namespace hocf
