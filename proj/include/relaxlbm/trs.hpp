/// @file trs.hpp
/// @brief Direct integration of the one-dimensional transformed relaxation
///        system, used to observe the epsilon -> 0 relaxation limit
///        independently of the lattice Boltzmann discretization.
///
/// Scheme: first-order upwind transport of each characteristic component,
/// followed by the exact solution of the stiff linear relaxation
///   g' = -(1/eps^gamma) K (g - G(g))
/// through a precomputed matrix exponential.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxlbm/algebra.hpp"

namespace relaxlbm {

struct TrsGrid {
    std::size_t cells = 1024;
    double length = 2.0;  ///< periodic domain (-length/2, length/2)
    double cfl = 0.5;
};

struct TrsSetup {
    StabilityParams params;       ///< d = 1
    double mu = 0.0;              ///< target diffusivity, for the stability gate
    double flux_velocity = 0.0;   ///< F(rho) = u rho
    bool override_stability = false;
};

/// Raised by init_trs when the parameters are not relaxation-stable.
class StabilityGateError : public std::invalid_argument {
public:
    StabilityGateError(const std::string& what, StabilityVerdict verdict)
        : std::invalid_argument(what), verdict_(std::move(verdict)) {}
    const StabilityVerdict& verdict() const noexcept { return verdict_; }

private:
    StabilityVerdict verdict_;
};

struct TrsState {
    StabilityParams params;
    double flux_velocity = 0.0;
    double dx = 0.0;
    double dt_rs = 0.0;
    std::array<double, 3> speeds{};        ///< diagonal of A^d, (-c, 0, +c)
    std::array<std::vector<double>, 3> g;  ///< minus, rest, plus
    std::vector<double> x;                 ///< cell centres
    double time = 0.0;
    Matrix generator;    ///< -(1/eps^gamma) K (I - m 1^T)
    Matrix propagator;   ///< exp(generator * dt_rs)
};

TrsState init_trs(const std::function<double(double)>& rho0, const TrsSetup& setup, const TrsGrid& grid);

/// One step of size state.dt_rs.
void step_trs(TrsState& state);
/// One step of an explicit size; throws std::invalid_argument on CFL violation.
void step_trs(TrsState& state, double dt);

/// Integrates up to the horizon, shortening the last step to land on it.
void advance_to(TrsState& state, double horizon);

/// Component sum per cell.
std::vector<double> trs_density(const TrsState& state);
double trs_mass(const TrsState& state);

struct RsLimitRow {
    double epsilon = 0.0;
    double error = 0.0;
    std::string status;  ///< ok | blowup | unstable
    std::string detail;
};

/// For each epsilon: integrate from g = G(eps, rho0) to the horizon and
/// record the relative L2 error of the density against analytic(x, horizon).
std::vector<RsLimitRow> relaxation_limit_sweep(const std::function<double(double)>& rho0,
                                               const std::function<double(double, double)>& analytic,
                                               std::span<const double> epsilons, const TrsSetup& base,
                                               const TrsGrid& grid, double horizon);

}  // namespace relaxlbm
