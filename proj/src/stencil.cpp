#include "relaxlbm/stencil.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaxlbm {

StabilityParams Stencil::implied_params(double tau) const {
    return StabilityParams::uniform(d, 2.0, 1.0, tau, lam * lam / theta, lam * lam);
}

double default_theta(int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("dimension d must be 1, 2 or 3");
    return 3.0;
}

Stencil build_stencil(int d, double lam, double theta) {
    if (d < 1 || d > 3) throw std::invalid_argument("dimension d must be 1, 2 or 3");
    if (!(lam > 0.0) || !std::isfinite(lam)) throw std::invalid_argument("lattice speed must be positive");
    if (!(theta >= d) || !std::isfinite(theta))
        throw std::invalid_argument("theta = " + std::to_string(theta) + " < d = " + std::to_string(d) +
                                    " gives a negative rest weight");
    Stencil s;
    s.d = d;
    s.q = 2 * d + 1;
    s.lam = lam;
    s.theta = theta;
    s.cs2 = lam * lam / theta;
    s.directions.assign(static_cast<std::size_t>(s.q), {0, 0, 0});
    s.weights.assign(static_cast<std::size_t>(s.q), 1.0 / (2.0 * theta));
    const Layout L{d};
    for (std::size_t a = 0; a < static_cast<std::size_t>(d); ++a) {
        s.directions[L.minus(a)][a] = -1;
        s.directions[L.plus(a)][a] = 1;
    }
    // (theta - d)/theta rather than 1 - d/theta: at theta = 3 the latter
    // rounds one ulp away from 4 * fl(1/6), which would break the exact
    // D1Q3 / D3Q7 correspondence for fields that are constant in y and z.
    s.weights[L.rest()] = (theta - d) / theta;
    return s;
}

std::vector<double> equilibrium_populations(double rho, std::span<const double> u, const Stencil& s) {
    if (u.size() != static_cast<std::size_t>(s.d)) throw std::invalid_argument("velocity must have d entries");
    std::vector<double> feq(static_cast<std::size_t>(s.q));
    for (std::size_t i = 0; i < feq.size(); ++i) {
        double cu = 0.0;
        for (std::size_t a = 0; a < u.size(); ++a) cu += s.velocity(i, a) * u[a];
        feq[i] = s.weights[i] * rho * (1.0 + cu / s.cs2);
    }
    return feq;
}

bool velocity_admissible(std::span<const double> u, const Stencil& s) {
    for (double v : u)
        if (!(std::abs(v) < s.lam)) return false;
    return true;
}

double relaxation_time_from_diffusivity(double mu_lattice, double cs2, double dt_lattice) {
    if (!(mu_lattice > 0.0)) throw std::invalid_argument("lattice diffusivity must be positive");
    if (!(cs2 > 0.0)) throw std::invalid_argument("c_s^2 must be positive");
    return mu_lattice / cs2 + 0.5 * dt_lattice;
}

UnitSystem UnitSystem::make(double l_c, double u_c, int N, double gamma) {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    if (!(l_c > 0.0)) throw std::invalid_argument("characteristic length must be positive");
    UnitSystem u;
    u.l_c = l_c;
    u.u_c = u_c;
    u.N = N;
    u.gamma = gamma;
    u.dx = l_c / N;
    u.dt = std::pow(u.dx, gamma);
    return u;
}

LatticeQuantities convert_units(const UnitSystem& units, std::span<const double> u_physical,
                                double mu_physical, double cs2) {
    LatticeQuantities q;
    q.dx = units.dx;
    q.dt = units.dt;
    for (double u : u_physical) q.u_lattice.push_back(u * units.dt / units.dx);
    q.mu_lattice = mu_physical * units.dt / (units.dx * units.dx);
    q.tau = relaxation_time_from_diffusivity(q.mu_lattice, cs2);
    q.courant = units.courant();
    return q;
}

}  // namespace relaxlbm
