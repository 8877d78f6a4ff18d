/// @file stencil.hpp
/// @brief DdQ(2d+1) velocity sets, their link to the relaxation-system
///        constants, and physical <-> lattice unit conversion.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "relaxlbm/algebra.hpp"

namespace relaxlbm {

struct Stencil {
    int d = 3;
    int q = 7;
    double lam = 1.0;    ///< lattice speed dx/dt
    double theta = 3.0;  ///< c_s^2 = lam^2 / theta
    /// Integer direction of each velocity, ordered
    /// (-e_1..-e_d, 0, +e_1..+e_d); unused trailing axes are zero.
    std::vector<std::array<int, 3>> directions;
    std::vector<double> weights;
    double cs2 = 1.0 / 3.0;

    /// a1 = lam^2/theta, a2 = lam^2 on every axis, at epsilon = 1 (lattice
    /// units absorb the scaling), gamma = 2.
    StabilityParams implied_params(double tau = 1.0) const;

    /// Velocity component c_i along axis.
    double velocity(std::size_t i, std::size_t axis) const { return lam * directions[i][axis]; }
};

/// Default theta: 3 in every dimension (c_s^2 = lam^2/3, rest weight 1 - d/3).
double default_theta(int d);

Stencil build_stencil(int d, double lam, double theta);
inline Stencil build_stencil(int d) { return build_stencil(d, 1.0, default_theta(d)); }

/// f_i^eq = w_i rho (1 + c_i . u / c_s^2).
std::vector<double> equilibrium_populations(double rho, std::span<const double> u, const Stencil& stencil);

/// True when every |u_alpha| < lam.
bool velocity_admissible(std::span<const double> u, const Stencil& stencil);

/// Inverts mu = c_s^2 (tau - dt/2).
double relaxation_time_from_diffusivity(double mu_lattice, double cs2, double dt_lattice = 1.0);

/// Characteristic scales and grid of one run. dt = dx^gamma in the
/// SI-normalized units of the benchmarks; gamma = 2 is diffusive scaling.
struct UnitSystem {
    double l_c = 2.0;
    double u_c = 2.5;
    int N = 25;
    double dx = 0.08;
    double dt = 0.0064;
    double gamma = 2.0;

    static UnitSystem make(double l_c, double u_c, int N, double gamma = 2.0);
    double courant() const { return u_c * dt / dx; }
};

struct LatticeQuantities {
    std::vector<double> u_lattice;
    double mu_lattice = 0.0;
    double tau = 0.0;
    double courant = 0.0;
    double dx = 0.0;
    double dt = 0.0;
};

LatticeQuantities convert_units(const UnitSystem& units, std::span<const double> u_physical,
                                double mu_physical, double cs2);

}  // namespace relaxlbm
