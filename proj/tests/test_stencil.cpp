/// @file test_stencil.cpp
/// @brief Velocity sets, equilibria and unit conversion.

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "relaxlbm/stencil.hpp"

using namespace relaxlbm;

TEST_CASE("D3Q7 with theta = 4") {
    const Stencil s = build_stencil(3, 1.0, 4.0);
    REQUIRE(s.q == 7);
    for (int i = 0; i < 7; ++i) CHECK(s.weights[i] == doctest::Approx(i == 3 ? 0.25 : 0.125).epsilon(1e-15));
    CHECK(s.cs2 == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("D1Q3 with theta = 1 has a vanishing rest weight") {
    const Stencil s = build_stencil(1, 1.0, 1.0);
    CHECK(s.weights == std::vector<double>{0.5, 0.0, 0.5});
    CHECK(s.cs2 == 1.0);
}

TEST_CASE("direction ordering is minus shell, rest, plus shell") {
    const Stencil s = build_stencil(2);
    CHECK(s.directions[0] == std::array<int, 3>{-1, 0, 0});
    CHECK(s.directions[1] == std::array<int, 3>{0, -1, 0});
    CHECK(s.directions[2] == std::array<int, 3>{0, 0, 0});
    CHECK(s.directions[3] == std::array<int, 3>{1, 0, 0});
    CHECK(s.directions[4] == std::array<int, 3>{0, 1, 0});
}

TEST_CASE("default theta is 3 in every dimension and weights sum to one") {
    for (int d = 1; d <= 3; ++d) {
        const Stencil s = build_stencil(d);
        CHECK(s.theta == 3.0);
        double sum = 0.0;
        for (double w : s.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("invalid stencils are rejected") {
    CHECK_THROWS_AS(build_stencil(3, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(4, 1.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(build_stencil(1, 0.0, 3.0), std::invalid_argument);
}

TEST_CASE("equilibrium at rest is the weight vector") {
    const Stencil s = build_stencil(3);
    const double u[] = {0.0, 0.0, 0.0};
    const auto f = equilibrium_populations(2.5, u, s);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == doctest::Approx(2.5 * s.weights[i]).epsilon(1e-15));
}

TEST_CASE("equilibrium moments and equivalence with the generalized Maxwellian") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rho_dist(0.1, 3.0), u_dist(-0.4, 0.4), lam_dist(0.5, 2.0);
    for (int d = 1; d <= 3; ++d) {
        for (double theta : {double(d), double(d + 1), 4.0}) {
            for (int k = 0; k < 20; ++k) {
                const double lam = lam_dist(rng);
                const Stencil s = build_stencil(d, lam, theta);
                const double rho = rho_dist(rng);
                std::vector<double> u(static_cast<std::size_t>(d));
                for (auto& v : u) v = u_dist(rng) * lam;
                const auto f = equilibrium_populations(rho, u, s);
                const auto g = maxwellian({1.0, rho, u}, s.implied_params());
                REQUIRE(f.size() == g.size());
                for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] - g[i]) < 1e-14);

                double m0 = 0.0;
                for (double v : f) m0 += v;
                CHECK(std::abs(m0 - rho) < 1e-14);
                for (std::size_t a = 0; a < u.size(); ++a) {
                    double m1 = 0.0;
                    for (std::size_t i = 0; i < f.size(); ++i) m1 += s.velocity(i, a) * f[i];
                    CHECK(std::abs(m1 - rho * u[a]) < 1e-14);
                }
            }
        }
    }
}

TEST_CASE("second moment at rest is c_s^2 rho delta") {
    const Stencil s = build_stencil(3, 1.0, 3.0);
    const double u[] = {0.0, 0.0, 0.0};
    const auto f = equilibrium_populations(1.7, u, s);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            double m2 = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) m2 += s.velocity(i, a) * s.velocity(i, b) * f[i];
            CHECK(std::abs(m2 - (a == b ? s.cs2 * 1.7 : 0.0)) < 1e-14);
        }
}

TEST_CASE("admissible velocities") {
    const Stencil s = build_stencil(2);
    const double ok[] = {0.5, -0.9};
    const double bad[] = {0.5, 1.0};
    CHECK(velocity_admissible(ok, s));
    CHECK_FALSE(velocity_admissible(bad, s));
}

TEST_CASE("relaxation time from diffusivity") {
    CHECK(relaxation_time_from_diffusivity(0.25, 0.25) == doctest::Approx(1.5));
    CHECK(relaxation_time_from_diffusivity(0.05, 0.25) == doctest::Approx(0.7));
    CHECK(relaxation_time_from_diffusivity(1e-12, 0.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(relaxation_time_from_diffusivity(0.0, 0.25), std::invalid_argument);
}

TEST_CASE("diffusive scaling unit system") {
    const UnitSystem u25 = UnitSystem::make(2.0, 2.5, 25);
    CHECK(u25.dx == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(u25.dt == doctest::Approx(0.0064).epsilon(1e-15));
    CHECK(u25.courant() == doctest::Approx(0.2).epsilon(1e-15));
    const UnitSystem u50 = UnitSystem::make(2.0, 2.5, 50);
    CHECK(u50.courant() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(u50.courant() * 2.0 == doctest::Approx(u25.courant()).epsilon(1e-15));

    const double u_phys[] = {2.5, 0.0};
    const auto q = convert_units(u25, u_phys, 0.05, 1.0 / 3.0);
    CHECK(q.mu_lattice == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(q.u_lattice[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(q.tau == doctest::Approx(0.65).epsilon(1e-14));
}
