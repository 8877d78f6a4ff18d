/// @file test_lattice.cpp
/// @brief Collide and stream kernels, conservation and run bookkeeping.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relaxlbm/lattice.hpp"

using namespace relaxlbm;

namespace {

const DensitySampler kUniform = [](const std::array<double, 3>&) { return 1.0; };

DensitySampler bump() {
    return [](const std::array<double, 3>& x) {
        return 1.0 + 0.5 * std::sin(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]) +
               0.25 * std::cos(std::numbers::pi * x[2]);
    };
}

double max_population_difference(const LatticeState& a, const LatticeState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.q(); ++i) {
        const auto pa = a.population(i);
        const auto pb = b.population(i);
        for (std::size_t c = 0; c < pa.size(); ++c) m = std::max(m, std::abs(pa[c] - pb[c]));
    }
    return m;
}

}  // namespace

TEST_CASE("uniform initialization at rest gives f_i = w_i") {
    const Stencil s = build_stencil(3);
    const std::vector<double> u(3, 0.0);
    const LatticeState st = initialize(s, cubic_extents(3, 6), UnitSystem::make(2.0, 2.5, 6), kUniform, u);
    for (std::size_t i = 0; i < st.q(); ++i)
        for (double f : st.population(i)) CHECK(f == doctest::Approx(s.weights[i]).epsilon(1e-15));
    for (double r : density(st)) CHECK(std::abs(r - 1.0) < 1e-15);
}

TEST_CASE("density after initialization reproduces the sampler") {
    const Stencil s = build_stencil(3);
    const std::vector<double> u{0.1, -0.05, 0.02};
    const auto units = UnitSystem::make(2.0, 2.5, 8);
    const auto sampler = bump();
    const LatticeState st = initialize(s, cubic_extents(3, 8), units, sampler, u);
    const auto rho = density(st);
    double expected_mass = 0.0;
    for (std::size_t z = 0; z < 8; ++z)
        for (std::size_t y = 0; y < 8; ++y)
            for (std::size_t x = 0; x < 8; ++x) {
                const double v = sampler({st.cell_center(0, x), st.cell_center(1, y), st.cell_center(2, z)});
                CHECK(std::abs(rho[st.index(x, y, z)] - v) < 1e-14);
                expected_mass += v;
            }
    CHECK(total_mass(st) == doctest::Approx(expected_mass).epsilon(1e-14));
}

TEST_CASE("cell centres are symmetric on (-1, 1)") {
    const LatticeState st(build_stencil(1), cubic_extents(1, 4), UnitSystem::make(2.0, 2.5, 4));
    CHECK(st.cell_center(0, 0) == doctest::Approx(-0.75));
    CHECK(st.cell_center(0, 3) == doctest::Approx(0.75));
}

TEST_CASE("solver configuration validation") {
    const Stencil s = build_stencil(2);
    CHECK_THROWS_AS((SolverConfig{0.5, {0.0, 0.0}, 1, 1}.validate(s)), std::invalid_argument);
    CHECK_THROWS_AS((SolverConfig{0.8, {0.0}, 1, 1}.validate(s)), std::invalid_argument);
    CHECK_THROWS_AS((SolverConfig{0.8, {0.0, 0.0}, -1, 1}.validate(s)), std::invalid_argument);
    CHECK_THROWS_AS((SolverConfig{0.8, {0.0, 0.0}, 1, 0}.validate(s)), std::invalid_argument);
    CHECK_NOTHROW((SolverConfig{0.8, {0.0, 0.0}, 0, 1}.validate(s)));
    CHECK(collision_frequency(1.0) == 1.0);
}

TEST_CASE("equilibrium is a fixed point of collide and of step") {
    const Stencil s = build_stencil(3);
    const std::vector<double> u{0.1, 0.2, -0.1};
    const auto units = UnitSystem::make(2.0, 2.5, 5);
    LatticeState st = initialize(s, cubic_extents(3, 5), units, [](const std::array<double, 3>&) { return 1.3; }, u);
    const LatticeState initial = st;
    const SolverConfig cfg{0.9, u, 100, 1};
    collide(st, cfg);
    CHECK(max_population_difference(st, initial) < 1e-15);
    for (int k = 0; k < 100; ++k) step(st, cfg);
    CHECK(max_population_difference(st, initial) < 1e-13);
    CHECK(st.t_lattice == 100);
}

TEST_CASE("collision preserves the density of every cell") {
    const Stencil s = build_stencil(3);
    const std::vector<double> u{0.1, 0.0, 0.05};
    LatticeState st = initialize(s, cubic_extents(3, 6), UnitSystem::make(2.0, 2.5, 6), bump(), u);
    // Move off equilibrium first.
    stream(st);
    const auto before = density(st);
    collide(st, SolverConfig{0.7, u, 1, 1});
    const auto after = density(st);
    for (std::size_t c = 0; c < before.size(); ++c) CHECK(std::abs(after[c] - before[c]) < 1e-14);
}

TEST_CASE("tau = 1 relaxes a single cell onto equilibrium in one collision") {
    const Stencil s = build_stencil(1);
    LatticeState st(s, cubic_extents(1, 1), UnitSystem::make(2.0, 2.5, 1));
    st.population(0)[0] = 0.7;
    st.population(1)[0] = 0.1;
    st.population(2)[0] = 0.2;
    const std::vector<double> u{0.15};
    collide(st, SolverConfig{1.0, u, 1, 1});
    const auto feq = equilibrium_populations(1.0, u, s);
    for (std::size_t i = 0; i < 3; ++i) CHECK(st.population(i)[0] == doctest::Approx(feq[i]).epsilon(1e-15));
}

TEST_CASE("streaming shifts each direction by one cell periodically") {
    const Stencil s = build_stencil(2);
    LatticeState st(s, cubic_extents(2, 5), UnitSystem::make(2.0, 2.5, 5));
    const std::size_t plus_x = 3, minus_y = 1;
    st.population(plus_x)[st.index(4, 2, 0)] = 1.0;
    st.population(minus_y)[st.index(1, 0, 0)] = 2.0;
    stream(st);
    CHECK(st.population(plus_x)[st.index(0, 2, 0)] == 1.0);
    CHECK(st.population(minus_y)[st.index(1, 4, 0)] == 2.0);
    CHECK(total_mass(st) == 3.0);
}

TEST_CASE("N streams return every population to its start") {
    const Stencil s = build_stencil(3);
    const std::vector<double> u{0.1, 0.2, 0.3};
    LatticeState st = initialize(s, cubic_extents(3, 4), UnitSystem::make(2.0, 2.5, 4), bump(), u);
    const LatticeState initial = st;
    for (int k = 0; k < 4; ++k) stream(st);
    CHECK(max_population_difference(st, initial) == 0.0);
}

TEST_CASE("mass is conserved over 1000 steps") {
    const Stencil s = build_stencil(2);
    const std::vector<double> u{0.2, -0.1};
    LatticeState st = initialize(s, cubic_extents(2, 16), UnitSystem::make(2.0, 2.5, 16), bump(), u);
    const double m0 = total_mass(st);
    const SolverConfig cfg{0.6, u, 1, 1};
    for (int k = 0; k < 1000; ++k) step(st, cfg);
    CHECK(std::abs(total_mass(st) - m0) / m0 < 1e-12);
}

TEST_CASE("a symmetric peak stays symmetric without advection") {
    const std::size_t N = 21;
    const Stencil s = build_stencil(1);
    const auto units = UnitSystem::make(2.0, 2.5, static_cast<int>(N));
    const std::vector<double> u{0.0};
    LatticeState st = initialize(s, cubic_extents(1, N), units,
                                 [](const std::array<double, 3>& x) { return 1.0 + std::exp(-20.0 * x[0] * x[0]); }, u);
    const SolverConfig cfg{0.8, u, 1, 1};
    for (int k = 0; k < 200; ++k) step(st, cfg);
    const auto rho = density(st);
    for (std::size_t j = 0; j < N / 2; ++j) CHECK(std::abs(rho[j] - rho[N - 1 - j]) < 1e-15);
}

TEST_CASE("a Fourier mode decays at the rate set by mu = c_s^2 (tau - 1/2)") {
    const std::size_t N = 64;
    const double tau = 0.8;
    const Stencil s = build_stencil(1);
    const std::vector<double> u{0.0};
    LatticeState st = initialize(s, cubic_extents(1, N), UnitSystem::make(2.0, 2.5, static_cast<int>(N)),
                                 [](const std::array<double, 3>& x) { return 1.0 + std::sin(std::numbers::pi * x[0]); }, u);
    const SolverConfig cfg{tau, u, 1, 1};
    const int steps = 500;
    for (int k = 0; k < steps; ++k) step(st, cfg);
    const auto rho = density(st);
    double amp = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double m = std::sin(std::numbers::pi * st.cell_center(0, j));
        amp += (rho[j] - 1.0) * m;
        norm += m * m;
    }
    amp /= norm;
    const double mu = s.cs2 * (tau - 0.5);
    const double k = 2.0 * std::numbers::pi / static_cast<double>(N);
    CHECK(amp == doctest::Approx(std::exp(-mu * k * k * steps)).epsilon(2e-3));
}

TEST_CASE("D3Q7 on an (N,1,1) grid matches D1Q3 with the same theta") {
    const std::size_t N = 32;
    const double theta = 3.0;
    const auto units = UnitSystem::make(2.0, 2.5, static_cast<int>(N));
    const DensitySampler peak = [](const std::array<double, 3>& x) { return std::abs(x[0]) < 0.05 ? 6.0 : 1.0; };
    const std::vector<double> u1{0.15}, u3{0.15, 0.0, 0.0};
    LatticeState a = initialize(build_stencil(1, 1.0, theta), Extents{N, 1, 1}, units, peak, u1);
    LatticeState b = initialize(build_stencil(3, 1.0, theta), Extents{N, 1, 1}, units, peak, u3);
    const SolverConfig ca{0.52, u1, 1, 1}, cb{0.52, u3, 1, 1};
    for (int k = 0; k < 300; ++k) {
        step(a, ca);
        step(b, cb);
    }
    const auto ra = density(a), rb = density(b);
    for (std::size_t j = 0; j < N; ++j) CHECK(std::abs(ra[j] - rb[j]) < 1e-12);
}

TEST_CASE("run observation counts") {
    const Stencil s = build_stencil(1);
    const std::vector<double> u{0.0};
    auto count = [&](std::int64_t steps, std::int64_t every) {
        LatticeState st = initialize(s, cubic_extents(1, 4), UnitSystem::make(2.0, 2.5, 4), kUniform, u);
        std::vector<std::int64_t> seen;
        const auto n = run(st, SolverConfig{0.8, u, steps, every}, [&](std::int64_t t, std::span<const double> rho) {
            CHECK(rho.size() == 4);
            seen.push_back(t);
            return Flow::Continue;
        });
        CHECK(n == seen.size());
        CHECK(seen.back() == steps);
        return seen;
    };
    CHECK(count(0, 1) == std::vector<std::int64_t>{0});
    CHECK(count(7, 7) == std::vector<std::int64_t>{0, 7});
    CHECK(count(12, 3).size() == 12 / 3 + 1);
    CHECK(count(10, 3) == std::vector<std::int64_t>{0, 3, 6, 9, 10});
}

TEST_CASE("an observer can stop the run early") {
    const Stencil s = build_stencil(1);
    const std::vector<double> u{0.0};
    LatticeState st = initialize(s, cubic_extents(1, 4), UnitSystem::make(2.0, 2.5, 4), kUniform, u);
    const auto n = run(st, SolverConfig{0.8, u, 50, 1},
                       [](std::int64_t t, std::span<const double>) { return t >= 5 ? Flow::Stop : Flow::Continue; });
    CHECK(n == 6);
    CHECK(st.t_lattice == 5);
}
