#include "relaxlbm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "relaxlbm/parallel.hpp"

namespace relaxlbm {

Extents cubic_extents(int d, std::size_t N) {
    if (d < 1 || d > 3) throw std::invalid_argument("dimension d must be 1, 2 or 3");
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    Extents e{1, 1, 1};
    for (int a = 0; a < d; ++a) e[static_cast<std::size_t>(a)] = N;
    return e;
}

LatticeState::LatticeState(Stencil stencil, Extents extents, UnitSystem units)
    : stencil_(std::move(stencil)), extents_(extents), units_(units),
      cells_(extents[0] * extents[1] * extents[2]) {
    if (cells_ == 0) throw std::invalid_argument("grid extents must be positive");
    for (std::size_t a = static_cast<std::size_t>(stencil_.d); a < 3; ++a)
        if (extents_[a] != 1) throw std::invalid_argument("grid extent beyond the stencil dimension must be 1");
    f_.assign(q() * cells_, 0.0);
    scratch_.assign(q() * cells_, 0.0);
}

double LatticeState::cell_center(std::size_t axis, std::size_t j) const noexcept {
    const double h = units_.l_c / static_cast<double>(extents_[axis]);
    return -0.5 * units_.l_c + (static_cast<double>(j) + 0.5) * h;
}

void SolverConfig::validate(const Stencil& stencil) const {
    if (!(tau > 0.5)) throw std::invalid_argument("tau must exceed 1/2, got " + std::to_string(tau));
    if (u_lattice.size() != static_cast<std::size_t>(stencil.d))
        throw std::invalid_argument("u_lattice must have one entry per stencil axis");
    if (steps < 0) throw std::invalid_argument("steps must be non-negative");
    if (sample_every < 1) throw std::invalid_argument("sample_every must be at least 1");
}

double collision_frequency(double tau) {
    if (!(tau > 0.5)) throw std::invalid_argument("tau must exceed 1/2");
    return 1.0 / tau;
}

namespace {

// k_i with f_i^eq = k_i rho for the constant advection velocity.
std::vector<double> equilibrium_factors(const Stencil& s, std::span<const double> u) {
    return equilibrium_populations(1.0, u, s);
}

// Zeroth moment of one cell, compensated so that it is (almost always) the
// correctly rounded sum regardless of how the mass is split over directions.
double cell_density(const std::array<const double*, 7>& f, std::size_t q, std::size_t c) {
    CompensatedSum rho;
    for (std::size_t i = 0; i < q; ++i) rho.add(f[i][c]);
    return rho.value();
}

std::array<const double*, 7> population_pointers(const LatticeState& state) {
    std::array<const double*, 7> f{};
    for (std::size_t i = 0; i < state.q(); ++i) f[i] = state.population(i).data();
    return f;
}

// Periodic neighbour index for a shift in {-1, 0, 1}.
std::size_t wrap(std::size_t j, int shift, std::size_t n) {
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j + n) + shift) % n;
}

}  // namespace

LatticeState initialize(const Stencil& stencil, const Extents& extents, const UnitSystem& units,
                        const DensitySampler& rho0, std::span<const double> u_lattice) {
    LatticeState state(stencil, extents, units);
    const auto k = equilibrium_factors(stencil, u_lattice);
    const std::size_t nx = extents[0], ny = extents[1], nz = extents[2];
    parallel_for(ny * nz, [&](std::size_t row) {
        const std::size_t y = row % ny, z = row / ny;
        for (std::size_t x = 0; x < nx; ++x) {
            const std::array<double, 3> pos{state.cell_center(0, x), state.cell_center(1, y),
                                            state.cell_center(2, z)};
            const double rho = rho0(pos);
            const std::size_t c = state.index(x, y, z);
            for (std::size_t i = 0; i < k.size(); ++i) state.population(i)[c] = k[i] * rho;
        }
    });
    return state;
}

void collide(LatticeState& state, const SolverConfig& config) {
    config.validate(state.stencil());
    const double omega = collision_frequency(config.tau);
    const auto k = equilibrium_factors(state.stencil(), config.u_lattice);
    const std::size_t q = state.q();
    const std::size_t nrow = state.extents()[1] * state.extents()[2];
    const std::size_t nx = state.extents()[0];

    std::array<double*, 7> f{};
    for (std::size_t i = 0; i < q; ++i) f[i] = state.population(i).data();
    const auto fc = population_pointers(state);

    parallel_for(nrow, [&](std::size_t row) {
        const std::size_t begin = row * nx;
        for (std::size_t c = begin; c < begin + nx; ++c) {
            const double rho = cell_density(fc, q, c);
            for (std::size_t i = 0; i < q; ++i) f[i][c] += omega * (k[i] * rho - f[i][c]);
        }
    });
}

void stream(LatticeState& state) {
    const Stencil& s = state.stencil();
    const std::size_t nx = state.extents_[0], ny = state.extents_[1], nz = state.extents_[2];
    const std::size_t q = state.q();
    const std::size_t cells = state.cells_;

    for (std::size_t i = 0; i < q; ++i) {
        const auto dir = s.directions[i];
        const double* src = state.f_.data() + i * cells;
        double* dst = state.scratch_.data() + i * cells;
        parallel_for(ny * nz, [&](std::size_t row) {
            const std::size_t y = row % ny, z = row / ny;
            const std::size_t ty = wrap(y, dir[1], ny);
            const std::size_t tz = wrap(z, dir[2], nz);
            const double* in = src + nx * (y + ny * z);
            double* out = dst + nx * (ty + ny * tz);
            if (dir[0] == 0 || nx == 1) {
                std::copy(in, in + nx, out);
            } else if (dir[0] > 0) {
                std::copy(in, in + nx - 1, out + 1);
                out[0] = in[nx - 1];
            } else {
                std::copy(in + 1, in + nx, out);
                out[nx - 1] = in[0];
            }
        });
    }
    state.f_.swap(state.scratch_);
}

void step(LatticeState& state, const SolverConfig& config) {
    collide(state, config);
    stream(state);
    ++state.t_lattice;
}

void density(const LatticeState& state, std::span<double> out) {
    if (out.size() != state.cells()) throw std::invalid_argument("density buffer has the wrong size");
    const std::size_t q = state.q();
    const std::size_t nx = state.extents()[0];
    const std::size_t nrow = state.extents()[1] * state.extents()[2];
    const auto f = population_pointers(state);
    parallel_for(nrow, [&](std::size_t row) {
        const std::size_t begin = row * nx;
        for (std::size_t c = begin; c < begin + nx; ++c) out[c] = cell_density(f, q, c);
    });
}

std::vector<double> density(const LatticeState& state) {
    std::vector<double> rho(state.cells());
    density(state, rho);
    return rho;
}

double total_mass(const LatticeState& state) {
    const std::size_t nx = state.extents()[0];
    const std::size_t nrow = state.extents()[1] * state.extents()[2];
    return deterministic_sum(nrow, [&](std::size_t row) {
        CompensatedSum s;
        for (std::size_t i = 0; i < state.q(); ++i) {
            const auto f = state.population(i);
            for (std::size_t c = row * nx; c < (row + 1) * nx; ++c) s.add(f[c]);
        }
        return s.value();
    });
}

std::size_t run(LatticeState& state, const SolverConfig& config, const Observer& observer) {
    config.validate(state.stencil());
    std::vector<double> rho(state.cells());
    std::size_t count = 0;
    auto observe = [&]() {
        ++count;
        if (!observer) return Flow::Continue;
        density(state, rho);
        return observer(state.t_lattice, rho);
    };

    if (observe() == Flow::Stop) return count;
    for (std::int64_t s = 1; s <= config.steps; ++s) {
        step(state, config);
        if (s % config.sample_every == 0 || s == config.steps)
            if (observe() == Flow::Stop) break;
    }
    return count;
}

}  // namespace relaxlbm
