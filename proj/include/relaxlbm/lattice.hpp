/// @file lattice.hpp
/// @brief Second-order SRT lattice Boltzmann solver for the advection-diffusion
///        equation on a periodic grid.
///
/// Populations are stored as one contiguous field per direction. Streaming is
/// a whole-field periodic shift into a second buffer followed by a swap.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "relaxlbm/stencil.hpp"

namespace relaxlbm {

using Extents = std::array<std::size_t, 3>;

/// (N,1,1), (N,N,1) or (N,N,N).
Extents cubic_extents(int d, std::size_t N);

class LatticeState {
public:
    LatticeState(Stencil stencil, Extents extents, UnitSystem units);

    const Stencil& stencil() const noexcept { return stencil_; }
    const Extents& extents() const noexcept { return extents_; }
    const UnitSystem& units() const noexcept { return units_; }
    std::size_t cells() const noexcept { return cells_; }
    std::size_t q() const noexcept { return static_cast<std::size_t>(stencil_.q); }

    std::span<double> population(std::size_t i) noexcept { return {f_.data() + i * cells_, cells_}; }
    std::span<const double> population(std::size_t i) const noexcept { return {f_.data() + i * cells_, cells_}; }

    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return x + extents_[0] * (y + extents_[1] * z);
    }

    /// Cell-centre coordinate on (-l_c/2, l_c/2) along axis.
    double cell_center(std::size_t axis, std::size_t j) const noexcept;

    std::int64_t t_lattice = 0;

private:
    friend void stream(LatticeState& state);

    Stencil stencil_;
    Extents extents_;
    UnitSystem units_;
    std::size_t cells_;
    std::vector<double> f_;
    std::vector<double> scratch_;
};

struct SolverConfig {
    double tau = 1.0;               ///< lattice relaxation time, > 1/2
    std::vector<double> u_lattice;  ///< constant advection velocity, one entry per stencil axis
    std::int64_t steps = 0;
    std::int64_t sample_every = 1;

    void validate(const Stencil& stencil) const;
};

/// omega = dt / tau in lattice units, paired with mu = c_s^2 (tau - dt/2).
double collision_frequency(double tau);

using DensitySampler = std::function<double(const std::array<double, 3>& x)>;

/// f_i = f_i^eq(rho0(x), u) at every cell.
LatticeState initialize(const Stencil& stencil, const Extents& extents, const UnitSystem& units,
                        const DensitySampler& rho0, std::span<const double> u_lattice);

void collide(LatticeState& state, const SolverConfig& config);
void stream(LatticeState& state);
/// Collide, stream, advance t_lattice.
void step(LatticeState& state, const SolverConfig& config);

std::vector<double> density(const LatticeState& state);
void density(const LatticeState& state, std::span<double> out);

/// Total mass, deterministic compensated sum.
double total_mass(const LatticeState& state);

enum class Flow { Continue, Stop };
using Observer = std::function<Flow(std::int64_t t_lattice, std::span<const double> density)>;

/// Advances config.steps steps, observing at t = 0, every sample_every
/// steps, and at the last step. Returns the number of observations made.
std::size_t run(LatticeState& state, const SolverConfig& config, const Observer& observer);

}  // namespace relaxlbm
