#include "relaxlbm/trs.hpp"

#include <cmath>
#include <utility>

#include "relaxlbm/benchmarks.hpp"
#include "relaxlbm/parallel.hpp"

namespace relaxlbm {

namespace {

void build_propagators(TrsState& s) {
    const StabilityParams& p = s.params;
    const Matrix K = build_mrt_collision(p);
    // G(g) = m (1^T g) with m the Maxwellian of unit density.
    const std::vector<double> m = maxwellian({p.epsilon, 1.0, {s.flux_velocity}}, p);
    const std::vector<double> ones(3, 1.0);
    const Matrix projector = Matrix::identity(3) - outer(m, ones);
    s.generator = K * projector * (-1.0 / std::pow(p.epsilon, p.gamma));
    s.propagator = expm(s.generator * s.dt_rs);
}

}  // namespace

TrsState init_trs(const std::function<double(double)>& rho0, const TrsSetup& setup, const TrsGrid& grid) {
    const StabilityParams& p = setup.params;
    p.validate();
    if (p.d != 1) throw std::invalid_argument("init_trs: only d = 1 is supported");
    if (grid.cells < 2) throw std::invalid_argument("init_trs: need at least two cells");
    if (!(grid.cfl > 0.0 && grid.cfl <= 0.9)) throw std::invalid_argument("init_trs: CFL must lie in (0, 0.9]");

    const double u_max[] = {std::abs(setup.flux_velocity)};
    StabilityVerdict verdict = check_relaxation_stability(p, setup.mu, u_max);
    if (!verdict.stable && !setup.override_stability)
        throw StabilityGateError("init_trs refused: " + verdict.summary(), std::move(verdict));

    TrsState s;
    s.params = p;
    s.flux_velocity = setup.flux_velocity;
    s.dx = grid.length / static_cast<double>(grid.cells);
    const double c = std::sqrt(p.chi2(0));
    s.speeds = {-c, 0.0, c};
    s.dt_rs = grid.cfl * s.dx / c;

    s.x.resize(grid.cells);
    for (auto& comp : s.g) comp.assign(grid.cells, 0.0);
    for (std::size_t j = 0; j < grid.cells; ++j) {
        s.x[j] = -0.5 * grid.length + (static_cast<double>(j) + 0.5) * s.dx;
        const auto g0 = maxwellian({p.epsilon, rho0(s.x[j]), {setup.flux_velocity}}, p);
        for (std::size_t i = 0; i < 3; ++i) s.g[i][j] = g0[i];
    }
    build_propagators(s);
    return s;
}

namespace {

void transport(TrsState& s, double dt) {
    const std::size_t n = s.x.size();
    std::vector<double> next(n);
    for (std::size_t i = 0; i < 3; ++i) {
        const double nu = s.speeds[i] * dt / s.dx;
        if (nu == 0.0) continue;
        const auto& g = s.g[i];
        if (nu > 0.0) {
            for (std::size_t j = 0; j < n; ++j) next[j] = g[j] - nu * (g[j] - g[(j + n - 1) % n]);
        } else {
            for (std::size_t j = 0; j < n; ++j) next[j] = g[j] - nu * (g[(j + 1) % n] - g[j]);
        }
        s.g[i].swap(next);
    }
}

void relax(TrsState& s, const Matrix& P) {
    const std::size_t n = s.x.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double v[3] = {s.g[0][j], s.g[1][j], s.g[2][j]};
        for (std::size_t r = 0; r < 3; ++r) s.g[r][j] = P(r, 0) * v[0] + P(r, 1) * v[1] + P(r, 2) * v[2];
    }
}

}  // namespace

void step_trs(TrsState& s, double dt) {
    const double c = std::abs(s.speeds[2]);
    if (!(dt > 0.0) || dt > 0.9 * s.dx / c * (1.0 + 1e-12))
        throw std::invalid_argument("step_trs: time step violates the advective CFL bound");
    transport(s, dt);
    if (dt == s.dt_rs)
        relax(s, s.propagator);
    else
        relax(s, expm(s.generator * dt));
    s.time += dt;
}

void step_trs(TrsState& s) { step_trs(s, s.dt_rs); }

void advance_to(TrsState& s, double horizon) {
    while (s.time < horizon) {
        const double remaining = horizon - s.time;
        if (remaining <= s.dt_rs * (1.0 + 1e-12)) {
            step_trs(s, remaining);
            s.time = horizon;
        } else {
            step_trs(s);
        }
    }
}

std::vector<double> trs_density(const TrsState& s) {
    std::vector<double> rho(s.x.size());
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = s.g[0][j] + s.g[1][j] + s.g[2][j];
    return rho;
}

double trs_mass(const TrsState& s) {
    CompensatedSum total;
    for (const auto& comp : s.g)
        for (double v : comp) total.add(v);
    return total.value();
}

std::vector<RsLimitRow> relaxation_limit_sweep(const std::function<double(double)>& rho0,
                                               const std::function<double(double, double)>& analytic,
                                               std::span<const double> epsilons, const TrsSetup& base,
                                               const TrsGrid& grid, double horizon) {
    std::vector<RsLimitRow> rows;
    for (double eps : epsilons) {
        RsLimitRow row;
        row.epsilon = eps;
        TrsSetup setup = base;
        setup.params.epsilon = eps;
        try {
            TrsState s = init_trs(rho0, setup, grid);
            advance_to(s, horizon);
            const auto rho = trs_density(s);
            std::vector<double> exact(rho.size());
            for (std::size_t j = 0; j < rho.size(); ++j) exact[j] = analytic(s.x[j], horizon);
            row.error = relative_l2_error(rho, exact);
            row.status = std::isfinite(row.error) && row.error <= 1e3 ? "ok" : "blowup";
        } catch (const StabilityGateError& e) {
            row.error = NAN;
            row.status = "unstable";
            row.detail = e.verdict().summary();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace relaxlbm
