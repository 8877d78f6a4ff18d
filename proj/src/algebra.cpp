#include "relaxlbm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relaxlbm {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_axis(const StabilityParams& p, std::size_t axis) {
    require(axis < static_cast<std::size_t>(p.d),
            "axis index " + std::to_string(axis) + " out of range for d = " + std::to_string(p.d));
}

double max_chi2(const StabilityParams& p) {
    double m = 0.0;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) m = std::max(m, p.chi2(a));
    return m;
}

}  // namespace

StabilityParams StabilityParams::uniform(int d, double gamma, double epsilon, double tau,
                                         double a1, double a2) {
    StabilityParams p;
    p.d = d;
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.tau_rho = p.tau_phi = p.tau_psi = tau;
    if (d > 0) {
        p.a1.assign(static_cast<std::size_t>(d), a1);
        p.a2.assign(static_cast<std::size_t>(d), a2);
    }
    return p;
}

double StabilityParams::epsilon_delta() const { return std::pow(epsilon, delta()); }

double StabilityParams::chi1(std::size_t axis) const { return a1.at(axis) / epsilon_delta(); }

double StabilityParams::chi2(std::size_t axis) const { return a2.at(axis) / epsilon_delta(); }

void StabilityParams::validate() const {
    require(d >= 1 && d <= 3, "dimension d must be 1, 2 or 3");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive");
    require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
    require(tau_rho > 0.0 && std::isfinite(tau_rho), "tau_rho must be positive");
    require(tau_phi > 0.0 && std::isfinite(tau_phi), "tau_phi must be positive");
    require(tau_psi > 0.0 && std::isfinite(tau_psi), "tau_psi must be positive");
    require(a1.size() == static_cast<std::size_t>(d), "a1 must have d entries");
    require(a2.size() == static_cast<std::size_t>(d), "a2 must have d entries");
    for (std::size_t a = 0; a < a1.size(); ++a) {
        require(std::isfinite(a1[a]) && a1[a] > 0.0, "a1 entries must be positive");
        require(std::isfinite(a2[a]) && a2[a] > 0.0,
                "a2 entries must be positive (square root of C2 required)");
    }
}

Matrix build_advection_matrix(const StabilityParams& p, std::size_t axis) {
    p.validate();
    require_axis(p, axis);
    const Layout L{p.d};
    Matrix A(L.size(), L.size());
    A(L.rho(), L.phi(axis)) = 1.0;
    A(L.phi(axis), L.psi(axis)) = 1.0;
    A(L.psi(axis), L.phi(axis)) = p.chi2(axis);
    return A;
}

Matrix build_relaxation_matrix(const StabilityParams& p) {
    p.validate();
    const Layout L{p.d};
    Matrix S(L.size(), L.size());
    S(L.rho(), L.rho()) = 1.0 / p.tau_rho;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) {
        S(L.phi(a), L.phi(a)) = 1.0 / p.tau_phi;
        S(L.psi(a), L.psi(a)) = 1.0 / p.tau_psi;
    }
    return S;
}

Diagonalizer build_diagonalizer(const StabilityParams& p) {
    p.validate();
    const Layout L{p.d};
    const std::size_t n = L.size();
    Matrix D(n, n);
    Matrix Dinv(n, n);

    // D: rows in RS ordering, columns in TRS ordering.
    for (std::size_t c = 0; c < n; ++c) D(L.rho(), c) = 1.0;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) {
        const double chi = p.chi2(a);
        const double root = std::sqrt(chi);
        D(L.phi(a), L.minus(a)) = -root;
        D(L.phi(a), L.plus(a)) = root;
        D(L.psi(a), L.minus(a)) = chi;
        D(L.psi(a), L.plus(a)) = chi;

        Dinv(L.minus(a), L.phi(a)) = -0.5 / root;
        Dinv(L.minus(a), L.psi(a)) = 0.5 / chi;
        Dinv(L.rest(), L.psi(a)) = -1.0 / chi;
        Dinv(L.plus(a), L.phi(a)) = 0.5 / root;
        Dinv(L.plus(a), L.psi(a)) = 0.5 / chi;
    }
    Dinv(L.rest(), L.rho()) = 1.0;

    const double residual = max_abs_difference(D * Dinv, Matrix::identity(n));
    if (residual > 1e-12)
        throw ConsistencyError("build_diagonalizer: D * Dinv deviates from identity by " +
                               std::to_string(residual));
    return {std::move(D), std::move(Dinv)};
}

std::vector<Matrix> diagonalize_advection(const StabilityParams& p, std::span<const Matrix> advection,
                                          const Diagonalizer& diag) {
    p.validate();
    require(advection.size() == static_cast<std::size_t>(p.d), "need one advection matrix per axis");
    const Layout L{p.d};
    // Absolute 1e-12 at O(1) scale; entries of A D grow like chi^(3/2).
    const double tol = 1e-12 * std::max(1.0, max_chi2(p));

    std::vector<Matrix> out;
    out.reserve(advection.size());
    for (std::size_t axis = 0; axis < advection.size(); ++axis) {
        Matrix Ad = diag.Dinv * advection[axis] * diag.D;
        const double off = max_abs_off_diagonal(Ad);
        if (off > tol)
            throw ConsistencyError("diagonalize_advection: off-diagonal residual " + std::to_string(off) +
                                   " on axis " + std::to_string(axis));
        const double root = std::sqrt(p.chi2(axis));
        for (std::size_t i = 0; i < L.size(); ++i) {
            double expected = 0.0;
            if (i == L.minus(axis)) expected = -root;
            if (i == L.plus(axis)) expected = root;
            if (std::abs(Ad(i, i) - expected) > tol)
                throw ConsistencyError("diagonalize_advection: eigenvalue pairing broken at slot " +
                                       std::to_string(i) + " on axis " + std::to_string(axis));
        }
        out.push_back(std::move(Ad));
    }
    return out;
}

Matrix mrt_collision_closed_form(const StabilityParams& p) {
    p.validate();
    const Layout L{p.d};
    const double w_phi = 1.0 / p.tau_phi;
    const double w_psi = 1.0 / p.tau_psi;
    const double w_rho = 1.0 / p.tau_rho;
    const double diag = 0.5 * (w_phi + w_psi);
    const double cross = -0.5 * (w_phi - w_psi);

    Matrix K(L.size(), L.size());
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) {
        K(L.minus(a), L.minus(a)) = diag;
        K(L.minus(a), L.plus(a)) = cross;
        K(L.plus(a), L.minus(a)) = cross;
        K(L.plus(a), L.plus(a)) = diag;
        K(L.rest(), L.minus(a)) = w_rho - w_psi;
        K(L.rest(), L.plus(a)) = w_rho - w_psi;
    }
    K(L.rest(), L.rest()) = w_rho;
    return K;
}

Matrix build_mrt_collision(const StabilityParams& p) {
    Matrix K = mrt_collision_closed_form(p);
    const Diagonalizer diag = build_diagonalizer(p);
    const Matrix numeric = diag.Dinv * build_relaxation_matrix(p) * diag.D;
    const double mismatch = max_abs_difference(K, numeric);
    if (mismatch > 1e-12)
        throw ConsistencyError("build_mrt_collision: closed form differs from Dinv S D by " +
                               std::to_string(mismatch));
    return K;
}

RelaxationAlgebra build_algebra(const StabilityParams& p) {
    p.validate();
    RelaxationAlgebra alg;
    alg.params = p;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a)
        alg.A.push_back(build_advection_matrix(p, a));
    alg.S = build_relaxation_matrix(p);
    Diagonalizer diag = build_diagonalizer(p);
    alg.Ad = diagonalize_advection(p, alg.A, diag);
    alg.D = std::move(diag.D);
    alg.Dinv = std::move(diag.Dinv);
    alg.K = build_mrt_collision(p);
    return alg;
}

std::vector<double> maxwellian(const MaxwellianInput& in, const StabilityParams& p) {
    require(p.d >= 1 && p.d <= 3, "dimension d must be 1, 2 or 3");
    require(in.epsilon >= 0.0 && in.epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(in.flux_velocity.size() == static_cast<std::size_t>(p.d), "flux velocity must have d entries");
    require(p.a1.size() == static_cast<std::size_t>(p.d) && p.a2.size() == static_cast<std::size_t>(p.d),
            "a1 and a2 must have d entries");

    const Layout L{p.d};
    const double eps_delta = std::pow(in.epsilon, p.delta());
    const bool flux_free =
        std::all_of(in.flux_velocity.begin(), in.flux_velocity.end(), [](double u) { return u == 0.0; });
    if (std::isinf(eps_delta) && !flux_free)
        throw std::invalid_argument("maxwellian: epsilon -> 0 limit does not exist for gamma < 1 with a flux");

    std::vector<double> g(L.size(), 0.0);
    double a_sum = 0.0;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) {
        require(p.a2[a] > 0.0, "a2 entries must be positive");
        const double ratio = p.a1[a] / p.a2[a];
        a_sum += ratio;
        // (C2)^(-1/2) F = sqrt(eps^delta / a2) u eta, finite at eps = 0 for delta >= 0.
        const double flux_term = flux_free ? 0.0 : std::sqrt(eps_delta / p.a2[a]) * in.flux_velocity[a] * in.eta;
        g[L.minus(a)] = 0.5 * (ratio * in.eta - flux_term);
        g[L.plus(a)] = 0.5 * (ratio * in.eta + flux_term);
    }
    g[L.rest()] = (1.0 - a_sum) * in.eta;
    return g;
}

MomentReport verify_moment_conditions(const StabilityParams& p, const MomentCheckInput& in) {
    p.validate();
    require(in.flux_velocity.size() == static_cast<std::size_t>(p.d), "flux velocity must have d entries");
    const Layout L{p.d};
    const std::size_t d = static_cast<std::size_t>(p.d);

    const RelaxationAlgebra alg = build_algebra(p);
    const double sqrt_eps_delta = std::sqrt(p.epsilon_delta());
    std::vector<double> epsilons = in.epsilons;
    if (epsilons.empty()) epsilons.push_back(p.epsilon);

    MomentReport r;
    r.m1.name = "M1";
    r.m2.name = "M2";
    r.m3.name = "M3";
    r.m4.name = "M4";

    // M1 and M2 at every sampled epsilon; A^d depends on epsilon, so rebuild.
    for (double eps : epsilons) {
        StabilityParams pe = p;
        pe.epsilon = eps;
        const RelaxationAlgebra ae = eps == p.epsilon ? alg : build_algebra(pe);
        for (double eta : in.etas) {
            const auto g = maxwellian({eps, eta, in.flux_velocity}, p);
            double sum = 0.0;
            for (double v : g) sum += v;
            r.m1.max_residual = std::max(r.m1.max_residual, std::abs(sum - eta));
            for (std::size_t a = 0; a < d; ++a) {
                double first = 0.0;
                for (std::size_t i = 0; i < L.size(); ++i) first += ae.Ad[a](i, i) * g[i];
                r.m2.max_residual =
                    std::max(r.m2.max_residual, std::abs(first - in.flux_velocity[a] * eta));
            }
        }
    }

    // M3 on the epsilon -> 0 Maxwellian, with sqrt(eps^delta) applied to A^d.
    std::size_t worst_a = 0, worst_b = 0;
    for (double eta : in.etas) {
        const auto g0 = maxwellian({0.0, eta, in.flux_velocity}, p);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                double second = 0.0;
                for (std::size_t i = 0; i < L.size(); ++i)
                    second += (sqrt_eps_delta * alg.Ad[a](i, i)) * (sqrt_eps_delta * alg.Ad[b](i, i)) * g0[i];
                const double target = a == b ? in.mu * eta : 0.0;
                const double res = std::abs(second - target);
                if (res > r.m3.max_residual) {
                    r.m3.max_residual = res;
                    worst_a = a;
                    worst_b = b;
                }
            }
    }

    // M4: sup over eta of |G(eps) - G(0)| along a decreasing epsilon grid.
    static constexpr double kEpsGrid[] = {1.0, 0.5, 0.25, 0.1, 1e-2, 1e-4, 1e-8,
                                          1e-16, 1e-32, 1e-64, 1e-128, 1e-256};
    double eta_scale = 1.0;
    for (double eta : in.etas) eta_scale = std::max(eta_scale, std::abs(eta));
    bool monotone = true;
    double previous = INFINITY;
    double last = 0.0;
    try {
        for (double eps : kEpsGrid) {
            double sup = 0.0;
            for (double eta : in.etas) {
                const auto ge = maxwellian({eps, eta, in.flux_velocity}, p);
                const auto g0 = maxwellian({0.0, eta, in.flux_velocity}, p);
                for (std::size_t i = 0; i < L.size(); ++i) sup = std::max(sup, std::abs(ge[i] - g0[i]));
            }
            if (sup > previous + in.tol * eta_scale) monotone = false;
            previous = sup;
            last = sup;
        }
        r.m4.max_residual = last;
        r.m4.passed = monotone && last <= in.tol * eta_scale;
        if (!monotone) r.m4.detail = "sup-distance to the limit is not non-increasing";
    } catch (const std::invalid_argument& e) {
        r.m4.max_residual = INFINITY;
        r.m4.passed = false;
        r.m4.detail = e.what();
    }

    r.m1.passed = r.m1.max_residual < in.tol;
    r.m2.passed = r.m2.max_residual < in.tol;
    r.m3.passed = r.m3.max_residual < in.tol;
    if (!r.m3.passed) {
        std::ostringstream os;
        os << "worst at (alpha, beta) = (" << worst_a << ", " << worst_b << ")";
        r.m3.detail = os.str();
    }
    return r;
}

std::string to_string(StabilityClause clause) {
    switch (clause) {
        case StabilityClause::DiffusionMatchesMu: return "(i) a1 = mu";
        case StabilityClause::SpeedDominatesDiffusion: return "(ii) a2 >= a1";
        case StabilityClause::SubCharacteristic: return "(iii) a1/sqrt(eps^delta a2) >= |F'|";
    }
    return "unknown";
}

bool StabilityVerdict::violates(StabilityClause clause) const {
    return std::any_of(violations.begin(), violations.end(),
                       [clause](const StabilityViolation& v) { return v.clause == clause; });
}

std::string StabilityVerdict::summary() const {
    if (stable) return "relaxation-stable";
    std::ostringstream os;
    os << "not relaxation-stable:";
    const char* sep = " ";
    for (const auto& v : violations) {
        os << sep << "clause " << to_string(v.clause) << " on axis " << v.axis << " (" << v.detail << ")";
        sep = "; ";
    }
    return os.str();
}

StabilityVerdict check_relaxation_stability(const StabilityParams& p, double mu,
                                            std::span<const double> u_max) {
    p.validate();
    require(u_max.size() == static_cast<std::size_t>(p.d), "u_max must have d entries");
    for (double u : u_max) require(u >= 0.0, "u_max entries must be non-negative");

    StabilityVerdict v;
    const double eps_delta = p.epsilon_delta();
    double a_sum = 0.0;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) {
        std::ostringstream os;
        if (std::abs(p.a1[a] - mu) > 1e-12 * std::max(1.0, std::abs(mu))) {
            os << "a1 = " << p.a1[a] << ", mu = " << mu;
            v.violations.push_back({StabilityClause::DiffusionMatchesMu, a, os.str()});
            os.str("");
        }
        if (p.a2[a] < p.a1[a]) {
            os << "a2 = " << p.a2[a] << " < a1 = " << p.a1[a];
            v.violations.push_back({StabilityClause::SpeedDominatesDiffusion, a, os.str()});
            os.str("");
        }
        const double bound = p.a1[a] / std::sqrt(eps_delta * p.a2[a]);
        if (bound < u_max[a]) {
            os << "bound " << bound << " < |F'| = " << u_max[a];
            v.violations.push_back({StabilityClause::SubCharacteristic, a, os.str()});
        }
        a_sum += p.a1[a] / p.a2[a];
    }
    v.stable = v.violations.empty();
    v.rest_nonnegative = a_sum <= 1.0;
    return v;
}

ClosedEquationCoefficients closed_equation_coefficients(const StabilityParams& p) {
    p.validate();
    const double eg = std::pow(p.epsilon, p.gamma);
    const double e2mg = std::pow(p.epsilon, 2.0 - p.gamma);
    ClosedEquationCoefficients c;
    for (std::size_t a = 0; a < static_cast<std::size_t>(p.d); ++a) {
        c.diffusion_prefactors.push_back(e2mg * p.tau_phi * p.a1[a]);
        // eps^gamma tau_phi * eps^(2-gamma) tau_psi a2
        c.rhs_alpha_alpha_t.push_back(eg * p.tau_phi * e2mg * p.tau_psi * p.a2[a]);
    }
    c.rhs_tt = -eg * p.tau_phi * (1.0 + p.tau_psi / p.tau_phi);
    c.rhs_alpha_t = -eg * p.tau_psi;
    c.rhs_ttt = -eg * eg * p.tau_phi * p.tau_psi;
    return c;
}

double eigen_residual(const std::vector<Matrix>& advection, const Matrix& D,
                      const std::vector<Matrix>& diagonal) {
    const std::size_t n = D.rows();
    double worst = 0.0;
    for (std::size_t a = 0; a < advection.size(); ++a) {
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<double> v(n);
            for (std::size_t r = 0; r < n; ++r) v[r] = D(r, c);
            const auto Av = advection[a] * std::span<const double>(v);
            const double lambda = diagonal[a](c, c);
            double res = 0.0, scale = 1.0;
            for (std::size_t r = 0; r < n; ++r) {
                res = std::max(res, std::abs(Av[r] - lambda * v[r]));
                scale = std::max(scale, std::abs(Av[r]));
            }
            // Relative to the magnitude of A v: entries reach chi^(3/2).
            worst = std::max(worst, res / scale);
        }
    }
    return worst;
}

double moment_basis_check(const StabilityParams& p, double tol) {
    const RelaxationAlgebra alg = build_algebra(p);
    const double res = eigen_residual(alg.A, alg.D, alg.Ad);
    if (res > tol)
        throw ConsistencyError("moment_basis_check: eigen-residual " + std::to_string(res) + " exceeds tolerance");
    return res;
}

}  // namespace relaxlbm
