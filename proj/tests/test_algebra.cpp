/// @file test_algebra.cpp
/// @brief Relaxation-system matrices, generalized Maxwellian, moment
///        conditions and the stability gate.

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "relaxlbm/algebra.hpp"
#include "relaxlbm/verify.hpp"

using namespace relaxlbm;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

StabilityParams d1_unit(double gamma = 2.0) { return StabilityParams::uniform(1, gamma, 1.0, 1.0, 1.0, 1.0); }

}  // namespace

TEST_SUITE("advection matrix") {
    TEST_CASE("d=1, a2=1, eps=1, gamma=1 has rows (0,1,0), (0,0,1), (0,1,0)") {
        const Matrix A = build_advection_matrix(d1_unit(1.0), 0);
        CHECK(max_abs_difference(A, from_rows({{0, 1, 0}, {0, 0, 1}, {0, 1, 0}})) == 0.0);
    }

    TEST_CASE("zero vector maps to zero") {
        const auto p = StabilityParams::uniform(3, 2.0, 0.3, 1.0, 0.2, 1.5);
        const std::vector<double> zero(7, 0.0);
        for (std::size_t a = 0; a < 3; ++a)
            for (double v : build_advection_matrix(p, a) * std::span<const double>(zero)) CHECK(v == 0.0);
    }

    TEST_CASE("d=3, second axis: first row has a single 1 in the phi_y column") {
        const Matrix A = build_advection_matrix(StabilityParams::uniform(3, 2.0, 1.0, 1.0, 1.0, 1.0), 1);
        for (std::size_t c = 0; c < 7; ++c) CHECK(A(0, c) == (c == 2 ? 1.0 : 0.0));
    }

    TEST_CASE("psi rows carry a2 / eps^delta") {
        const auto p = StabilityParams::uniform(2, 2.0, 0.5, 1.0, 0.1, 2.0);
        const Layout L{2};
        const Matrix A = build_advection_matrix(p, 1);
        CHECK(A(L.psi(1), L.phi(1)) == doctest::Approx(2.0 / 0.25));
        CHECK(A(L.phi(1), L.psi(1)) == 1.0);
        CHECK(A(L.psi(0), L.phi(0)) == 0.0);
    }

    TEST_CASE("invalid axis index") {
        CHECK_THROWS_AS(build_advection_matrix(d1_unit(), 1), std::invalid_argument);
        CHECK_THROWS_AS(build_advection_matrix(StabilityParams::uniform(3, 2, 1, 1, 1, 1), 3), std::invalid_argument);
    }
}

TEST_SUITE("relaxation matrix") {
    TEST_CASE("equal unit relaxation times give the identity") {
        const Matrix S = build_relaxation_matrix(StabilityParams::uniform(3, 2, 1, 1, 1, 1));
        CHECK(max_abs_difference(S, Matrix::identity(7)) == 0.0);
    }

    TEST_CASE("tau = (1, 2, 4) in d=1 gives diag(1, 1/2, 1/4)") {
        auto p = d1_unit();
        p.tau_phi = 2.0;
        p.tau_psi = 4.0;
        CHECK(build_relaxation_matrix(p).diagonal_entries() == std::vector<double>{1.0, 0.5, 0.25});
    }

    TEST_CASE("tau_phi = 0 is rejected") {
        auto p = d1_unit();
        p.tau_phi = 0.0;
        CHECK_THROWS_AS(build_relaxation_matrix(p), std::invalid_argument);
    }
}

TEST_SUITE("diagonalizer") {
    TEST_CASE("d=1, chi2=1 reference matrices") {
        const auto diag = build_diagonalizer(d1_unit());
        CHECK(max_abs_difference(diag.D, from_rows({{1, 1, 1}, {-1, 0, 1}, {1, 0, 1}})) < 1e-15);
        CHECK(max_abs_difference(diag.Dinv, from_rows({{0, -0.5, 0.5}, {1, 0, -1}, {0, 0.5, 0.5}})) < 1e-15);
    }

    TEST_CASE("d=3, chi2=4: the phi block of Dinv has entries +-1/4") {
        const auto diag = build_diagonalizer(StabilityParams::uniform(3, 2.0, 1.0, 1.0, 1.0, 4.0));
        const Layout L{3};
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(diag.Dinv(L.minus(a), L.phi(a)) == doctest::Approx(-0.25));
            CHECK(diag.Dinv(L.plus(a), L.phi(a)) == doctest::Approx(0.25));
            for (std::size_t b = 0; b < 3; ++b)
                if (b != a) CHECK(diag.Dinv(L.minus(a), L.phi(b)) == 0.0);
        }
        CHECK(max_abs_difference(diag.D * diag.Dinv, Matrix::identity(7)) < 1e-15);
    }

    TEST_CASE("non-positive a2 is rejected") {
        auto p = d1_unit();
        p.a2 = {0.0};
        CHECK_THROWS_AS(build_diagonalizer(p), std::invalid_argument);
    }

    TEST_CASE("d=1 diagonal form is diag(-1, 0, 1)") {
        const auto alg = build_algebra(d1_unit());
        CHECK(max_abs_difference(alg.Ad[0], from_rows({{-1, 0, 0}, {0, 0, 0}, {0, 0, 1}})) < 1e-15);
    }

    TEST_CASE("d=3: every diagonal form is traceless with exactly two nonzeros") {
        const auto alg = build_algebra(StabilityParams::uniform(3, 1.0, 0.2, 1.0, 0.3, 1.7));
        for (const auto& Ad : alg.Ad) {
            double trace = 0.0;
            int nonzero = 0;
            for (std::size_t i = 0; i < 7; ++i) {
                trace += Ad(i, i);
                if (std::abs(Ad(i, i)) > 1e-12) ++nonzero;
            }
            CHECK(std::abs(trace) < 1e-12);
            CHECK(nonzero == 2);
        }
    }

    TEST_CASE("a corrupted D is detected") {
        const auto p = d1_unit();
        auto diag = build_diagonalizer(p);
        diag.D(1, 0) = -diag.D(1, 0);
        std::vector<Matrix> A{build_advection_matrix(p, 0)};
        CHECK_THROWS_AS(diagonalize_advection(p, A, diag), ConsistencyError);
    }
}

TEST_SUITE("MRT collision matrix") {
    TEST_CASE("equal relaxation times give K = I / tau") {
        const auto p = StabilityParams::uniform(2, 2.0, 0.7, 2.5, 0.4, 1.1);
        const Matrix K = build_mrt_collision(p);
        CHECK(max_abs_difference(K, Matrix::identity(5) * (1.0 / 2.5)) < 1e-15);
    }

    TEST_CASE("d=1, tau = (1, 1, 2) reference matrix") {
        auto p = d1_unit();
        p.tau_psi = 2.0;
        const Matrix K = build_mrt_collision(p);
        CHECK(max_abs_difference(K, from_rows({{0.75, 0, -0.25}, {0.5, 1, 0.5}, {-0.25, 0, 0.75}})) < 1e-15);
    }

    TEST_CASE("column sums equal 1/tau_rho over random draws") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 100; ++i) {
            const auto p = random_params(rng);
            for (double s : column_sums(build_mrt_collision(p))) CHECK(std::abs(s - 1.0 / p.tau_rho) < 1e-13);
        }
    }
}

TEST_CASE("randomized identities over 100 draws") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_params(rng);
        const auto alg = build_algebra(p);
        const std::size_t n = p.size();
        CHECK(max_abs_difference(alg.D * alg.Dinv, Matrix::identity(n)) < 1e-12);
        CHECK(max_abs_difference(mrt_collision_closed_form(p), alg.Dinv * alg.S * alg.D) < 1e-12);
        const Layout L{p.d};
        for (std::size_t a = 0; a < alg.Ad.size(); ++a) {
            CHECK(max_abs_off_diagonal(alg.Ad[a]) < 1e-12);
            // Nonzero entries are -+sqrt(chi2) with opposite signs.
            const double c = std::sqrt(p.chi2(a));
            CHECK(alg.Ad[a](L.minus(a), L.minus(a)) == doctest::Approx(-c).epsilon(1e-12));
            CHECK(alg.Ad[a](L.plus(a), L.plus(a)) == doctest::Approx(c).epsilon(1e-12));
        }
        CHECK(moment_basis_check(p) < 1e-10);
    }
}

TEST_SUITE("generalized Maxwellian") {
    TEST_CASE("eta = 0 gives the zero vector") {
        const auto p = StabilityParams::uniform(3, 2.0, 0.4, 1.0, 0.3, 1.0);
        for (double g : maxwellian({0.4, 0.0, {0.1, -0.2, 0.3}}, p)) CHECK(g == 0.0);
    }

    TEST_CASE("d=1, a1=a2=1, eps=1, u=0, eta=1 gives (1/2, 0, 1/2)") {
        const auto g = maxwellian({1.0, 1.0, {0.0}}, d1_unit());
        CHECK(g == std::vector<double>{0.5, 0.0, 0.5});
    }

    TEST_CASE("d=1 closed form with flux") {
        // minus/plus: (a eta -+ sqrt(eps^delta / a2) u eta) / 2, rest: (1 - a) eta, a = a1/a2.
        const auto p = StabilityParams::uniform(1, 2.0, 0.5, 1.0, 0.5, 2.0);
        const double a = 0.25, flux = std::sqrt(0.25 / 2.0) * 0.3 * 1.5;
        const auto g = maxwellian({0.5, 1.5, {0.3}}, p);
        CHECK(g[0] == doctest::Approx((a * 1.5 - flux) / 2).epsilon(1e-15));
        CHECK(g[1] == doctest::Approx((1 - a) * 1.5).epsilon(1e-15));
        CHECK(g[2] == doctest::Approx((a * 1.5 + flux) / 2).epsilon(1e-15));
    }

    TEST_CASE("component sum equals eta and first moment equals the flux") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> eta_dist(-2.0, 2.0), u_dist(-0.5, 0.5);
        for (int i = 0; i < 100; ++i) {
            const auto p = random_params(rng);
            std::vector<double> u(static_cast<std::size_t>(p.d));
            for (auto& v : u) v = u_dist(rng);
            const double eta = eta_dist(rng);
            const auto g = maxwellian({p.epsilon, eta, u}, p);
            double sum = 0.0;
            for (double v : g) sum += v;
            CHECK(std::abs(sum - eta) < 1e-12);
        }
    }

    TEST_CASE("epsilon = 0 limit for gamma > 1") {
        const auto p = StabilityParams::uniform(1, 2.0, 0.5, 1.0, 0.5, 1.0);
        const auto g = maxwellian({0.0, 2.0, {0.7}}, p);
        CHECK(g[0] == doctest::Approx(0.5));
        CHECK(g[2] == doctest::Approx(0.5));
    }
}

TEST_SUITE("moment conditions") {
    TEST_CASE("a1 = mu with linear flux passes M1 to M4") {
        const auto p = StabilityParams::uniform(3, 2.0, 0.3, 1.0, 0.05, 1.0);
        MomentCheckInput in;
        in.mu = 0.05;
        in.flux_velocity = {0.1, -0.2, 0.05};
        in.etas = {-1.0, 0.3, 1.7};
        in.epsilons = {1.0, 0.5, 0.1, 0.01};
        const auto r = verify_moment_conditions(p, in);
        CHECK(r.all_passed());
        CHECK(r.m1.max_residual < 1e-12);
        CHECK(r.m2.max_residual < 1e-12);
        CHECK(r.m3.max_residual < 1e-12);
    }

    TEST_CASE("a1 = 2 mu on the first axis fails M3 with residual mu |eta|") {
        const double mu = 0.05, eta = 1.3;
        auto p = StabilityParams::uniform(2, 2.0, 0.5, 1.0, mu, 1.0);
        p.a1[0] = 2.0 * mu;
        MomentCheckInput in;
        in.mu = mu;
        in.flux_velocity = {0.0, 0.0};
        in.etas = {eta};
        const auto r = verify_moment_conditions(p, in);
        CHECK_FALSE(r.m3.passed);
        CHECK(r.m3.max_residual == doctest::Approx(mu * eta).epsilon(1e-12));
        CHECK(r.m1.passed);
        CHECK(r.m2.passed);
    }

    TEST_CASE("eta = 0 gives exactly zero residuals") {
        const auto p = StabilityParams::uniform(2, 2.0, 0.5, 1.0, 0.3, 1.0);
        MomentCheckInput in;
        in.mu = 0.3;
        in.flux_velocity = {0.2, 0.1};
        in.etas = {0.0};
        const auto r = verify_moment_conditions(p, in);
        CHECK(r.m1.max_residual == 0.0);
        CHECK(r.m2.max_residual == 0.0);
        CHECK(r.m3.max_residual == 0.0);
    }
}

TEST_SUITE("stability gate") {
    TEST_CASE("mu=1, a1=a2=1, eps=1, u_max=0.5 is stable") {
        const double u[] = {0.5};
        CHECK(check_relaxation_stability(d1_unit(), 1.0, u).stable);
    }

    TEST_CASE("zero advection with a2 = a1 = mu is stable") {
        const auto p = StabilityParams::uniform(3, 2.0, 0.2, 1.0, 0.1, 0.1);
        const double u[] = {0.0, 0.0, 0.0};
        CHECK(check_relaxation_stability(p, 0.1, u).stable);
    }

    TEST_CASE("a2 = a1/2 reports clause (ii)") {
        const auto p = StabilityParams::uniform(1, 2.0, 1.0, 1.0, 1.0, 0.5);
        const double u[] = {0.0};
        const auto v = check_relaxation_stability(p, 1.0, u);
        CHECK_FALSE(v.stable);
        CHECK(v.violates(StabilityClause::SpeedDominatesDiffusion));
        CHECK(v.summary().find("(ii)") != std::string::npos);
    }

    TEST_CASE("strong sub-characteristic violation reports clause (iii)") {
        const double u[] = {100.0};
        const auto v = check_relaxation_stability(d1_unit(), 1.0, u);
        CHECK(v.violates(StabilityClause::SubCharacteristic));
        CHECK_FALSE(v.violates(StabilityClause::DiffusionMatchesMu));
    }

    TEST_CASE("constructed negative cases name the expected clauses") {
        const auto cases = negative_stability_cases();
        CHECK(cases.size() == 10);
        for (const auto& c : cases) {
            CAPTURE(c.label);
            const auto v = check_relaxation_stability(c.params, c.mu, c.u_max);
            CHECK_FALSE(v.stable);
            REQUIRE(v.violations.size() == c.expected.size());
            for (std::size_t k = 0; k < c.expected.size(); ++k) {
                CHECK(v.violations[k].clause == c.expected[k].first);
                CHECK(v.violations[k].axis == c.expected[k].second);
            }
        }
    }

    TEST_CASE("negative u_max is rejected") {
        const double u[] = {-0.1};
        CHECK_THROWS_AS(check_relaxation_stability(d1_unit(), 1.0, u), std::invalid_argument);
    }

    TEST_CASE("stable sets with sum a1/a2 <= 1 have non-decreasing Maxwellian components") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int checked = 0;
        while (checked < 100) {
            auto p = random_params(rng);
            const double mu = p.a1[0];
            for (auto& a : p.a1) a = mu;
            double ratio = 0.0;
            for (std::size_t a = 0; a < p.a1.size(); ++a) ratio += p.a1[a] / p.a2[a];
            if (ratio > 1.0) continue;
            std::vector<double> u(p.a1.size());
            for (std::size_t a = 0; a < u.size(); ++a)
                u[a] = (2.0 * unit(rng) - 1.0) * p.a1[a] / std::sqrt(p.epsilon_delta() * p.a2[a]);
            std::vector<double> u_abs(u.size());
            for (std::size_t a = 0; a < u.size(); ++a) u_abs[a] = std::abs(u[a]);
            if (!check_relaxation_stability(p, mu, u_abs).stable) continue;
            ++checked;
            std::vector<double> prev = maxwellian({p.epsilon, -1.0, u}, p);
            for (int k = 1; k <= 200; ++k) {
                const auto g = maxwellian({p.epsilon, -1.0 + k * 0.01, u}, p);
                for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] - prev[i] >= -1e-15);
                prev = g;
            }
        }
    }
}

TEST_SUITE("closed equation") {
    TEST_CASE("gamma=2, tau_phi=1: diffusion prefactor equals a1") {
        auto p = StabilityParams::uniform(2, 2.0, 0.3, 1.0, 0.2, 1.0);
        p.a1 = {0.2, 0.4};
        const auto c = closed_equation_coefficients(p);
        CHECK(c.diffusion_prefactors[0] == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(c.diffusion_prefactors[1] == doctest::Approx(0.4).epsilon(1e-15));
    }

    TEST_CASE("gamma=1, eps=0.1: diffusion prefactor is 0.1 mu") {
        const auto c = closed_equation_coefficients(StabilityParams::uniform(1, 1.0, 0.1, 1.0, 0.05, 1.0));
        CHECK(c.diffusion_prefactors[0] == doctest::Approx(0.005).epsilon(1e-14));
    }

    TEST_CASE("gamma=2, unit taus: second time derivative prefactor is -2 eps^2") {
        const auto c = closed_equation_coefficients(StabilityParams::uniform(1, 2.0, 0.3, 1.0, 0.05, 2.0));
        CHECK(c.rhs_tt == doctest::Approx(-2.0 * 0.09).epsilon(1e-14));
        CHECK(c.rhs_alpha_t == doctest::Approx(-0.09).epsilon(1e-14));
        CHECK(c.rhs_ttt == doctest::Approx(-0.0081).epsilon(1e-14));
        CHECK(c.rhs_alpha_alpha_t[0] == doctest::Approx(0.09 * 2.0).epsilon(1e-14));
    }
}

TEST_SUITE("moment basis") {
    TEST_CASE("d=1: first column of D is an eigenvector with eigenvalue -sqrt(chi2)") {
        const auto p = StabilityParams::uniform(1, 2.0, 0.5, 1.0, 0.3, 3.0);
        const auto diag = build_diagonalizer(p);
        const Matrix A = build_advection_matrix(p, 0);
        const std::vector<double> v{diag.D(0, 0), diag.D(1, 0), diag.D(2, 0)};
        const auto Av = A * std::span<const double>(v);
        const double c = std::sqrt(p.chi2(0));
        for (std::size_t i = 0; i < 3; ++i) CHECK(Av[i] == doctest::Approx(-c * v[i]).epsilon(1e-14));
    }

    TEST_CASE("rest column is in the kernel of every A") {
        const auto p = StabilityParams::uniform(3, 2.0, 0.5, 1.0, 0.3, 3.0);
        const auto diag = build_diagonalizer(p);
        const Layout L{3};
        std::vector<double> v(7);
        for (std::size_t i = 0; i < 7; ++i) v[i] = diag.D(i, L.rest());
        for (std::size_t a = 0; a < 3; ++a)
            for (double x : build_advection_matrix(p, a) * std::span<const double>(v)) CHECK(std::abs(x) < 1e-14);
    }

    TEST_CASE("identity parameters pass for every column and axis") {
        CHECK(moment_basis_check(StabilityParams::uniform(3, 2, 1, 1, 1, 1)) < 1e-14);
    }
}
