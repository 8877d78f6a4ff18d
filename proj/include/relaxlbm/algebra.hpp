/// @file algebra.hpp
/// @brief The (2d+1)x(2d+1) relaxation-system algebra for the linear
///        advection-diffusion equation.
///
/// Two component orderings appear throughout:
///   - relaxation-system (RS) vector: (rho, phi_1..phi_d, psi_1..psi_d)
///   - transformed (TRS) vector g:    (minus_1..minus_d, rest, plus_1..plus_d)
/// The TRS ordering coincides with the velocity ordering of the DdQ(2d+1)
/// stencils, so a column of D is a moment vector of one lattice direction.
///
/// Axis indices are zero-based: axis in [0, d).

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxlbm/matrix.hpp"

namespace relaxlbm {

/// Raised when two algebraically equivalent routes disagree. This always
/// indicates a transcription bug, never bad user input.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Stability constants of the relaxation system. delta and chi are derived.
struct StabilityParams {
    int d = 3;
    double gamma = 2.0;
    double epsilon = 1.0;
    double tau_rho = 1.0;
    double tau_phi = 1.0;
    double tau_psi = 1.0;
    std::vector<double> a1;  ///< per-axis diffusion constant
    std::vector<double> a2;  ///< per-axis squared characteristic speed

    /// Same a1, a2 on every axis and tau_rho = tau_phi = tau_psi = tau.
    static StabilityParams uniform(int d, double gamma, double epsilon, double tau,
                                   double a1, double a2);

    std::size_t size() const noexcept { return static_cast<std::size_t>(2 * d + 1); }
    double delta() const noexcept { return 2.0 * (gamma - 1.0); }
    double epsilon_delta() const;
    double chi1(std::size_t axis) const;
    double chi2(std::size_t axis) const;

    /// Throws std::invalid_argument on any violated precondition.
    void validate() const;
};

/// Index helpers for both orderings.
struct Layout {
    int d;
    std::size_t size() const noexcept { return static_cast<std::size_t>(2 * d + 1); }
    // TRS / population ordering
    std::size_t minus(std::size_t axis) const noexcept { return axis; }
    std::size_t rest() const noexcept { return static_cast<std::size_t>(d); }
    std::size_t plus(std::size_t axis) const noexcept { return static_cast<std::size_t>(d) + 1 + axis; }
    // RS ordering
    std::size_t rho() const noexcept { return 0; }
    std::size_t phi(std::size_t axis) const noexcept { return 1 + axis; }
    std::size_t psi(std::size_t axis) const noexcept { return 1 + static_cast<std::size_t>(d) + axis; }
};

struct Diagonalizer {
    Matrix D;
    Matrix Dinv;
};

struct RelaxationAlgebra {
    StabilityParams params;
    std::vector<Matrix> A;   ///< advection matrices, one per axis
    Matrix S;                ///< diagonal relaxation matrix
    Matrix D;
    Matrix Dinv;
    std::vector<Matrix> Ad;  ///< Dinv * A * D, one per axis
    Matrix K;                ///< MRT collision matrix Dinv * S * D
};

struct MaxwellianInput {
    double epsilon = 1.0;
    double eta = 0.0;
    std::vector<double> flux_velocity;  ///< u with F(eta) = u * eta
};

struct ClosedEquationCoefficients {
    std::vector<double> diffusion_prefactors;  ///< eps^(2-gamma) tau_phi a1
    double rhs_tt = 0.0;                       ///< -eps^gamma (tau_phi + tau_psi)
    double rhs_alpha_t = 0.0;                  ///< -eps^gamma tau_psi
    double rhs_ttt = 0.0;                      ///< -eps^(2 gamma) tau_phi tau_psi
    std::vector<double> rhs_alpha_alpha_t;     ///< eps^2 tau_phi tau_psi a2
};

Matrix build_advection_matrix(const StabilityParams& params, std::size_t axis);
Matrix build_relaxation_matrix(const StabilityParams& params);
Diagonalizer build_diagonalizer(const StabilityParams& params);

/// Computes Dinv * A_axis * D for every axis and checks that the result is
/// diagonal, with +-sqrt(chi2) on the minus/plus slots of its own axis.
std::vector<Matrix> diagonalize_advection(const StabilityParams& params,
                                          std::span<const Matrix> advection,
                                          const Diagonalizer& diag);

/// Closed form of the MRT collision matrix, no cross-check.
Matrix mrt_collision_closed_form(const StabilityParams& params);

/// Closed form, cross-checked against Dinv * S * D.
Matrix build_mrt_collision(const StabilityParams& params);

/// All of the above, with every internal identity asserted.
RelaxationAlgebra build_algebra(const StabilityParams& params);

/// Generalized Maxwellian in TRS ordering. At epsilon = 0 the pointwise
/// limit is returned (flux term vanishes for gamma > 1).
std::vector<double> maxwellian(const MaxwellianInput& input, const StabilityParams& params);

struct ConditionResult {
    std::string name;
    bool passed = false;
    double max_residual = 0.0;
    std::string detail;
};

struct MomentCheckInput {
    double mu = 0.0;
    std::vector<double> flux_velocity;
    std::vector<double> etas;
    std::vector<double> epsilons;  ///< for M1/M2; empty means {params.epsilon}
    double tol = 1e-12;
};

struct MomentReport {
    ConditionResult m1, m2, m3, m4;
    bool all_passed() const { return m1.passed && m2.passed && m3.passed && m4.passed; }
};

MomentReport verify_moment_conditions(const StabilityParams& params, const MomentCheckInput& input);

enum class StabilityClause {
    DiffusionMatchesMu,       ///< (i)   a1 = mu
    SpeedDominatesDiffusion,  ///< (ii)  a2 >= a1
    SubCharacteristic,        ///< (iii) a1 / sqrt(eps^delta a2) >= |F'|
};

std::string to_string(StabilityClause clause);

struct StabilityViolation {
    StabilityClause clause;
    std::size_t axis;
    std::string detail;
};

struct StabilityVerdict {
    bool stable = true;
    std::vector<StabilityViolation> violations;
    /// Not part of the stability definition; the rest component 1 - sum(a1/a2)
    /// is non-negative. Reported for the monotonicity premise.
    bool rest_nonnegative = true;

    bool violates(StabilityClause clause) const;
    std::string summary() const;
};

StabilityVerdict check_relaxation_stability(const StabilityParams& params, double mu,
                                            std::span<const double> u_max);

ClosedEquationCoefficients closed_equation_coefficients(const StabilityParams& params);

/// Every column of D is a right eigenvector of every A_axis, with the
/// eigenvalue read off the matching diagonal entry of Ad. Returns the worst
/// scaled residual; throws ConsistencyError above tol.
double moment_basis_check(const StabilityParams& params, double tol = 1e-10);

/// Scaled eigen-residual of D's columns against A, used by the check above
/// and by the randomized verification suite.
double eigen_residual(const std::vector<Matrix>& advection, const Matrix& D,
                      const std::vector<Matrix>& diagonal);

}  // namespace relaxlbm
