/// @file benchmarks.hpp
/// @brief Analytic references, error metrics, EOC estimation and the (N, Pe)
///        sweep driver for the smooth and non-smooth advection-diffusion tests.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relaxlbm {

enum class CaseKind { Smooth, NonSmooth };

std::string to_string(CaseKind kind);
CaseKind parse_case_kind(std::string_view text);

/// Periodic box (-l_c/2, l_c/2)^d over (t_start, t_end).
struct BenchmarkCase {
    CaseKind kind = CaseKind::Smooth;
    int d = 3;
    double t_start = 0.0;
    double t_end = 1.52;
    double l_c = 2.0;
    double u_c = 2.5;
    double Pe = 100.0;

    /// Pe = u_c l_c / mu.
    double mu() const { return u_c * l_c / Pe; }
    /// Smooth: u_c (1, .., 1). Non-smooth: u_c e_x.
    std::vector<double> velocity() const;
};

/// prod_alpha sin(pi (x_alpha - u_alpha t)) exp(-d mu pi^2 t) + 1, with d = x.size().
double smooth_solution(std::span<const double> x, double t, std::span<const double> u, double mu);

/// 1/sqrt(4 pi mu dt) + 1 inside (x0 - dx/2, x0 + dx/2), 1 elsewhere.
double nonsmooth_initial(double x, double dx, double dt, double mu, double x0 = 0.0);

/// Diffused, advected 2-periodic Dirac comb plus one. Requires t > 0.
double dirac_comb_solution(double x, double t, double x0, double ux, double mu, double tail_tol = 1e-16);

/// sqrt(sum (numeric - analytic)^2 / sum analytic^2).
double relative_l2_error(std::span<const double> numeric, std::span<const double> analytic);

double time_averaged_error(std::span<const double> errors);

struct EocResult {
    std::vector<double> pairwise;
    double slope = 0.0;  ///< least squares on (log N, log err), sign flipped
};

EocResult eoc(std::span<const double> errors, std::span<const double> Ns);

/// ceil(t_end / dt), robust against t_end being a representable multiple of dt.
std::int64_t step_count(double t_end, double dt);

struct SweepRecord {
    int d = 3;
    CaseKind kind = CaseKind::Smooth;
    int N = 0;
    double Pe = 0.0;
    double Pe_g = 0.0;
    double Co = 0.0;
    double tau = 0.0;
    double err_bar = 0.0;
    std::int64_t steps = 0;
    std::string status = "ok";  ///< ok | blowup
    std::optional<double> eoc_pairwise;
};

struct ErrorSample {
    std::int64_t step = 0;
    double t = 0.0;
    double error = 0.0;
};

struct CaseResult {
    SweepRecord record;
    std::vector<ErrorSample> samples;
};

struct RunOptions {
    std::optional<double> theta;  ///< default per dimension
    std::int64_t sample_every = 1;
};

/// One lattice Boltzmann run under diffusive scaling, sampling the relative
/// L2 error against the analytic solution after every sample_every steps.
CaseResult run_case(const BenchmarkCase& bench, int N, const RunOptions& options = {});

/// Runs the Cartesian product, ordered by (Pe, N) ascending. Blow-ups are
/// recorded and the sweep continues.
std::vector<SweepRecord> sweep(const BenchmarkCase& base, std::span<const int> Ns,
                               std::span<const double> Pes, const RunOptions& options = {});

}  // namespace relaxlbm
