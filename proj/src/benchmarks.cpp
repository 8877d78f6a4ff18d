#include "relaxlbm/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relaxlbm/lattice.hpp"
#include "relaxlbm/parallel.hpp"

namespace relaxlbm {

std::string to_string(CaseKind kind) { return kind == CaseKind::Smooth ? "smooth" : "nonsmooth"; }

CaseKind parse_case_kind(std::string_view text) {
    if (text == "smooth") return CaseKind::Smooth;
    if (text == "nonsmooth") return CaseKind::NonSmooth;
    throw std::invalid_argument("unknown case '" + std::string(text) + "' (expected smooth or nonsmooth)");
}

std::vector<double> BenchmarkCase::velocity() const {
    std::vector<double> u(static_cast<std::size_t>(d), 0.0);
    if (kind == CaseKind::Smooth)
        std::fill(u.begin(), u.end(), u_c);
    else
        u[0] = u_c;
    return u;
}

double smooth_solution(std::span<const double> x, double t, std::span<const double> u, double mu) {
    if (x.size() != u.size()) throw std::invalid_argument("smooth_solution: x and u must have equal length");
    constexpr double pi = std::numbers::pi;
    double prod = 1.0;
    for (std::size_t a = 0; a < x.size(); ++a) prod *= std::sin(pi * (x[a] - u[a] * t));
    return prod * std::exp(-static_cast<double>(x.size()) * mu * pi * pi * t) + 1.0;
}

double nonsmooth_initial(double x, double dx, double dt, double mu, double x0) {
    if (x > x0 - 0.5 * dx && x < x0 + 0.5 * dx) return 1.0 / std::sqrt(4.0 * std::numbers::pi * mu * dt) + 1.0;
    return 1.0;
}

double dirac_comb_solution(double x, double t, double x0, double ux, double mu, double tail_tol) {
    if (!(t > 0.0)) throw std::invalid_argument("dirac_comb_solution: t must be positive");
    if (!(mu > 0.0)) throw std::invalid_argument("dirac_comb_solution: mu must be positive");
    // Reduce the offset to [-1, 1); the comb is 2-periodic.
    double s = x - (x0 + ux * t);
    s -= 2.0 * std::floor(0.5 * (s + 1.0));
    const double four_mu_t = 4.0 * mu * t;
    double sum = std::exp(-s * s / four_mu_t);
    for (int k = 1;; ++k) {
        const double plus = std::exp(-(s + 2.0 * k) * (s + 2.0 * k) / four_mu_t);
        const double minus = std::exp(-(s - 2.0 * k) * (s - 2.0 * k) / four_mu_t);
        sum += plus + minus;
        if (plus < tail_tol && minus < tail_tol) break;
    }
    return sum / std::sqrt(std::numbers::pi * four_mu_t) + 1.0;
}

double relative_l2_error(std::span<const double> numeric, std::span<const double> analytic) {
    if (numeric.size() != analytic.size()) throw std::invalid_argument("relative_l2_error: extents differ");
    constexpr std::size_t block = 4096;
    const std::size_t blocks = (numeric.size() + block - 1) / block;
    auto range_sum = [&](std::size_t b, auto term) {
        CompensatedSum s;
        for (std::size_t i = b * block; i < std::min(numeric.size(), (b + 1) * block); ++i) s.add(term(i));
        return s.value();
    };
    const double den = deterministic_sum(blocks, [&](std::size_t b) {
        return range_sum(b, [&](std::size_t i) { return analytic[i] * analytic[i]; });
    });
    if (!(den > 0.0)) throw std::invalid_argument("relative_l2_error: analytic field has zero norm");
    const double num = deterministic_sum(blocks, [&](std::size_t b) {
        return range_sum(b, [&](std::size_t i) {
            const double e = numeric[i] - analytic[i];
            return e * e;
        });
    });
    return std::sqrt(num / den);
}

double time_averaged_error(std::span<const double> errors) {
    if (errors.empty()) throw std::invalid_argument("time_averaged_error: no samples");
    CompensatedSum s;
    for (double e : errors) s.add(e);
    return s.value() / static_cast<double>(errors.size());
}

EocResult eoc(std::span<const double> errors, std::span<const double> Ns) {
    if (errors.size() != Ns.size() || errors.size() < 2)
        throw std::invalid_argument("eoc: need at least two (N, error) pairs of matching length");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i]))
            throw std::invalid_argument("eoc: errors must be positive and finite");
        if (i > 0 && !(Ns[i] > Ns[i - 1])) throw std::invalid_argument("eoc: N must be strictly increasing");
    }
    EocResult r;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        r.pairwise.push_back(std::log(errors[i] / errors[i + 1]) / std::log(Ns[i + 1] / Ns[i]));

    const std::size_t n = errors.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(Ns[i]);
        my += std::log(errors[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(Ns[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    r.slope = -sxy / sxx;
    return r;
}

std::int64_t step_count(double t_end, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_count: dt must be positive");
    if (t_end <= 0.0) return 0;
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(ratio));
}

namespace {

// Analytic field of the form amplitude * px[x] py[y] pz[z] + 1.
struct SeparableField {
    double amplitude = 1.0;
    std::array<std::vector<double>, 3> factor;
};

SeparableField analytic_field(const BenchmarkCase& bench, const LatticeState& state, double t, double x0) {
    SeparableField f;
    const auto u = bench.velocity();
    const double mu = bench.mu();
    for (std::size_t a = 0; a < 3; ++a) f.factor[a].assign(state.extents()[a], 1.0);
    if (bench.kind == CaseKind::Smooth) {
        constexpr double pi = std::numbers::pi;
        f.amplitude = std::exp(-bench.d * mu * pi * pi * t);
        for (std::size_t a = 0; a < static_cast<std::size_t>(bench.d); ++a)
            for (std::size_t j = 0; j < f.factor[a].size(); ++j)
                f.factor[a][j] = std::sin(pi * (state.cell_center(a, j) - u[a] * t));
    } else {
        for (std::size_t j = 0; j < f.factor[0].size(); ++j)
            f.factor[0][j] = dirac_comb_solution(state.cell_center(0, j), t, x0, u[0], mu) - 1.0;
    }
    return f;
}

// Same reduction as relative_l2_error with the analytic field generated on the fly.
double field_error(const LatticeState& state, std::span<const double> rho, const SeparableField& f) {
    const std::size_t nx = state.extents()[0], ny = state.extents()[1];
    const std::size_t rows = ny * state.extents()[2];
    std::vector<double> num(rows), den(rows);
    parallel_for(rows, [&](std::size_t row) {
        const double yz = f.amplitude * f.factor[1][row % ny] * f.factor[2][row / ny];
        CompensatedSum n, d;
        for (std::size_t x = 0; x < nx; ++x) {
            const double a = yz * f.factor[0][x] + 1.0;
            const double e = rho[row * nx + x] - a;
            n.add(e * e);
            d.add(a * a);
        }
        num[row] = n.value();
        den[row] = d.value();
    });
    CompensatedSum n, d;
    for (std::size_t r = 0; r < rows; ++r) {
        n.add(num[r]);
        d.add(den[r]);
    }
    return std::sqrt(n.value() / d.value());
}

}  // namespace

CaseResult run_case(const BenchmarkCase& bench, int N, const RunOptions& options) {
    if (bench.d < 1 || bench.d > 3) throw std::invalid_argument("dimension d must be 1, 2 or 3");
    if (N < 2) throw std::invalid_argument("N must be at least 2");
    if (!(bench.Pe > 0.0)) throw std::invalid_argument("Pe must be positive");

    const UnitSystem units = UnitSystem::make(bench.l_c, bench.u_c, N, 2.0);
    const Stencil stencil = build_stencil(bench.d, 1.0, options.theta.value_or(default_theta(bench.d)));
    const double mu = bench.mu();
    const LatticeQuantities lq = convert_units(units, bench.velocity(), mu, stencil.cs2);
    const std::int64_t steps = step_count(bench.t_end - bench.t_start, units.dt);

    CaseResult result;
    SweepRecord& rec = result.record;
    rec.d = bench.d;
    rec.kind = bench.kind;
    rec.N = N;
    rec.Pe = bench.Pe;
    rec.Pe_g = bench.Pe / N;
    rec.Co = lq.courant;
    rec.tau = lq.tau;
    rec.steps = steps;

    if (bench.kind == CaseKind::NonSmooth && steps == 0)
        throw std::invalid_argument("non-smooth case needs t_end > t_start (analytic solution is singular at t0)");

    const Extents extents = cubic_extents(bench.d, static_cast<std::size_t>(N));
    // Peak cell: the one centred nearest the origin from above; x0 is its centre.
    const double x0 = -0.5 * bench.l_c + (static_cast<double>(N / 2) + 0.5) * units.dx;
    const auto u = bench.velocity();
    DensitySampler rho0;
    if (bench.kind == CaseKind::Smooth)
        rho0 = [&](const std::array<double, 3>& x) {
            return smooth_solution(std::span<const double>(x.data(), static_cast<std::size_t>(bench.d)), 0.0, u, mu);
        };
    else
        rho0 = [&](const std::array<double, 3>& x) { return nonsmooth_initial(x[0], units.dx, units.dt, mu, x0); };

    LatticeState state = initialize(stencil, extents, units, rho0, lq.u_lattice);
    SolverConfig config{lq.tau, lq.u_lattice, steps, options.sample_every};

    run(state, config, [&](std::int64_t t_lattice, std::span<const double> rho) {
        if (t_lattice == 0 && steps > 0) return Flow::Continue;
        const double t = bench.t_start + static_cast<double>(t_lattice) * units.dt;
        const double err = field_error(state, rho, analytic_field(bench, state, t, x0));
        if (!std::isfinite(err)) {
            rec.status = "blowup";
            return Flow::Stop;
        }
        result.samples.push_back({t_lattice, t, err});
        return Flow::Continue;
    });

    if (rec.status == "ok") {
        std::vector<double> errs;
        for (const auto& s : result.samples) errs.push_back(s.error);
        rec.err_bar = time_averaged_error(errs);
    } else {
        rec.err_bar = NAN;
    }
    return result;
}

std::vector<SweepRecord> sweep(const BenchmarkCase& base, std::span<const int> Ns, std::span<const double> Pes,
                               const RunOptions& options) {
    if (Ns.empty() || Pes.empty()) throw std::invalid_argument("sweep: N and Pe sets must be non-empty");
    std::vector<int> ns(Ns.begin(), Ns.end());
    std::vector<double> pes(Pes.begin(), Pes.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::sort(pes.begin(), pes.end());
    pes.erase(std::unique(pes.begin(), pes.end()), pes.end());

    std::vector<SweepRecord> records;
    records.reserve(ns.size() * pes.size());
    for (double pe : pes) {
        BenchmarkCase bench = base;
        bench.Pe = pe;
        const SweepRecord* previous = nullptr;
        for (int n : ns) {
            records.push_back(run_case(bench, n, options).record);
            SweepRecord& rec = records.back();
            if (previous && previous->status == "ok" && rec.status == "ok" && rec.err_bar > 0.0 &&
                previous->err_bar > 0.0)
                rec.eoc_pairwise = std::log(previous->err_bar / rec.err_bar) /
                                   std::log(static_cast<double>(rec.N) / previous->N);
            previous = &records.back();
        }
    }
    return records;
}

}  // namespace relaxlbm
