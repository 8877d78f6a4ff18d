#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "relaxlbm/algebra.hpp"
#include "relaxlbm/cli.hpp"
#include "relaxlbm/csv.hpp"
#include "relaxlbm/parallel.hpp"
#include "relaxlbm/stencil.hpp"
#include "relaxlbm/trs.hpp"
#include "relaxlbm/verify.hpp"

namespace relaxlbm::cli {

namespace {

constexpr double kEocLow = 1.8;
constexpr double kEocHigh = 2.2;

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

/// CSV goes to --out when given, otherwise to the command's stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
        os_ = file_.get();
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

BenchmarkCase benchmark_from(const RunConfig& cfg, double Pe) {
    BenchmarkCase b;
    b.kind = cfg.kind;
    b.d = cfg.d;
    b.t_end = b.t_start + cfg.tmax;
    b.Pe = Pe;
    return b;
}

RunOptions run_options_from(const RunConfig& cfg) {
    RunOptions o;
    o.theta = cfg.theta;
    o.sample_every = cfg.stride;
    return o;
}

void print_matrices(std::ostream& os, int d) {
    // Distinct tau_psi so that K is not a multiple of the identity.
    StabilityParams p = StabilityParams::uniform(d, 2.0, 1.0, 1.0, 1.0, 1.0);
    p.tau_psi = 2.0;
    const RelaxationAlgebra alg = build_algebra(p);
    os << "\nparameters: d=" << d << " gamma=2 eps=1 a1=1 a2=1 tau_rho=1 tau_phi=1 tau_psi=2\n";
    os << "D =\n" << alg.D << "Dinv =\n" << alg.Dinv << "K =\n" << alg.K;
}

int cmd_verify(const RunConfig& cfg, bool show_matrices, bool inject_fault, std::ostream& out) {
    VerifyOptions opts;
    opts.seed = cfg.seed;
    opts.draws = cfg.draws;
    opts.inject_fault = inject_fault;
    const VerifyReport report = run_algebra_suite(opts);
    Sink sink(cfg.out, out);
    print_report(sink.stream(), report);
    if (show_matrices) print_matrices(sink.stream(), cfg.d);
    return report.all_passed() ? kSuccess : kValidationFailure;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.N && cfg.N->size() != 1) throw ConfigError("simulate takes a single N");
    if (cfg.Pe && cfg.Pe->size() != 1) throw ConfigError("simulate takes a single Pe");
    const int N = cfg.N ? cfg.N->front() : 25;
    const double Pe = cfg.Pe ? cfg.Pe->front() : 100.0;

    const CaseResult result = run_case(benchmark_from(cfg, Pe), N, run_options_from(cfg));
    Sink sink(cfg.out, out);
    write_samples_csv(sink.stream(), result.samples);

    const SweepRecord& r = result.record;
    err << "summary: case=" << to_string(r.kind) << " d=" << r.d << " N=" << r.N << " Pe=" << format_double(r.Pe)
        << " steps=" << r.steps << " err_bar=" << format_double(r.err_bar) << " Pe_g=" << format_double(r.Pe_g)
        << " Co=" << format_double(r.Co) << " tau=" << format_double(r.tau) << " status=" << r.status << '\n';
    return r.status == "ok" ? kSuccess : kBlowup;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::vector<int> Ns = cfg.N.value_or(std::vector<int>{25, 50, 100});
    const std::vector<double> Pes = cfg.Pe.value_or(std::vector<double>{100.0, 1000.0, 10000.0});
    const auto records = sweep(benchmark_from(cfg, Pes.front()), Ns, Pes, run_options_from(cfg));
    Sink sink(cfg.out, out);
    write_sweep_csv(sink.stream(), records);

    const auto ok = std::count_if(records.begin(), records.end(), [](const SweepRecord& r) { return r.status == "ok"; });
    err << "sweep: " << records.size() << " runs, " << ok << " ok, " << records.size() - static_cast<std::size_t>(ok)
        << " blow-up\n";
    return ok > 0 ? kSuccess : kBlowup;
}

struct EocGroup {
    CaseKind kind;
    int d;
    double Pe;
    std::vector<const SweepRecord*> rows;
    EocResult result;
};

int cmd_eoc(const RunConfig& cfg, const std::string& in_path, std::ostream& out, std::ostream& err) {
    std::vector<SweepRecord> records;
    if (!in_path.empty()) {
        std::ifstream in(in_path, std::ios::binary);
        if (!in) throw ConfigError("cannot open sweep CSV '" + in_path + "'");
        records = read_sweep_csv(in);
    } else {
        const std::vector<int> Ns = cfg.N.value_or(std::vector<int>{25, 50, 100});
        const std::vector<double> Pes = cfg.Pe.value_or(std::vector<double>{100.0, 1000.0, 10000.0});
        records = sweep(benchmark_from(cfg, Pes.front()), Ns, Pes, run_options_from(cfg));
    }

    // Group by (case, d, Pe) in first-appearance order; only converged rows enter the fit.
    std::vector<EocGroup> groups;
    for (const auto& r : records) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const EocGroup& g) { return g.kind == r.kind && g.d == r.d && g.Pe == r.Pe; });
        if (it == groups.end()) {
            groups.push_back({r.kind, r.d, r.Pe, {}, {}});
            it = std::prev(groups.end());
        }
        if (r.status == "ok") it->rows.push_back(&r);
    }
    if (groups.empty()) throw ConfigError("no sweep records to evaluate");

    for (auto& g : groups) {
        std::sort(g.rows.begin(), g.rows.end(), [](const SweepRecord* a, const SweepRecord* b) { return a->N < b->N; });
        if (g.rows.size() < 2)
            throw ConfigError("EOC needs at least 2 N values per Pe (case=" + to_string(g.kind) +
                              " d=" + std::to_string(g.d) + " Pe=" + format_double(g.Pe) + ")");
        std::vector<double> errs, Ns;
        for (const auto* r : g.rows) {
            errs.push_back(r->err_bar);
            Ns.push_back(r->N);
        }
        g.result = eoc(errs, Ns);
    }

    Sink sink(cfg.out, out);
    std::ostream& os = sink.stream();
    os << "case,d,Pe,N_coarse,N_fine,pairwise_order,fitted_slope,verdict\n";
    for (const auto& g : groups) {
        std::string verdict = "n/a";
        if (g.kind == CaseKind::Smooth)
            verdict = g.result.slope >= kEocLow && g.result.slope <= kEocHigh ? "PASS" : "FLAG";
        for (std::size_t k = 0; k + 1 < g.rows.size(); ++k)
            os << to_string(g.kind) << ',' << g.d << ',' << format_double(g.Pe) << ',' << g.rows[k]->N << ','
               << g.rows[k + 1]->N << ',' << format_double(g.result.pairwise[k]) << ','
               << format_double(g.result.slope) << ',' << verdict << '\n';
    }

    for (const auto& g : groups) {
        err << "eoc: " << to_string(g.kind) << " d=" << g.d << " Pe=" << format_double(g.Pe)
            << " slope=" << fmt("%.4f", g.result.slope);
        if (g.kind == CaseKind::Smooth)
            err << (g.result.slope >= kEocLow && g.result.slope <= kEocHigh ? " PASS" : " FLAG (outside [1.8, 2.2])");
        err << '\n';
    }
    for (const auto& s : groups) {
        if (s.kind != CaseKind::Smooth) continue;
        for (const auto& n : groups) {
            if (n.kind != CaseKind::NonSmooth || n.Pe != s.Pe) continue;
            err << "compare Pe=" << format_double(s.Pe) << ": smooth slope " << fmt("%.4f", s.result.slope)
                << " (d=" << s.d << ") vs nonsmooth slope " << fmt("%.4f", n.result.slope) << " (d=" << n.d
                << "), reduction " << fmt("%.4f", s.result.slope - n.result.slope) << '\n';
        }
    }
    return kSuccess;
}

int cmd_rs_limit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    TrsSetup setup;
    setup.params = StabilityParams::uniform(1, cfg.rs_gamma, cfg.eps.front(), cfg.rs_tau, cfg.rs_mu, cfg.rs_a2);
    setup.mu = cfg.rs_mu;
    setup.flux_velocity = cfg.rs_u;
    setup.override_stability = cfg.override_stability;

    if (!cfg.override_stability) {
        const double u_max[1] = {std::abs(cfg.rs_u)};
        for (double e : cfg.eps) {
            StabilityParams p = setup.params;
            p.epsilon = e;
            const StabilityVerdict v = check_relaxation_stability(p, cfg.rs_mu, u_max);
            if (!v.stable) {
                err << "refusing rs-limit: parameters not relaxation-stable at eps=" << format_double(e) << ": "
                    << v.summary() << "; pass --override-stability to run anyway\n";
                return kValidationFailure;
            }
        }
    }

    TrsGrid grid;
    grid.cells = cfg.grid;
    grid.cfl = cfg.cfl;
    const std::vector<double> u{cfg.rs_u};
    const double mu = cfg.rs_mu;
    auto rho0 = [&](double x) { return smooth_solution(std::span<const double>(&x, 1), 0.0, u, mu); };
    auto exact = [&](double x, double t) { return smooth_solution(std::span<const double>(&x, 1), t, u, mu); };
    const auto rows = relaxation_limit_sweep(rho0, exact, cfg.eps, setup, grid, cfg.horizon);

    Sink sink(cfg.out, out);
    write_rs_limit_csv(sink.stream(), rows);

    std::vector<double> errs, inv_eps;
    bool blowup = false;
    for (const auto& r : rows) {
        if (r.status == "ok") {
            errs.push_back(r.error);
            inv_eps.push_back(1.0 / r.epsilon);
        } else {
            blowup = blowup || r.status == "blowup";
            err << "rs-limit: eps=" << format_double(r.epsilon) << " status=" << r.status
                << (r.detail.empty() ? "" : " (" + r.detail + ")") << '\n';
        }
    }
    if (errs.size() >= 2) err << "rs-limit: fitted order in eps " << fmt("%.4f", eoc(errs, inv_eps).slope) << '\n';
    return blowup ? kBlowup : kSuccess;
}

/// Options bound to raw strings; only those given on the command line are
/// applied, after the config file, so flags win.
struct FlagTable {
    std::map<std::string, std::vector<std::string>> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help, bool list = false) {
        auto* opt = app.add_option(flag, values[key], help);
        if (list) opt->delimiter(',');
        else opt->expected(1);
        options[key] = opt;
    }

    void apply(RunConfig& cfg) const {
        for (const auto& [key, opt] : options) {
            if (opt->count() == 0) continue;
            std::string joined;
            for (const auto& v : values.at(key)) joined += (joined.empty() ? "" : ",") + v;
            apply_setting(cfg, key, joined);
        }
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    apply_thread_env();

    CLI::App app{"Relaxation-system lattice Boltzmann toolkit for the advection-diffusion equation", "relaxlbm"};
    app.require_subcommand(1);
    app.fallthrough();

    FlagTable flags;
    std::string config_path;
    bool override_stability = false;
    app.add_option("--config", config_path, "key=value configuration file (flags override it)");
    flags.add(app, "--out", "out", "write the CSV or report to this path instead of stdout");
    flags.add(app, "--d", "d", "spatial dimension {1,2,3}");
    flags.add(app, "--case", "case", "benchmark case {smooth,nonsmooth}");
    flags.add(app, "--N", "N", "grid resolution(s), comma separated", true);
    flags.add(app, "--Pe", "Pe", "Peclet number(s), comma separated", true);
    flags.add(app, "--theta", "theta", "stencil parameter theta (c_s^2 = 1/theta)");
    flags.add(app, "--tmax", "tmax", "physical end time (default 1.52)");
    flags.add(app, "--stride", "stride", "error sampling stride in lattice steps (default 1)");
    flags.add(app, "--seed", "seed", "seed for randomized verification");
    auto* override_opt =
        app.add_flag("--override-stability", override_stability, "run rs-limit even when the stability gate fails");

    auto* verify = app.add_subcommand("verify", "randomized checks of the relaxation-system algebra");
    bool show_matrices = false;
    bool inject_fault = false;
    flags.add(*verify, "--draws", "draws", "number of random parameter draws (default 100)");
    verify->add_flag("--show-matrices", show_matrices, "also print D, Dinv and K for dimension --d");
    verify->add_flag("--inject-fault", inject_fault, "test hook: corrupt one entry of D");

    auto* simulate = app.add_subcommand("simulate", "single run; CSV of step, t_physical, rel_l2_error");
    auto* sweep_cmd = app.add_subcommand("sweep", "(N, Pe) sweep; CSV of d, case, N, Pe, Pe_g, Co, tau, err_bar, status");
    auto* eoc_cmd = app.add_subcommand("eoc", "experimental order of convergence per Pe");
    std::string in_path;
    eoc_cmd->add_option("--in", in_path, "existing sweep CSV (otherwise a sweep is run)");

    auto* rs = app.add_subcommand("rs-limit", "relaxation limit eps -> 0 of the transformed relaxation system");
    flags.add(*rs, "--eps", "eps", "decreasing epsilon list, comma separated", true);
    flags.add(*rs, "--grid", "grid", "number of cells (default 1024)");
    flags.add(*rs, "--horizon", "horizon", "integration horizon (default 0.1)");
    flags.add(*rs, "--cfl", "cfl", "CFL number in (0, 0.9] (default 0.5)");
    flags.add(*rs, "--mu", "rs_mu", "diffusivity mu = a1 (default 0.05)");
    flags.add(*rs, "--u", "rs_u", "advection velocity (default 0.08)");
    flags.add(*rs, "--a2", "rs_a2", "squared characteristic speed a2 (default 1)");
    flags.add(*rs, "--tau", "rs_tau", "relaxation times tau (default 1)");
    flags.add(*rs, "--gamma", "rs_gamma", "scaling exponent gamma (default 2)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return kValidationFailure;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        flags.apply(cfg);
        if (override_opt->count() > 0) cfg.override_stability = override_stability;

        if (*verify) return cmd_verify(cfg, show_matrices, inject_fault, out);
        if (*simulate) return cmd_simulate(cfg, out, err);
        if (*sweep_cmd) return cmd_sweep(cfg, out, err);
        if (*eoc_cmd) return cmd_eoc(cfg, in_path, out, err);
        if (*rs) return cmd_rs_limit(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    }
    return kValidationFailure;
}

}  // namespace relaxlbm::cli
