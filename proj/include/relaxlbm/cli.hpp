/// @file cli.hpp
/// @brief Command-line front end: configuration handling and subcommands.
///
/// Subcommands: verify, simulate, sweep, eoc, rs-limit. Exit codes are 0 on
/// success, 1 on a validation or argument failure and 2 on a numerical
/// blow-up.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxlbm/benchmarks.hpp"

namespace relaxlbm::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kBlowup = 2 };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Every setting reachable from a config file or a flag.
struct RunConfig {
    int d = 3;
    CaseKind kind = CaseKind::Smooth;
    std::optional<std::vector<int>> N;       ///< per-command default when unset
    std::optional<std::vector<double>> Pe;   ///< per-command default when unset
    std::optional<double> theta;
    double tmax = 1.52;
    std::int64_t stride = 1;
    std::string out;
    std::uint64_t seed = 12345;
    int draws = 100;
    bool override_stability = false;

    std::vector<double> eps{0.5, 0.25, 0.125, 0.0625};
    std::size_t grid = 1024;
    double horizon = 0.1;
    double cfl = 0.5;
    double rs_mu = 0.05;
    double rs_u = 0.08;
    double rs_a2 = 1.0;
    double rs_tau = 1.0;
    double rs_gamma = 2.0;
};

/// Names accepted by apply_setting, in documentation order.
const std::vector<std::string>& setting_keys();

/// Parses value for key into cfg. Throws ConfigError on an unknown key or a
/// malformed value. Lists are comma separated.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads key=value lines; blank lines and lines starting with '#' are skipped.
void apply_config_stream(RunConfig& cfg, std::istream& is, const std::string& origin = "config");
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Entry point shared by the executable and the tests. args excludes the
/// program name. RELAXLBM_THREADS is applied on every call.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relaxlbm::cli
