#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include "relaxlbm/cli.hpp"
#include "relaxlbm/csv.hpp"

namespace relaxlbm::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw ConfigError("invalid value '" + value + "' for " + key + ": expected " + expected);
}

template <class T>
T parse_integer(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (value.empty() || ec != std::errc{} || ptr != end) bad_value(key, value, "an integer");
    return out;
}

double parse_double(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::logic_error&) {
        bad_value(key, value, "a number");
    }
    if (used != value.size() || !std::isfinite(out)) bad_value(key, value, "a finite number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, value, "true or false");
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
    std::vector<T> out;
    for (const auto& item : split(value, ',')) out.push_back(parse(key, item));
    if (out.empty()) bad_value(key, value, "a non-empty list");
    return out;
}

void require(bool ok, const std::string& key, const std::string& value, const char* expected) {
    if (!ok) bad_value(key, value, expected);
}

}  // namespace

const std::vector<std::string>& setting_keys() {
    static const std::vector<std::string> keys{
        "d",       "case",    "N",       "Pe",    "theta", "tmax", "stride", "out",   "seed",     "draws",
        "override_stability", "eps", "grid", "horizon", "cfl", "rs_mu", "rs_u", "rs_a2", "rs_tau", "rs_gamma"};
    return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "d") {
        cfg.d = parse_integer<int>(key, value);
        require(cfg.d >= 1 && cfg.d <= 3, key, value, "1, 2 or 3");
    } else if (key == "case") {
        try {
            cfg.kind = parse_case_kind(trim(value));
        } catch (const std::invalid_argument&) {
            bad_value(key, value, "smooth or nonsmooth");
        }
    } else if (key == "N") {
        auto Ns = parse_list<int>(key, value, parse_integer<int>);
        for (int n : Ns) require(n >= 2, key, value, "grid sizes >= 2");
        cfg.N = std::move(Ns);
    } else if (key == "Pe") {
        auto Pes = parse_list<double>(key, value, parse_double);
        for (double p : Pes) require(p > 0.0, key, value, "positive Peclet numbers");
        cfg.Pe = std::move(Pes);
    } else if (key == "theta") {
        cfg.theta = parse_double(key, value);
        require(*cfg.theta > 0.0, key, value, "a positive number");
    } else if (key == "tmax") {
        cfg.tmax = parse_double(key, value);
        require(cfg.tmax >= 0.0, key, value, "a non-negative time");
    } else if (key == "stride") {
        cfg.stride = parse_integer<std::int64_t>(key, value);
        require(cfg.stride >= 1, key, value, "an integer >= 1");
    } else if (key == "out") {
        cfg.out = trim(value);
    } else if (key == "seed") {
        cfg.seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "draws") {
        cfg.draws = parse_integer<int>(key, value);
        require(cfg.draws >= 1, key, value, "an integer >= 1");
    } else if (key == "override_stability") {
        cfg.override_stability = parse_bool(key, value);
    } else if (key == "eps") {
        auto eps = parse_list<double>(key, value, parse_double);
        for (double e : eps) require(e > 0.0 && e <= 1.0, key, value, "values in (0, 1]");
        cfg.eps = std::move(eps);
    } else if (key == "grid") {
        cfg.grid = parse_integer<std::size_t>(key, value);
        require(cfg.grid >= 2, key, value, "an integer >= 2");
    } else if (key == "horizon") {
        cfg.horizon = parse_double(key, value);
        require(cfg.horizon > 0.0, key, value, "a positive time");
    } else if (key == "cfl") {
        cfg.cfl = parse_double(key, value);
        require(cfg.cfl > 0.0 && cfg.cfl <= 0.9, key, value, "a value in (0, 0.9]");
    } else if (key == "rs_mu") {
        cfg.rs_mu = parse_double(key, value);
        require(cfg.rs_mu > 0.0, key, value, "a positive number");
    } else if (key == "rs_u") {
        cfg.rs_u = parse_double(key, value);
    } else if (key == "rs_a2") {
        cfg.rs_a2 = parse_double(key, value);
        require(cfg.rs_a2 > 0.0, key, value, "a positive number");
    } else if (key == "rs_tau") {
        cfg.rs_tau = parse_double(key, value);
        require(cfg.rs_tau > 0.0, key, value, "a positive number");
    } else if (key == "rs_gamma") {
        cfg.rs_gamma = parse_double(key, value);
        require(cfg.rs_gamma >= 1.0, key, value, "a number >= 1");
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

void apply_config_stream(RunConfig& cfg, std::istream& is, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        try {
            apply_setting(cfg, trim(std::string_view(text).substr(0, eq)), text.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    apply_config_stream(cfg, in, path);
}

}  // namespace relaxlbm::cli
