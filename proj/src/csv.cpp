#include "relaxlbm/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace relaxlbm {

namespace {
constexpr const char* kSweepHeader = "d,case,N,Pe,Pe_g,Co,tau,err_bar,status";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

void write_samples_csv(std::ostream& os, std::span<const ErrorSample> samples) {
    os << "step,t_physical,rel_l2_error\n";
    for (const auto& s : samples) os << s.step << ',' << format_double(s.t) << ',' << format_double(s.error) << '\n';
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records) {
    os << kSweepHeader << '\n';
    for (const auto& r : records)
        os << r.d << ',' << to_string(r.kind) << ',' << r.N << ',' << format_double(r.Pe) << ','
           << format_double(r.Pe_g) << ',' << format_double(r.Co) << ',' << format_double(r.tau) << ','
           << format_double(r.err_bar) << ',' << r.status << '\n';
}

void write_rs_limit_csv(std::ostream& os, std::span<const RsLimitRow> rows) {
    os << "epsilon,rel_l2_error,status\n";
    for (const auto& r : rows) os << format_double(r.epsilon) << ',' << format_double(r.error) << ',' << r.status << '\n';
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("sweep CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) throw std::invalid_argument("unexpected sweep CSV header: " + line);

    std::vector<SweepRecord> records;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw std::invalid_argument("sweep CSV line " + std::to_string(lineno) + ": expected 9 fields");
        try {
            SweepRecord r;
            r.d = std::stoi(f[0]);
            r.kind = parse_case_kind(f[1]);
            r.N = std::stoi(f[2]);
            r.Pe = std::stod(f[3]);
            r.Pe_g = std::stod(f[4]);
            r.Co = std::stod(f[5]);
            r.tau = std::stod(f[6]);
            r.err_bar = std::stod(f[7]);
            r.status = f[8];
            records.push_back(r);
        } catch (const std::logic_error& e) {
            throw std::invalid_argument("sweep CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

}  // namespace relaxlbm
