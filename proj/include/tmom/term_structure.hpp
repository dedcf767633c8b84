#pragma once

/// Moment term structures: per-period second/third moments and skewness,
/// with optional standard errors from simulation, plus delimited-text I/O.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmom {

struct MomentTermStructure {
    std::vector<long> periods;
    std::vector<double> mu2;
    std::vector<double> mu3;
    std::vector<double> kappa3;
    std::vector<double> se_kappa3; // simulation / disjoint-window estimates only
    std::vector<long> n_samples;   // observations behind each row, when known

    bool has_se() const { return !se_kappa3.empty(); }
    std::size_t size() const { return periods.size(); }
};

/// Shortest round-trip decimal representation; locale independent.
inline std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline void write_delimited(std::ostream& os, const MomentTermStructure& ts,
                            char delim = ',') {
    os << "P" << delim << "mu2" << delim << "mu3" << delim << "kappa3";
    if (ts.has_se()) os << delim << "se_kappa3" << delim << "n_samples";
    os << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        os << ts.periods[i] << delim << format_double(ts.mu2[i]) << delim
           << format_double(ts.mu3[i]) << delim << format_double(ts.kappa3[i]);
        if (ts.has_se())
            os << delim << format_double(ts.se_kappa3[i]) << delim << ts.n_samples[i];
        os << "\n";
    }
}

inline MomentTermStructure read_delimited(std::istream& is, char delim = ',') {
    MomentTermStructure ts;
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("term structure: empty input");
    const bool with_se = line.find("se_kappa3") != std::string::npos;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, delim)) cells.push_back(cell);
        const std::size_t expect = with_se ? 6 : 4;
        if (cells.size() != expect)
            throw std::runtime_error("term structure: malformed row: " + line);
        ts.periods.push_back(std::stol(cells[0]));
        ts.mu2.push_back(std::stod(cells[1]));
        ts.mu3.push_back(std::stod(cells[2]));
        ts.kappa3.push_back(std::stod(cells[3]));
        if (with_se) {
            ts.se_kappa3.push_back(std::stod(cells[4]));
            ts.n_samples.push_back(std::stol(cells[5]));
        }
    }
    return ts;
}

} // namespace tmom
