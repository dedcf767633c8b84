#pragma once

/// Dated price series ingestion from delimited text with header. Errors are
/// structured (line numbers, offending values); out-of-order rows are sorted
/// with a warning flag, duplicate dates are rejected by name.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmom {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PriceSeries {
    std::vector<std::string> dates; // ISO-8601, strictly increasing
    std::vector<double> prices;
    std::string meta;
    bool sorted_on_load = false; // input rows were out of order

    std::size_t size() const { return dates.size(); }
};

struct CsvFormat {
    char delimiter = ',';
    std::string date_column = "date";
    std::string price_column = "price";
};

namespace detail {

inline std::vector<std::string> split_row(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
            cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

inline bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

} // namespace detail

inline PriceSeries load_prices(std::istream& in, const CsvFormat& fmt = {},
                               std::string meta = "") {
    std::string line;
    if (!std::getline(in, line)) throw DataError("price file: empty input");
    const std::vector<std::string> header = detail::split_row(line, fmt.delimiter);
    long date_idx = -1, price_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == fmt.date_column) date_idx = long(i);
        if (header[i] == fmt.price_column) price_idx = long(i);
    }
    if (date_idx < 0)
        throw DataError("price file: missing column '" + fmt.date_column + "'");
    if (price_idx < 0)
        throw DataError("price file: missing column '" + fmt.price_column + "'");

    std::vector<std::pair<std::string, double>> rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = detail::split_row(line, fmt.delimiter);
        const std::size_t need = std::size_t(std::max(date_idx, price_idx)) + 1;
        if (cells.size() < need)
            throw DataError("price file line " + std::to_string(line_no) +
                            ": expected at least " + std::to_string(need) +
                            " columns");
        const std::string& date = cells[std::size_t(date_idx)];
        if (!detail::is_iso_date(date))
            throw DataError("price file line " + std::to_string(line_no) +
                            ": bad ISO-8601 date '" + date + "'");
        const std::string& ptxt = cells[std::size_t(price_idx)];
        char* end = nullptr;
        const double price = std::strtod(ptxt.c_str(), &end);
        if (end == ptxt.c_str() || *end != '\0')
            throw DataError("price file line " + std::to_string(line_no) +
                            ": unparseable price '" + ptxt + "'");
        rows.emplace_back(date, price);
    }
    if (rows.empty()) throw DataError("price file: no data rows");

    PriceSeries out;
    out.meta = std::move(meta);
    bool ordered = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first < rows[i - 1].first) ordered = false;
    if (!ordered) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        out.sorted_on_load = true;
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw DataError("price file: duplicate date " + rows[i].first);
    out.dates.reserve(rows.size());
    out.prices.reserve(rows.size());
    for (auto& [d, p] : rows) {
        out.dates.push_back(std::move(d));
        out.prices.push_back(p);
    }
    return out;
}

inline PriceSeries load_prices(const std::string& path, const CsvFormat& fmt = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("price file: cannot open " + path);
    return load_prices(in, fmt, path);
}

inline void write_prices(std::ostream& os, const PriceSeries& p,
                         const CsvFormat& fmt = {}) {
    os << fmt.date_column << fmt.delimiter << fmt.price_column << "\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", p.prices[i]);
        os << p.dates[i] << fmt.delimiter << buf << "\n";
    }
}

} // namespace tmom
