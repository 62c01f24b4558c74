#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mginf {

// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace detail

// Two-column CSV of (t, beta) knots: optional header row, then strictly
// increasing times starting at 0.
inline std::vector<std::pair<double, double>> load_beta_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open table file: " + path);
    std::vector<std::pair<double, double>> knots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto comma = body.find(',');
        if (comma == std::string_view::npos)
            throw usage_error("table file " + path + ": line " + std::to_string(line_no) +
                              " is not a two-column row");
        double t = 0, b = 0;
        const bool ok =
            detail::parse_double(body.substr(0, comma), t) && detail::parse_double(body.substr(comma + 1), b);
        if (!ok) {
            if (line_no == 1 && knots.empty()) continue;  // header row
            throw usage_error("table file " + path + ": line " + std::to_string(line_no) +
                              " is not numeric");
        }
        knots.emplace_back(t, b);
    }
    if (knots.empty()) throw usage_error("table file " + path + ": no data rows");
    if (knots.front().first != 0)
        throw usage_error("table file " + path + ": first knot must be at t = 0");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i].first > knots[i - 1].first))
            throw usage_error("table file " + path + ": knot times must be strictly increasing");
    return knots;
}

inline void write_sample_lines(std::ostream& os, const std::vector<double>& xs) {
    for (double x : xs) os << format_double(x) << '\n';
}

}  // namespace mginf
