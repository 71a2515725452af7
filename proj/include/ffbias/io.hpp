#ifndef FFBIAS_IO_HPP
#define FFBIAS_IO_HPP

#include <charconv>
#include <complex>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <stdexcept>
#include <system_error>
#include <variant>
#include <vector>

#include "char_sums.hpp"
#include "errors.hpp"
#include "euler.hpp"

namespace ffbias {

// Shortest round-trip decimal form; locale independent.
inline std::string format_double(double x) {
    if (x == 0) return "0";  // folds -0
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

// Fixed number of decimals, for human-facing summaries.
inline std::string format_fixed(double x, int decimals) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
    return {buf, res.ptr};
}

// Result rows shared by the CSV and JSON emitters.
using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("table row has the wrong width");
        rows.push_back(std::move(row));
    }
};

inline std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::to_string(std::get<long long>(c));
}

inline void write_csv(std::ostream& os, const Table& t, bool header, std::string_view command) {
    if (header) os << "# generated-by ffbias " << command << '\n';
    auto line = [&](const auto& cells, auto&& text) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << text(cells[i]);
        os << '\n';
    };
    line(t.columns, [](const std::string& s) { return s; });
    for (const auto& r : t.rows) line(r, cell_text);
}

// ---------------------------------------------------------------------------
// Run configuration: `key = value` lines, `#` comments; unknown keys are errors.

struct RunConfig {
    u32 q = 3;
    std::string modulus;
    std::optional<u64> char_index;  // empty = all
    unsigned n_min = 1, n_max = 12;
    std::string k_mode = "fixed";   // fixed | log | sqrtlog | pow
    double k_param = 2;             // k for fixed, c for round(c log n), exponent for pow
    std::string method = "analytic";
    std::string format = "csv";
    std::string output;             // empty = stdout
    u64 enum_cap = kDefaultEnumerationCap;
    unsigned n_cap = kDefaultNCap;
    unsigned euler_cutoff = kDefaultEulerCutoff;
    u64 table_bound = kDefaultTableBound;
};

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"q",      "modulus", "char-index", "n-min",    "n-max",        "k-mode",     "k",
                                                  "method", "format",  "output",     "enum-cap", "euler-cutoff", "table-bound", "n-cap"};
    return keys;
}

namespace detail {

// line 0 marks a command-line flag
inline std::string where(unsigned line, std::string_view key) {
    return line ? "line " + std::to_string(line) : "--" + std::string(key);
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view v, std::string_view key, unsigned line) {
    T out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ParseError(where(line, key) + ": bad value '" + std::string(v) + "' for " + std::string(key));
    return out;
}

// 2^24 style powers are accepted for the caps
inline u64 parse_count(std::string_view v, std::string_view key, unsigned line) {
    const auto caret = v.find('^');
    if (caret == std::string_view::npos) return parse_number<u64>(v, key, line);
    const u64 base = parse_number<u64>(trim(v.substr(0, caret)), key, line);
    const u64 e = parse_number<u64>(trim(v.substr(caret + 1)), key, line);
    u64 r = 1;
    for (u64 i = 0; i < e; ++i) {
        if (r > std::numeric_limits<u64>::max() / std::max<u64>(base, 1)) throw ParseError(where(line, key) + ": value overflows");
        r *= base;
    }
    return r;
}

} // namespace detail

inline void apply_config_value(RunConfig& c, std::string_view key, std::string_view v, unsigned line) {
    using detail::parse_number;
    auto positive = [&](auto x) {
        if (x <= 0) throw ParseError(detail::where(line, key) + ": " + std::string(key) + " must be positive");
        return x;
    };
    if (key == "q") c.q = positive(parse_number<u32>(v, key, line));
    else if (key == "modulus") c.modulus = std::string(v);
    else if (key == "char-index") {
        if (v == "all") c.char_index.reset();
        else c.char_index = parse_number<u64>(v, key, line);
    } else if (key == "n-min") c.n_min = positive(parse_number<unsigned>(v, key, line));
    else if (key == "n-max") c.n_max = positive(parse_number<unsigned>(v, key, line));
    else if (key == "k-mode") {
        if (v != "fixed" && v != "log" && v != "sqrtlog" && v != "pow")
            throw ParseError(detail::where(line, key) + ": k-mode must be fixed, log, sqrtlog or pow");
        c.k_mode = std::string(v);
    } else if (key == "k") c.k_param = positive(parse_number<double>(v, key, line));
    else if (key == "method") {
        if (v != "analytic" && v != "enumerate") throw ParseError(detail::where(line, key) + ": method must be analytic or enumerate");
        c.method = std::string(v);
    } else if (key == "format") {
        if (v != "csv" && v != "json") throw ParseError(detail::where(line, key) + ": format must be csv or json");
        c.format = std::string(v);
    } else if (key == "output") c.output = std::string(v);
    else if (key == "enum-cap") c.enum_cap = positive(detail::parse_count(v, key, line));
    else if (key == "n-cap") c.n_cap = positive(static_cast<unsigned>(detail::parse_count(v, key, line)));
    else if (key == "euler-cutoff") c.euler_cutoff = positive(parse_number<unsigned>(v, key, line));
    else if (key == "table-bound") c.table_bound = positive(detail::parse_count(v, key, line));
    else throw ParseError(detail::where(line, key) + ": unknown key '" + std::string(key) + "'");
}

inline void validate(const RunConfig& c) {
    if (c.n_min > c.n_max) throw ParseError("n-min exceeds n-max");
}

inline RunConfig parse_config(std::istream& in, RunConfig c = {}) {
    std::string raw;
    unsigned line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(line) + ": expected key = value");
        const auto key = detail::trim(s.substr(0, eq));
        const auto value = detail::trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("line " + std::to_string(line) + ": expected key = value");
        apply_config_value(c, key, value, line);
    }
    validate(c);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace ffbias

#endif // FFBIAS_IO_HPP
