#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rk/errors.hpp"
#include "rk/tableau.hpp"

namespace rk {

// Tableau text format (UTF-8, line oriented, '#' starts a comment):
//   s <stages> <explicit|implicit>
//   c <s entries>
//   a <s entries>          (one line per stage)
//   b <s entries>
// Entries are exact rationals "p/q" (or integers) or decimal literals.

namespace detail {

struct TableauToken {
    std::string text;
    int line;
    int column;
};

inline bool looks_rational(const std::string& text) {
    // integers and p/q only; anything with '.', 'e', 'E' parses as a double
    return text.find_first_of(".eE") == std::string::npos;
}

inline double parse_entry(const TableauToken& tok, Qc2* exact, bool* all_exact) {
    if (looks_rational(tok.text)) {
        try {
            const Rational r = parse_rational(tok.text);
            if (exact) *exact = Qc2(r);
            return to_double(r);
        } catch (const ValidationError&) {
            // fall through to the double path for diagnostics
        }
    }
    char* end = nullptr;
    const double value = std::strtod(tok.text.c_str(), &end);
    if (end != tok.text.c_str() + tok.text.size())
        throw ValidationError("tableau parse error at line " + std::to_string(tok.line) +
                              ", column " + std::to_string(tok.column) + ": bad entry '" +
                              tok.text + "'");
    if (all_exact) *all_exact = false;
    return value;
}

inline std::vector<TableauToken> tokenize_line(const std::string& line, int line_no) {
    std::vector<TableauToken> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        tokens.push_back({line.substr(i, j - i), line_no, static_cast<int>(i + 1)});
        i = j;
    }
    return tokens;
}

}  // namespace detail

/// Parses the tableau format from a stream. `name` labels error messages
/// and the resulting method.
inline ButcherTableau read_tableau(std::istream& in, const std::string& name) {
    using detail::TableauToken;
    std::vector<std::vector<TableauToken>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = detail::tokenize_line(line, line_no);
        if (!tokens.empty()) rows.push_back(std::move(tokens));
    }
    auto fail = [&](int ln, const std::string& what) {
        return ValidationError(name + ": tableau parse error at line " + std::to_string(ln) +
                               ": " + what);
    };
    if (rows.empty()) throw fail(line_no, "empty file");

    // header: s <int> <explicit|implicit>
    const auto& header = rows[0];
    if (header.size() != 3 || header[0].text != "s")
        throw fail(header[0].line, "expected header 's <stages> <explicit|implicit>'");
    int s = 0;
    try {
        s = std::stoi(header[1].text);
    } catch (const std::exception&) {
        throw fail(header[1].line, "bad stage count '" + header[1].text + "'");
    }
    if (s < 1 || s > 64) throw fail(header[1].line, "stage count out of range");
    TableauKind kind;
    if (header[2].text == "explicit")
        kind = TableauKind::Explicit;
    else if (header[2].text == "implicit")
        kind = TableauKind::Implicit;
    else
        throw fail(header[2].line, "kind must be 'explicit' or 'implicit'");

    if (rows.size() != static_cast<std::size_t>(s) + 3)
        throw fail(rows.back()[0].line,
                   "expected " + std::to_string(s + 3) + " content lines (s, c, " +
                       std::to_string(s) + " x a, b), got " + std::to_string(rows.size()));

    ButcherTableau tab;
    tab.name = name;
    tab.kind = kind;
    ExactTableau exact;
    exact.A.assign(s, std::vector<Qc2>(s, Qc2{}));
    exact.b.assign(s, Qc2{});
    exact.c.assign(s, Qc2{});
    bool all_exact = true;

    auto read_vector = [&](const std::vector<TableauToken>& tokens, const char* tag,
                           Vec& out, std::vector<Qc2>& out_exact) {
        if (tokens[0].text != std::string(tag))
            throw fail(tokens[0].line, std::string("expected a '") + tag + "' line, got '" +
                                           tokens[0].text + "'");
        if (tokens.size() != static_cast<std::size_t>(s) + 1)
            throw fail(tokens[0].line, std::string("'") + tag + "' line needs " +
                                           std::to_string(s) + " entries, got " +
                                           std::to_string(tokens.size() - 1));
        out.resize(s);
        for (int j = 0; j < s; ++j)
            out[j] = detail::parse_entry(tokens[j + 1], &out_exact[j], &all_exact);
    };

    read_vector(rows[1], "c", tab.c, exact.c);
    tab.A.assign(s, Vec(s, 0.0));
    for (int i = 0; i < s; ++i) read_vector(rows[2 + i], "a", tab.A[i], exact.A[i]);
    read_vector(rows[2 + s], "b", tab.b, exact.b);

    if (all_exact) tab.exact = std::move(exact);
    validate_tableau(tab);
    return tab;
}

inline ButcherTableau load_tableau(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open tableau file '" + path.string() + "'");
    return read_tableau(in, path.stem().string());
}

namespace detail {

/// Shortest-round-trip-ish decimal: 17 significant digits always recover
/// the same double.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string format_entry(double value, const Qc2* exact) {
    if (exact && exact->is_rational()) return to_string(exact->a1);
    return format_double(value);
}

}  // namespace detail

/// Writes the text format; rational entries round-trip bit-exactly.
inline void write_tableau(std::ostream& out, const ButcherTableau& tab) {
    const int s = tab.stages();
    const ExactTableau* ex = tab.exact ? &*tab.exact : nullptr;
    out << "s " << s << ' ' << (tab.kind == TableauKind::Explicit ? "explicit" : "implicit")
        << '\n';
    out << "c";
    for (int j = 0; j < s; ++j)
        out << ' ' << detail::format_entry(tab.c[j], ex ? &ex->c[j] : nullptr);
    out << '\n';
    for (int i = 0; i < s; ++i) {
        out << "a";
        for (int j = 0; j < s; ++j)
            out << ' ' << detail::format_entry(tab.A[i][j], ex ? &ex->A[i][j] : nullptr);
        out << '\n';
    }
    out << "b";
    for (int j = 0; j < s; ++j)
        out << ' ' << detail::format_entry(tab.b[j], ex ? &ex->b[j] : nullptr);
    out << '\n';
}

inline void save_tableau(const ButcherTableau& tab, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_tableau(out, tab);
    out.flush();
    if (!out) throw Error("I/O error while writing '" + path.string() + "'");
}

/// Resolves a CLI-style method designator: a catalog id or a tableau file.
inline ButcherTableau resolve_method(const std::string& designator) {
    for (const std::string& known : catalog_names())
        if (designator == known) return catalog(designator);
    if (std::filesystem::exists(designator)) return load_tableau(designator);
    throw ValidationError("'" + designator + "' is neither a catalog method nor a tableau file");
}

}  // namespace rk
