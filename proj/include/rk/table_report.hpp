#pragma once

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rk/analysis.hpp"
#include "rk/csv.hpp"
#include "rk/tableau.hpp"
#include "rk/tableau_io.hpp"

namespace rk {

/// The method roster of the comparison table, in its printed order.
/// Built-ins resolve from the catalog; the rest load from
/// <methods-dir>/<name>.rkt when present.
inline const std::vector<std::string>& table1_roster() {
    static const std::vector<std::string> roster = {"rk4",  "ac36", "clmr47", "ccrl47",
                                                    "eq2",  "eq3",  "cv8",    "gl4"};
    return roster;
}

struct Table1Row {
    std::string name;
    bool available = false;
    std::string source;  // "builtin", file path, or "unavailable"
    MethodAnalysis analysis;
};

inline std::vector<Table1Row> table1_report(
    const std::vector<std::string>& methods,
    const std::optional<std::filesystem::path>& methods_dir, int q_max = 10) {
    std::vector<Table1Row> rows;
    rows.reserve(methods.size());
    for (const std::string& name : methods) {
        Table1Row row;
        row.name = name;
        bool builtin = false;
        for (const std::string& known : catalog_names()) builtin = builtin || known == name;
        if (builtin) {
            row.available = true;
            row.source = "builtin";
            row.analysis = analyze(catalog(name), q_max);
        } else if (methods_dir) {
            const std::filesystem::path path = *methods_dir / (name + ".rkt");
            if (std::filesystem::exists(path)) {
                row.available = true;
                row.source = path.string();
                row.analysis = analyze(load_tableau(path), q_max);
            }
        }
        if (!row.available) row.source = "unavailable";
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::string short_double(double x, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

inline std::string q_string(const PseudoOrder& q) {
    return q.infinite ? "inf" : std::to_string(q.q);
}

inline std::string rr_string(const LeadingTerm& rr) {
    if (rr.none) return "0";
    std::ostringstream os;
    os << (rr.coefficient >= 0 ? "+" : "") << short_double(rr.coefficient, 8) << " z^" << rr.power;
    return os.str();
}

inline const char* tf(bool v) { return v ? "T" : "F"; }

}  // namespace detail

/// One aligned text line per method, mirroring the comparison table's
/// columns: s, p, q, 1e4*T4, 1e3*T5, 1e3*T6, leading RR term, property
/// flags, max |a_ij|, min nonzero b_j.
inline std::string table1_text(const std::vector<Table1Row>& rows) {
    std::ostringstream os;
    os << std::left << std::setw(8) << "method" << std::right << std::setw(4) << "s"
       << std::setw(4) << "p" << std::setw(6) << "q" << std::setw(12) << "1e4*T4" << std::setw(12)
       << "1e3*T5" << std::setw(12) << "1e3*T6" << "  " << std::left << std::setw(22)
       << "R(z)R(-z)-1" << " C2 D1 Dc Dc2 DAc" << std::right << std::setw(12) << "max|a|"
       << std::setw(12) << "min b" << '\n';
    for (const Table1Row& row : rows) {
        os << std::left << std::setw(8) << row.name;
        if (!row.available) {
            os << "  (unavailable: no coefficient file)" << '\n';
            continue;
        }
        const MethodAnalysis& a = row.analysis;
        os << std::right << std::setw(4) << a.stages << std::setw(4) << a.p << std::setw(6)
           << detail::q_string(a.q) << std::setw(12)
           << detail::short_double(1e4 * a.error_coefficients.at(4), 5) << std::setw(12)
           << detail::short_double(1e3 * a.error_coefficients.at(5), 5) << std::setw(12)
           << detail::short_double(1e3 * a.error_coefficients.at(6), 5) << "  " << std::left
           << std::setw(22) << detail::rr_string(a.rr_leading) << "  " << detail::tf(a.flags.c2)
           << "  " << detail::tf(a.flags.d_one) << "  " << detail::tf(a.flags.d_c) << "   "
           << detail::tf(a.flags.d_c2) << "   " << detail::tf(a.flags.d_ac) << std::right
           << std::setw(11) << detail::short_double(a.max_abs_a, 6) << std::setw(12)
           << detail::short_double(a.min_nonzero_b, 6) << '\n';
    }
    return os.str();
}

inline std::vector<std::string> analysis_csv_header() {
    return {"method", "s",  "p",  "q",   "T4",    "T5",   "T6",         "rr_power",
            "rr_coeff", "C2", "D1", "Dc", "Dc2", "DAc", "max_abs_a", "min_nonzero_b"};
}

inline std::vector<std::string> analysis_csv_row(const MethodAnalysis& a) {
    return {a.name,
            std::to_string(a.stages),
            std::to_string(a.p),
            detail::q_string(a.q),
            csv_double(a.error_coefficients.at(4)),
            csv_double(a.error_coefficients.at(5)),
            csv_double(a.error_coefficients.at(6)),
            a.rr_leading.none ? "none" : std::to_string(a.rr_leading.power),
            csv_double(a.rr_leading.none ? 0.0 : a.rr_leading.coefficient),
            detail::tf(a.flags.c2),
            detail::tf(a.flags.d_one),
            detail::tf(a.flags.d_c),
            detail::tf(a.flags.d_c2),
            detail::tf(a.flags.d_ac),
            csv_double(a.max_abs_a),
            csv_double(a.min_nonzero_b)};
}

inline CsvTable table1_csv(const std::vector<Table1Row>& rows) {
    CsvTable table;
    table.header = analysis_csv_header();
    table.header.push_back("available");
    for (const Table1Row& row : rows) {
        std::vector<std::string> cells;
        if (row.available) {
            cells = analysis_csv_row(row.analysis);
        } else {
            cells = {row.name, "", "", "", "", "", "", "", "", "", "", "", "", "", "", ""};
        }
        cells.push_back(row.available ? "1" : "0");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

/// Human-readable analysis block for one method.
inline std::string analysis_text(const MethodAnalysis& a) {
    std::ostringstream os;
    os << "method: " << a.name << "  (" << a.stages << " stages)\n";
    os << "  (s, p, q) = (" << a.stages << ", " << a.p << ", " << detail::q_string(a.q) << ")";
    if (a.q_below_p) os << "   [note: q < p at the 1e-12 tolerance]";
    os << '\n';
    os << "  error coefficients: T4 = " << detail::short_double(a.error_coefficients.at(4), 6)
       << "  T5 = " << detail::short_double(a.error_coefficients.at(5), 6)
       << "  T6 = " << detail::short_double(a.error_coefficients.at(6), 6) << '\n';
    os << "  stability r5..r8:";
    for (int k = 5; k <= 8 && k < static_cast<int>(a.stability_coeffs.size()); ++k)
        os << " " << detail::short_double(a.stability_coeffs[k], 10);
    os << '\n';
    os << "  R(z)R(-z)-1 leading term: " << detail::rr_string(a.rr_leading) << '\n';
    os << "  properties: C(2)=" << detail::tf(a.flags.c2) << " D(1)=" << detail::tf(a.flags.d_one)
       << " D(c)=" << detail::tf(a.flags.d_c) << " D(c^2)=" << detail::tf(a.flags.d_c2)
       << " D(Ac)=" << detail::tf(a.flags.d_ac) << '\n';
    os << "  max |a_ij| = " << detail::short_double(a.max_abs_a, 8)
       << "   min nonzero b_j = " << detail::short_double(a.min_nonzero_b, 8) << '\n';
    return os.str();
}

}  // namespace rk
