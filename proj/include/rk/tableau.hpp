#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "rk/errors.hpp"
#include "rk/linalg.hpp"
#include "rk/qc2.hpp"

namespace rk {

enum class TableauKind { Explicit, Implicit };

/// Exact entries in Q(c2); plain rationals embed with zero c2/c3 parts.
struct ExactTableau {
    std::vector<std::vector<Qc2>> A;
    std::vector<Qc2> b;
    std::vector<Qc2> c;
};

/// A Runge-Kutta method: s-stage coefficient matrix A, weights b, nodes c.
///
/// Invariants: square A with row sums equal to c (the usual consistency
/// assumption), and a strictly lower triangular A when kind is Explicit.
/// When `exact` is set it is the source of truth; the double entries are
/// its embedding.
struct ButcherTableau {
    std::string name;
    TableauKind kind = TableauKind::Explicit;
    Mat A;
    Vec b;
    Vec c;
    std::optional<ExactTableau> exact;

    int stages() const { return static_cast<int>(b.size()); }
};

/// Checks shape, explicit zero pattern and row-sum consistency.
/// `row_sum_tol` is the loader's acceptance threshold.
inline void validate_tableau(const ButcherTableau& tab, double row_sum_tol = 1e-10) {
    const std::size_t s = tab.b.size();
    if (s == 0) throw ValidationError(tab.name + ": empty tableau");
    if (tab.A.size() != s || tab.c.size() != s)
        throw ValidationError(tab.name + ": A/b/c dimensions disagree");
    for (const Vec& row : tab.A)
        if (row.size() != s) throw ValidationError(tab.name + ": A is not square");
    if (tab.kind == TableauKind::Explicit) {
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = i; j < s; ++j)
                if (tab.A[i][j] != 0.0)
                    throw ValidationError(tab.name + ": explicit tableau has a nonzero entry on or above the diagonal at row " +
                                          std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < s; ++i) {
        double sum = 0.0;
        for (double v : tab.A[i]) sum += v;
        if (std::abs(sum - tab.c[i]) > row_sum_tol) {
            std::ostringstream os;
            os << tab.name << ": row-sum violation on row " << (i + 1) << ": sum(a_ij) = " << sum
               << " but c = " << tab.c[i];
            throw ValidationError(os.str());
        }
    }
}

namespace detail {

inline ButcherTableau from_exact(std::string name, TableauKind kind, ExactTableau exact) {
    ButcherTableau tab;
    tab.name = std::move(name);
    tab.kind = kind;
    const std::size_t s = exact.b.size();
    tab.A = zero_matrix(s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) tab.A[i][j] = exact.A[i][j].embed();
    tab.b.resize(s);
    tab.c.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
        tab.b[i] = exact.b[i].embed();
        tab.c[i] = exact.c[i].embed();
    }
    tab.exact = std::move(exact);
    return tab;
}

inline ExactTableau exact_from_rational_rows(const std::vector<std::vector<Rational>>& rows,
                                             const std::vector<Rational>& b,
                                             const std::vector<Rational>& c) {
    ExactTableau ex;
    const std::size_t s = b.size();
    ex.A.assign(s, std::vector<Qc2>(s, Qc2{}));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) ex.A[i][j] = Qc2(rows[i][j]);
    for (const Rational& w : b) ex.b.emplace_back(w);
    for (const Rational& n : c) ex.c.emplace_back(n);
    return ex;
}

}  // namespace detail

/// The classical 4-stage method.
inline ButcherTableau tableau_rk4() {
    using R = Rational;
    auto ex = detail::exact_from_rational_rows(
        {{}, {R(1, 2)}, {R(0), R(1, 2)}, {R(0), R(0), R(1)}},
        {R(1, 6), R(1, 3), R(1, 3), R(1, 6)}, {R(0), R(1, 2), R(1, 2), R(1)});
    return detail::from_exact("rk4", TableauKind::Explicit, std::move(ex));
}

/// 2-stage Gauss-Legendre collocation method (order 4, symplectic).
inline ButcherTableau tableau_gl4() {
    const double r = std::sqrt(3.0) / 6.0;
    ButcherTableau tab;
    tab.name = "gl4";
    tab.kind = TableauKind::Implicit;
    tab.A = {{0.25, 0.25 - r}, {0.25 + r, 0.25}};
    tab.b = {0.5, 0.5};
    tab.c = {0.5 - r, 0.5 + r};
    return tab;
}

/// gamma = (2 + 2^(1/3) + 2^(-1/3))/12, the node unit of the 7-stage method.
inline double eq2_gamma() {
    const double u = std::cbrt(2.0);
    return (2.0 + u + 1.0 / u) / 12.0;
}

/// The 7-stage pseudo-symplectic method of order (4,9).
inline ButcherTableau tableau_eq2() {
    const double g = eq2_gamma();
    ButcherTableau tab;
    tab.name = "eq2";
    tab.kind = TableauKind::Explicit;
    tab.A = zero_matrix(7);
    const double half_2g = 0.5 - 2.0 * g;
    tab.A[1] = {2 * g, 0, 0, 0, 0, 0, 0};
    tab.A[2] = {0, 4 * g, 0, 0, 0, 0, 0};
    tab.A[3] = {2 * g, 0, half_2g, 0, 0, 0, 0};
    tab.A[4] = {0, 4 * g, 0, 1 - 8 * g, 0, 0, 0};
    tab.A[5] = {2 * g, 0, half_2g, 0, half_2g, 0, 0};
    tab.A[6] = {0, 4 * g, 0, 1 - 8 * g, 0, 4 * g, 0};
    tab.b = {g, 2 * g, 0.25 - g, 0.5 - 4 * g, 0.25 - g, 2 * g, g};
    tab.c = {0, 2 * g, 4 * g, 0.5, 1 - 4 * g, 1 - 2 * g, 1};
    return tab;
}

/// The 8-stage pseudo-symplectic method of order (4,8), exact in Q(c2).
inline ButcherTableau tableau_eq3() {
    const Qc2 c2 = Qc2::c2();
    const Qc2 c3 = Qc2::c3();
    const Qc2 zero{};
    const Qc2 one{1};
    const Qc2 half{Rational(1, 2)};
    const Qc2 quarter{Rational(1, 4)};

    ExactTableau ex;
    ex.A.assign(8, std::vector<Qc2>(8, zero));
    auto set_row = [&](int i, std::vector<Qc2> entries) {
        for (std::size_t j = 0; j < entries.size(); ++j) ex.A[i][j] = std::move(entries[j]);
    };
    set_row(1, {c2});
    set_row(2, {zero, c3});
    set_row(3, {half - c2, c2 + c3 - one, one - c3});
    set_row(4, {Qc2(2) * c2 * c3, (one - Qc2(2) * c3) * c3, (one - Qc2(4) * c2) * c3,
                Qc2(4) * c2 * c3});
    const Qc2 a64 = Qc2(4) * c2 - Qc2(2);
    const Qc2 a65 = Qc2(3) - Qc2(4) * c2 - Qc2(2) * c3;  // equals 1/(2 c2) - 2
    set_row(5, {zero, c3, zero, a64, a65});
    set_row(6, {c2, zero, half - Qc2(2) * c2, Qc2(2) - Qc2(4) * c2, Qc2(6) * c2 - Qc2(2),
                half - Qc2(2) * c2});
    set_row(7, {zero, c3, zero, a64, a65, zero, c3});
    ex.b = {half * c2, half * c3, quarter - c2, zero, half + c2 - c3, quarter - c2, half * c3,
            half * c2};
    ex.c = {zero, c2, c3, half, half, one - c3, one - c2, one};
    return detail::from_exact("eq3", TableauKind::Explicit, std::move(ex));
}

/// The printed 7-stage reduction of the family member at (c2, c3) = (1/6, 11/30).
inline ButcherTableau tableau_point_r() {
    using R = Rational;
    auto ex = detail::exact_from_rational_rows(
        {{},
         {R(1, 6)},
         {R(1, 150), R(9, 25)},
         {R(1, 4), R(-13, 48), R(25, 48)},
         {R(-37, 50), R(59, 25), R(-2), R(22, 25)},
         {R(1, 6), R(0), R(0), R(4, 11), R(10, 33)},
         {R(0), R(3, 8), R(0), R(4, 11), R(-5, 44), R(3, 8)}},
        {R(1, 12), R(3, 16), R(0), R(4, 11), R(25, 264), R(3, 16), R(1, 12)},
        {R(0), R(1, 6), R(11, 30), R(1, 2), R(1, 2), R(5, 6), R(1)});
    return detail::from_exact("pointR", TableauKind::Explicit, std::move(ex));
}

/// Member of the one-parameter family of 8-stage (4,8) methods at the node
/// point (c2, c3) = (z1, z2). The free stage-5 row carries the parameter
/// psi; row 4 carries the fixed companion value phi = 1/(2 c2) - 1. The
/// blended block (a64, a65, a74, a75) comes from chi, and the weights close
/// with b4 = (a64 + a74)/2, b5 = (a65 + a75)/2.
inline ButcherTableau family_tableau(double psi) {
    const double c2 = qc2_c2();
    const double c3 = qc2_c3();
    const double phi = 1.0 / (2.0 * c2) - 1.0;
    if (std::abs(psi - phi) < 1e-12)
        throw ValidationError("family_tableau: psi at the chi pole (psi = 1/(2 c2) - 1)");
    const double chi = 4.0 * (1.0 - 3.0 * c2) / ((1.0 - 6.0 * c2) * (phi - psi));

    const double a64 = 2.0 * (0.5 - c3) * (1.0 - chi);
    const double a65 = 2.0 * (0.5 - c3) * chi;
    const double a74 = 2.0 * c2 * (1.0 + chi);
    const double a75 = -2.0 * c2 * chi;
    const double b4 = 0.5 * (a64 + a74);
    const double b5 = 0.5 * (a65 + a75);

    ButcherTableau tab;
    tab.name = "family";
    tab.kind = TableauKind::Explicit;
    tab.A = zero_matrix(8);
    tab.A[1][0] = c2;
    tab.A[2][1] = c3;
    // Parameterized row at value phi; its 4th entry phi*c2 + (1-phi)*(1/2-c3)
    // vanishes identically through the closed form of phi.
    tab.A[3] = {phi * c2, (1.0 - phi) * c3, phi * (0.5 - 2.0 * c2), 0, 0, 0, 0, 0};
    tab.A[4] = {psi * c2, (1.0 - psi) * c3, psi * (0.5 - 2.0 * c2),
                psi * c2 + (1.0 - psi) * (0.5 - c3), 0, 0, 0, 0};
    tab.A[5] = {0, c3, 0, a64, a65, 0, 0, 0};
    tab.A[6] = {c2, 0, 0.5 - 2.0 * c2, a74, a75, 0.5 - 2.0 * c2, 0, 0};
    tab.A[7] = {0, c3, 0, a64, a65, 0, c3, 0};
    tab.b = {0.5 * c2, 0.5 * c3, 0.25 - c2, b4, b5, 0.25 - c2, 0.5 * c3, 0.5 * c2};
    tab.c = {0, c2, c3, 0.5, 0.5, 1 - c3, 1 - c2, 1};
    return tab;
}

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {"rk4", "gl4", "eq2", "eq3", "pointR"};
    return names;
}

/// Built-in method registry.
inline ButcherTableau catalog(std::string_view name) {
    if (name == "rk4") return tableau_rk4();
    if (name == "gl4") return tableau_gl4();
    if (name == "eq2") return tableau_eq2();
    if (name == "eq3") return tableau_eq3();
    if (name == "pointR") return tableau_point_r();
    throw ValidationError("unknown method '" + std::string(name) +
                          "' (known: rk4, gl4, eq2, eq3, pointR)");
}

// ---------------------------------------------------------------------------
// Parity ("even"/"odd" stage-vector symmetry) diagnostics.

/// Residuals of the time-reversal parity patterns for Ap1, Ap2, Aq1 and q1,
/// where p1 = 2c-1, p2 = 6c^2-6c+1 and q1 = Ac - c^2/2.
///
/// An 8-stage vector is "even" when x6=x3, x7=x2, x8=x1 and "odd" when
/// y1+y8 = y2+y7 = y3+y6 = y4 = y5 = 0; the 7-stage analog mirrors stages
/// around the middle one. Requires the matching node pattern
/// (c8=1, c7=1-c2, c6=1-c3, ...); otherwise node_pattern_ok is false and no
/// residuals are reported.
struct ParityReport {
    bool node_pattern_ok = false;
    std::map<std::string, double> even_residuals;  // vector label -> max-abs residual
    std::map<std::string, double> odd_residuals;
};

namespace detail {

inline bool node_pattern_matches(const Vec& c, double tol = 1e-12) {
    const std::size_t s = c.size();
    if (s == 8) {
        return std::abs(c[0]) < tol && std::abs(c[3] - 0.5) < tol && std::abs(c[4] - 0.5) < tol &&
               std::abs(c[5] - (1 - c[2])) < tol && std::abs(c[6] - (1 - c[1])) < tol &&
               std::abs(c[7] - 1) < tol;
    }
    if (s == 7) {
        return std::abs(c[0]) < tol && std::abs(c[3] - 0.5) < tol &&
               std::abs(c[4] - (1 - c[2])) < tol && std::abs(c[5] - (1 - c[1])) < tol &&
               std::abs(c[6] - 1) < tol;
    }
    return false;
}

// Outer mirror pairs (1,s), (2,s-1), (3,s-2); the middle stages (one for
// s = 7, the two c = 1/2 stages for s = 8) are unconstrained in "even"
// vectors and must vanish individually in "odd" ones.

inline double even_residual(const Vec& x) {
    const std::size_t s = x.size();
    double r = 0.0;
    for (std::size_t i = 0; i < 3; ++i) r = std::max(r, std::abs(x[s - 1 - i] - x[i]));
    return r;
}

inline double odd_residual(const Vec& y) {
    const std::size_t s = y.size();
    double r = 0.0;
    for (std::size_t i = 0; i < 3; ++i) r = std::max(r, std::abs(y[i] + y[s - 1 - i]));
    for (std::size_t m = 3; m < s - 3; ++m) r = std::max(r, std::abs(y[m]));
    return r;
}

}  // namespace detail

inline ParityReport parity_report(const ButcherTableau& tab) {
    ParityReport report;
    if (!detail::node_pattern_matches(tab.c)) return report;
    report.node_pattern_ok = true;

    const std::size_t s = tab.b.size();
    Vec p1(s), p2(s), q1(s);
    for (std::size_t i = 0; i < s; ++i) {
        p1[i] = 2 * tab.c[i] - 1;
        p2[i] = 6 * tab.c[i] * tab.c[i] - 6 * tab.c[i] + 1;
    }
    const Vec ac = matvec(tab.A, tab.c);
    for (std::size_t i = 0; i < s; ++i) q1[i] = ac[i] - 0.5 * tab.c[i] * tab.c[i];

    report.even_residuals["Ap1"] = detail::even_residual(matvec(tab.A, p1));
    report.even_residuals["q1"] = detail::even_residual(q1);
    report.odd_residuals["Ap2"] = detail::odd_residual(matvec(tab.A, p2));
    report.odd_residuals["Aq1"] = detail::odd_residual(matvec(tab.A, q1));
    return report;
}

// ---------------------------------------------------------------------------
// The zeta polynomial whose zero set carries the method family.

/// Nonzero coefficients zeta_mn of zeta(c2, c3) = sum zeta_mn c2^m (2 c3)^n.
inline const std::vector<std::tuple<int, int, long long>>& zeta_coefficients() {
    static const std::vector<std::tuple<int, int, long long>> coeffs = {
        {0, 0, 1},   {1, 0, -13}, {2, 0, 20},                             //
        {0, 1, -3},  {1, 1, 53},  {2, 1, 18},   {3, 1, -132},             //
        {0, 2, -1},  {1, 2, -93}, {2, 2, -198}, {3, 2, 396}, {4, 2, 72},  //
        {0, 3, 15},  {1, 3, 75},  {2, 3, 294},  {3, 3, -576},             //
        {0, 4, -21}, {1, 4, -15}, {2, 4, -108}, {3, 4, 216},              //
        {0, 5, 9},   {1, 5, -9},
    };
    return coeffs;
}

/// Exact evaluation at rational arguments.
inline Rational zeta_exact(const Rational& c2, const Rational& c3) {
    Rational acc{0};
    const Rational two_c3 = 2 * c3;
    for (const auto& [m, n, coeff] : zeta_coefficients()) {
        Rational term{coeff};
        for (int k = 0; k < m; ++k) term *= c2;
        for (int k = 0; k < n; ++k) term *= two_c3;
        acc += term;
    }
    return acc;
}

inline double zeta(double c2, double c3) {
    double acc = 0.0;
    const double two_c3 = 2.0 * c3;
    for (const auto& [m, n, coeff] : zeta_coefficients()) {
        double term = static_cast<double>(coeff);
        for (int k = 0; k < m; ++k) term *= c2;
        for (int k = 0; k < n; ++k) term *= two_c3;
        acc += term;
    }
    return acc;
}

}  // namespace rk
