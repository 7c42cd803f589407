#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rk/errors.hpp"
#include "rk/tableau.hpp"
#include "rk/trees.hpp"

namespace rk {

// Tolerance ladder used by the boolean diagnostics below. Double-precision
// tableaux with s <= 11 accumulate residuals around 1e-14, two orders below
// these thresholds, while genuine violations for the cataloged methods sit
// at 1e-5 or above.
inline constexpr double kOrderConditionTol = 1e-12;
inline constexpr double kMZeroTol = 1e-13;
inline constexpr double kLeadingTermTol = 1e-12;

/// Residuals b Phi(t) - 1/t! for every tree of order <= max_order.
inline std::map<RootedTree, double> order_residuals(const ButcherTableau& tab, int max_order) {
    if (max_order < 1 || max_order > 8)
        throw ValidationError("order_residuals: max_order must be in [1, 8]");
    std::map<RootedTree, double> out;
    for (const auto& group : enumerate_trees(max_order))
        for (const RootedTree& t : group)
            out.emplace(t, elementary_weight(t, tab) -
                               1.0 / tree_factorial(t).convert_to<double>());
    return out;
}

/// Largest p <= 8 with every order-<=p residual below 1e-12.
inline int classical_order(const ButcherTableau& tab) {
    int p = 0;
    for (const auto& group : enumerate_trees(8)) {
        for (const RootedTree& t : group) {
            const double residual =
                elementary_weight(t, tab) - 1.0 / tree_factorial(t).convert_to<double>();
            if (std::abs(residual) > kOrderConditionTol) return p;
        }
        ++p;
    }
    return p;
}

/// m_ij = b_i a_ij + b_j a_ji - b_i b_j; zero M characterizes symplectic
/// methods. Symmetric by construction (each entry computed once per pair).
inline Mat m_matrix(const ButcherTableau& tab) {
    const std::size_t s = tab.b.size();
    Mat m = zero_matrix(s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = i; j < s; ++j) {
            const double v = tab.b[i] * tab.A[i][j] + tab.b[j] * tab.A[j][i] - tab.b[i] * tab.b[j];
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    return m;
}

struct PseudoOrder {
    int q = 0;
    bool infinite = false;  // M = O within 1e-13

    friend bool operator==(const PseudoOrder& x, const PseudoOrder& y) {
        return x.infinite == y.infinite && (x.infinite || x.q == y.q);
    }
};

/// Largest q <= q_max with |Phi(t1)^T M Phi(t2)| < 1e-12 over all tree pairs
/// with |t1| + |t2| <= q; reports the infinite flag when M itself vanishes.
inline PseudoOrder pseudo_symplectic_order(const ButcherTableau& tab, int q_max = 10) {
    if (q_max < 2 || q_max > 10)
        throw ValidationError("pseudo_symplectic_order: q_max must be in [2, 10]");
    const Mat m = m_matrix(tab);
    if (max_abs(m) < kMZeroTol) return {q_max, true};

    const auto groups = enumerate_trees(q_max - 1);
    std::vector<std::vector<Vec>> phis(groups.size());
    for (std::size_t n = 0; n < groups.size(); ++n)
        for (const RootedTree& t : groups[n]) phis[n].push_back(derivative_weights(t, tab));

    for (int total = 2; total <= q_max; ++total) {
        for (int n1 = 1; 2 * n1 <= total; ++n1) {
            const int n2 = total - n1;
            for (const Vec& phi1 : phis[n1 - 1])
                for (const Vec& phi2 : phis[n2 - 1])
                    if (std::abs(bilinear(phi1, m, phi2)) > kOrderConditionTol)
                        return {total - 1, false};
        }
    }
    return {q_max, false};
}

struct DFlags {
    bool d_one = false;    // D(1):   M 1 = 0
    bool d_c = false;      // D(c):   M c = 0
    bool d_c2 = false;     // D(c^2): M c^2 = 0
    bool d_ac = false;     // D(Ac):  M (Ac) = 0
    bool c2 = false;       // explicit C(2), with the b2 = 0 stage-2 exemption
};

/// Boolean property flags at the 1e-12 tolerance.
inline DFlags d_vector_flags(const ButcherTableau& tab) {
    const std::size_t s = tab.b.size();
    const Mat m = m_matrix(tab);
    const Vec ac = matvec(tab.A, tab.c);
    Vec c_sq(s);
    for (std::size_t i = 0; i < s; ++i) c_sq[i] = tab.c[i] * tab.c[i];

    DFlags flags;
    flags.d_one = max_abs(matvec(m, ones(s))) < kOrderConditionTol;
    flags.d_c = max_abs(matvec(m, tab.c)) < kOrderConditionTol;
    flags.d_c2 = max_abs(matvec(m, c_sq)) < kOrderConditionTol;
    flags.d_ac = max_abs(matvec(m, ac)) < kOrderConditionTol;

    flags.c2 = true;
    for (std::size_t i = 0; i < s; ++i) {
        if (std::abs(ac[i] - 0.5 * c_sq[i]) > kOrderConditionTol) {
            const bool exempt = (i == 1) && s >= 2 && std::abs(tab.b[1]) < kOrderConditionTol;
            if (!exempt) {
                flags.c2 = false;
                break;
            }
        }
    }
    return flags;
}

/// T_p via its defining root-sum-square over order-p trees,
/// T_p^2 = sum (b Phi(t) - 1/t!)^2 / sigma(t)^2.
inline double error_coefficient_sigma_form(const ButcherTableau& tab, int p) {
    if (p < 1 || p > 8) throw ValidationError("error_coefficient: p must be in [1, 8]");
    double acc = 0.0;
    const auto groups = enumerate_trees(p);
    for (const RootedTree& t : groups[p - 1]) {
        const double residual =
            elementary_weight(t, tab) - 1.0 / tree_factorial(t).convert_to<double>();
        const double sig = symmetry_order(t).convert_to<double>();
        acc += (residual / sig) * (residual / sig);
    }
    return std::sqrt(acc);
}

/// The algebraically equal route T_p^2 = (1/p!)^2 sum alpha(t)^2 (t! b Phi(t) - 1)^2.
inline double error_coefficient_alpha_form(const ButcherTableau& tab, int p) {
    if (p < 1 || p > 8) throw ValidationError("error_coefficient: p must be in [1, 8]");
    double acc = 0.0;
    double p_factorial = 1.0;
    for (int k = 2; k <= p; ++k) p_factorial *= k;
    const auto groups = enumerate_trees(p);
    for (const RootedTree& t : groups[p - 1]) {
        const double residual =
            tree_factorial(t).convert_to<double>() * elementary_weight(t, tab) - 1.0;
        const double a = monotonic_labelings(t).convert_to<double>();
        acc += a * a * residual * residual;
    }
    return std::sqrt(acc) / p_factorial;
}

/// Computes T_p along both routes and cross-checks them: they must agree to
/// 1e-12 relative, except when both sit at the rounding floor of an exactly
/// satisfied order (then each is pure noise below 1e-12).
inline double error_coefficient(const ButcherTableau& tab, int p) {
    const double t_sigma = error_coefficient_sigma_form(tab, p);
    const double t_alpha = error_coefficient_alpha_form(tab, p);
    const double scale = std::max(t_sigma, t_alpha);
    const bool agree =
        std::abs(t_sigma - t_alpha) <= 1e-12 * scale || scale < kOrderConditionTol;
    if (!agree)
        throw NumericalError("error_coefficient: sigma-form and alpha-form disagree for " +
                             tab.name + " at p = " + std::to_string(p));
    return t_sigma;
}

/// Normalized stability coefficients r_k = k! * [z^k] R(z) for k <= n_max,
/// with R(z) = 1 + sum z^{n+1} b A^n 1. For implicit methods the matrix
/// power recurrence yields the exact Taylor coefficients of
/// b (I - zA)^{-1} 1 without forming the rational function.
inline std::vector<double> stability_coefficients(const ButcherTableau& tab, int n_max) {
    if (n_max < 0) throw ValidationError("stability_coefficients: n_max must be >= 0");
    std::vector<double> r;
    r.reserve(n_max + 1);
    r.push_back(1.0);  // r_0
    Vec v = ones(tab.b.size());
    double k_factorial = 1.0;
    for (int k = 1; k <= n_max; ++k) {
        k_factorial *= k;
        r.push_back(k_factorial * dot(tab.b, v));  // [z^k] R = b A^{k-1} 1
        v = matvec(tab.A, v);
    }
    return r;
}

struct LeadingTerm {
    bool none = false;  // R(z) R(-z) - 1 vanishes identically (to tolerance)
    int power = 0;      // even
    double coefficient = 0.0;
};

/// First nonzero Taylor term of R(z) R(-z) - 1 about z = 0.
inline LeadingTerm rr_minus_one_leading(const ButcherTableau& tab) {
    const int s = tab.stages();
    const int n_scan = std::max(2 * s, 12);
    const std::vector<double> r = stability_coefficients(tab, n_scan);
    std::vector<double> a(r.size());  // plain Taylor coefficients of R
    double k_factorial = 1.0;
    a[0] = 1.0;
    for (std::size_t k = 1; k < r.size(); ++k) {
        k_factorial *= static_cast<double>(k);
        a[k] = r[k] / k_factorial;
    }
    for (int n = 2; n <= n_scan; n += 2) {  // odd coefficients cancel identically
        double coeff = 0.0;
        for (int k = 0; k <= n; ++k) coeff += a[k] * a[n - k] * ((n - k) % 2 == 0 ? 1.0 : -1.0);
        if (std::abs(coeff) > kLeadingTermTol) return {false, n, coeff};
    }
    return {true, 0, 0.0};
}

/// Comparison-table summary of a method, from its tableau alone.
struct MethodAnalysis {
    std::string name;
    int stages = 0;
    int p = 0;
    PseudoOrder q;
    bool q_below_p = false;
    std::map<int, double> error_coefficients;    // order -> T_p (orders 4..6)
    std::vector<double> stability_coeffs;        // r_0 .. r_8
    LeadingTerm rr_leading;
    DFlags flags;
    double max_abs_a = 0.0;
    double min_nonzero_b = 0.0;  // signed minimum over nonzero weights
};

inline MethodAnalysis analyze(const ButcherTableau& tab, int q_max = 10) {
    MethodAnalysis out;
    out.name = tab.name;
    out.stages = tab.stages();
    out.p = classical_order(tab);
    out.q = pseudo_symplectic_order(tab, q_max);
    out.q_below_p = !out.q.infinite && out.q.q < out.p;
    for (int p = 4; p <= 6; ++p) out.error_coefficients[p] = error_coefficient(tab, p);
    out.stability_coeffs = stability_coefficients(tab, 8);
    out.rr_leading = rr_minus_one_leading(tab);
    out.flags = d_vector_flags(tab);
    out.max_abs_a = max_abs(tab.A);
    out.min_nonzero_b = 0.0;
    bool first = true;
    for (double w : tab.b) {
        if (std::abs(w) < 1e-14) continue;  // treat as a structurally zero weight
        if (first || w < out.min_nonzero_b) out.min_nonzero_b = w;
        first = false;
    }
    return out;
}

}  // namespace rk
