#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rk {

// Stage counts are tiny (s <= 11), so plain row vectors are all we need.
using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // square, row-major

inline Vec ones(std::size_t n) { return Vec(n, 1.0); }

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline Mat zero_matrix(std::size_t n) { return Mat(n, Vec(n, 0.0)); }

inline double dot(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    Vec out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        assert(a[i].size() == x.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) acc += a[i][j] * x[j];
        out[i] = acc;
    }
    return out;
}

inline Vec elementwise(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
    return out;
}

inline Vec scaled(const Vec& x, double s) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * s;
    return out;
}

inline double max_abs(const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const Mat& a) {
    double m = 0.0;
    for (const Vec& row : a) m = std::max(m, max_abs(row));
    return m;
}

/// u^T A v for square A.
inline double bilinear(const Vec& u, const Mat& a, const Vec& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += u[i] * dot(a[i], v);
    return acc;
}

inline bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace rk
