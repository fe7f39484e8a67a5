#pragma once

// Test-only reference computations, deliberately independent of the library
// implementation: Gauss-Jordan inversion with partial pivoting, LU
// determinants, and a random SPD generator.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "figmn/linalg.hpp"
#include "figmn/rng.hpp"

namespace oracle {

using figmn::Rng;
using figmn::SymmetricMatrix;
using figmn::Vector;

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const SymmetricMatrix& m) {
    const int n = m.order();
    Dense a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    return a;
}

inline SymmetricMatrix to_symmetric(const Dense& a) {
    const int n = static_cast<int>(a.size());
    SymmetricMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a[i][j];
    return m;
}

// Gauss-Jordan with partial pivoting.
inline Dense invert(Dense a) {
    const int n = static_cast<int>(a.size());
    Dense inv(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        for (int j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// LU determinant with partial pivoting.
inline double determinant(Dense a) {
    const int n = static_cast<int>(a.size());
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

inline Dense add_outer(Dense a, const Vector& u, double sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] += sign * u[i] * u[j];
    return a;
}

// M' M + ridge I: SPD with probability one, moderate conditioning.
inline SymmetricMatrix random_spd(int n, Rng& rng, double ridge = 0.5) {
    Dense m(n, std::vector<double>(n));
    for (auto& row : m)
        for (double& v : row) v = rng.normal();
    SymmetricMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += m[k][i] * m[k][j];
            a(i, j) = s / n + (i == j ? ridge : 0.0);
        }
    return a;
}

inline Vector random_vector(int n, Rng& rng, double scale = 1.0) {
    Vector v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

inline double quad_form(const Dense& a, const Vector& e) {
    double q = 0.0;
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q += e[i] * a[i][j] * e[j];
    return q;
}

inline double rel_err(double got, double want) {
    const double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

inline double max_rel_err(const SymmetricMatrix& got, const Dense& want) {
    double m = 0.0;
    double scale = 0.0;
    for (const auto& row : want)
        for (double v : row) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < got.order(); ++i)
        for (int j = 0; j < got.order(); ++j)
            m = std::max(m, std::abs(got(i, j) - want[i][j]) / std::max(scale, 1e-300));
    return m;
}

// Two-pass mean and sample variance, the independent check for the
// streaming accumulator.
inline std::pair<double, double> two_pass_stats(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
    return {mean, var};
}

} // namespace oracle
