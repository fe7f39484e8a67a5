#include "figmn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "figmn/errors.hpp"

namespace figmn {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

SymmetricMatrix SymmetricMatrix::identity(int n) {
    SymmetricMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SymmetricMatrix SymmetricMatrix::from_diagonal(std::span<const double> d) {
    SymmetricMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m(i, i) = d[i];
    return m;
}

Vector SymmetricMatrix::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw DimensionError("matrix-vector dimension mismatch");
    Vector y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

void SymmetricMatrix::add_scaled_outer(std::span<const double> u, double c) {
    if (static_cast<int>(u.size()) != n_)
        throw DimensionError("outer-product dimension mismatch");
    for (int i = 0; i < n_; ++i) {
        double* row = a_.data() + static_cast<std::size_t>(i) * n_;
        const double cu = c * u[i];
        for (int j = 0; j < n_; ++j) row[j] += cu * u[j];
    }
}

SymmetricMatrix SymmetricMatrix::scaled(double c) const {
    SymmetricMatrix m(n_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = c * a_[k];
    return m;
}

void SymmetricMatrix::symmetrize() {
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = v;
            (*this)(j, i) = v;
        }
}

double SymmetricMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double SymmetricMatrix::symmetry_gap() const {
    double g = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            g = std::max(g, std::abs((*this)(i, j) - (*this)(j, i)));
    return g;
}

double CholeskyFactor::det() const {
    double d = 1.0;
    for (int i = 0; i < n_; ++i) {
        const double p = l(i, i);
        d *= p * p;
    }
    return d;
}

double CholeskyFactor::log_det() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

Vector CholeskyFactor::solve(std::span<const double> b) const {
    if (static_cast<int>(b.size()) != n_)
        throw DimensionError("solve dimension mismatch");
    Vector y(n_);
    for (int i = 0; i < n_; ++i) {
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= l(i, j) * y[j];
        y[i] = s / l(i, i);
    }
    Vector x(n_);
    for (int i = n_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n_; ++j) s -= l(j, i) * x[j];
        x[i] = s / l(i, i);
    }
    return x;
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
    if (b.rows() != n_)
        throw DimensionError("solve dimension mismatch");
    Matrix x(b.rows(), b.cols());
    Vector col(n_);
    for (int c = 0; c < b.cols(); ++c) {
        for (int i = 0; i < n_; ++i) col[i] = b(i, c);
        Vector s = solve(col);
        for (int i = 0; i < n_; ++i) x(i, c) = s[i];
    }
    return x;
}

double CholeskyFactor::quad_inverse(std::span<const double> e) const {
    if (static_cast<int>(e.size()) != n_)
        throw DimensionError("quad_inverse dimension mismatch");
    // ||L^{-1} e||^2
    Vector y(n_);
    double q = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = e[i];
        for (int j = 0; j < i; ++j) s -= l(i, j) * y[j];
        y[i] = s / l(i, i);
        q += y[i] * y[i];
    }
    return q;
}

std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& a) {
    const int n = a.order();
    CholeskyFactor f;
    f.n_ = n;
    f.l_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= f.l(j, k) * f.l(j, k);
        if (!(d > 0.0)) return std::nullopt;
        const double ljj = std::sqrt(d);
        f.l_[static_cast<std::size_t>(j) * n + j] = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= f.l(i, k) * f.l(j, k);
            f.l_[static_cast<std::size_t>(i) * n + j] = s / ljj;
        }
    }
    return f;
}

double mahalanobis_sq(std::span<const double> x, std::span<const double> mu,
                      const SymmetricMatrix& lambda) {
    const int n = lambda.order();
    if (static_cast<int>(x.size()) != n || static_cast<int>(mu.size()) != n)
        throw DimensionError("mahalanobis_sq dimension mismatch");
    Vector e(n);
    for (int i = 0; i < n; ++i) e[i] = x[i] - mu[i];
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += lambda(i, j) * e[j];
        q += e[i] * s;
    }
    return std::max(q, 0.0);
}

namespace detail {

SymmetricMatrix rank_one_combine(const SymmetricMatrix& a_inv, std::span<const double> w,
                                 double coeff) {
    SymmetricMatrix out = a_inv;
    out.add_scaled_outer(w, coeff);
    out.symmetrize();
    return out;
}

} // namespace detail

SymmetricMatrix rank_one_inverse_add(const SymmetricMatrix& a_inv, std::span<const double> u) {
    Vector w = a_inv.apply(u);
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) q += u[i] * w[i];
    return detail::rank_one_combine(a_inv, w, -1.0 / (1.0 + q));
}

SymmetricMatrix rank_one_inverse_sub(const SymmetricMatrix& a_inv, std::span<const double> u) {
    Vector w = a_inv.apply(u);
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) q += u[i] * w[i];
    const double factor = 1.0 - q;
    if (factor < kDegenerateEps)
        throw DegenerateUpdate("rank-one subtraction would lose positive-definiteness");
    return detail::rank_one_combine(a_inv, w, 1.0 / factor);
}

double det_rank_one_add(double det_a, const SymmetricMatrix& a_inv, std::span<const double> u) {
    Vector w = a_inv.apply(u);
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) q += u[i] * w[i];
    return det_a * (1.0 + q);
}

double det_rank_one_sub(double det_a, const SymmetricMatrix& a_inv, std::span<const double> u) {
    Vector w = a_inv.apply(u);
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) q += u[i] * w[i];
    const double factor = 1.0 - q;
    if (factor < kDegenerateEps)
        throw DegenerateUpdate("rank-one determinant subtraction is degenerate");
    return det_a * factor;
}

CholeskyFactor cholesky_checked(const SymmetricMatrix& m) {
    const int n = m.order();
    const double pivot_floor = 1e-12 * m.max_abs();
    CholeskyFactor f;
    // Same elimination as cholesky(), with the relative pivot test.
    auto maybe = cholesky(m);
    if (maybe) {
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            const double p = maybe->l(i, i);
            if (p * p < pivot_floor) { ok = false; break; }
        }
        if (ok) return *maybe;
    }
    throw SingularMatrix("matrix is singular to working precision");
}

Vector solve_small_spd(const SymmetricMatrix& m, std::span<const double> rhs) {
    return cholesky_checked(m).solve(rhs);
}

Matrix solve_small_spd(const SymmetricMatrix& m, const Matrix& rhs) {
    return cholesky_checked(m).solve(rhs);
}

} // namespace figmn
