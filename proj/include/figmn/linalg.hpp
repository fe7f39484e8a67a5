#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace figmn {

using Vector = std::vector<double>;

/// Threshold below which the rank-one subtraction factor 1 - u'A^{-1}u is
/// treated as degenerate.
inline constexpr double kDegenerateEps = 1e-12;

/// Dense rectangular matrix, row-major. Used for the off-diagonal blocks of
/// a partitioned precision matrix and for multi-column solves.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    Matrix transposed() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

/// Dense symmetric matrix with full row-major storage. Rank-one update
/// routines re-symmetrize their results, so the numerical asymmetry of a
/// matrix that only ever passes through them stays at rounding level.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(int n)
        : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    static SymmetricMatrix identity(int n);
    static SymmetricMatrix from_diagonal(std::span<const double> d);

    int order() const { return n_; }
    bool empty() const { return a_.empty(); }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    /// y = M x
    Vector apply(std::span<const double> x) const;

    /// M += c * u u'
    void add_scaled_outer(std::span<const double> u, double c);

    /// Returns c * M.
    SymmetricMatrix scaled(double c) const;

    /// M <- (M + M') / 2
    void symmetrize();

    double max_abs() const;
    double symmetry_gap() const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// Lower-triangular Cholesky factor of an SPD matrix.
class CholeskyFactor {
public:
    CholeskyFactor() = default;

    int order() const { return n_; }
    bool empty() const { return l_.empty(); }
    double l(int i, int j) const { return l_[static_cast<std::size_t>(i) * n_ + j]; }

    double det() const;
    double log_det() const;

    /// Solves A x = b.
    Vector solve(std::span<const double> b) const;
    /// Column-wise A X = B.
    Matrix solve(const Matrix& b) const;
    /// e' A^{-1} e, computed as the squared norm of L^{-1} e.
    double quad_inverse(std::span<const double> e) const;

    friend std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& a);

private:
    int n_ = 0;
    std::vector<double> l_;
};

/// Returns the Cholesky factor, or nullopt when the matrix is not positive
/// definite (a non-positive pivot is met).
std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& a);

/// (x - mu)' lambda (x - mu), with no matrix inversion involved.
double mahalanobis_sq(std::span<const double> x, std::span<const double> mu,
                      const SymmetricMatrix& lambda);

/// Sherman-Morrison: given A^{-1}, returns (A + u u')^{-1}.
SymmetricMatrix rank_one_inverse_add(const SymmetricMatrix& a_inv, std::span<const double> u);

/// Sherman-Morrison for the subtracting update: (A - u u')^{-1}.
/// Throws DegenerateUpdate when 1 - u'A^{-1}u < kDegenerateEps.
SymmetricMatrix rank_one_inverse_sub(const SymmetricMatrix& a_inv, std::span<const double> u);

/// Matrix determinant lemma: |A + u u'| from |A| and A^{-1}.
double det_rank_one_add(double det_a, const SymmetricMatrix& a_inv, std::span<const double> u);

/// |A - u u'|; throws DegenerateUpdate when the factor drops below
/// kDegenerateEps.
double det_rank_one_sub(double det_a, const SymmetricMatrix& a_inv, std::span<const double> u);

/// Direct solve against a small SPD system. Throws SingularMatrix when a
/// pivot falls under 1e-12 * max|m|.
Vector solve_small_spd(const SymmetricMatrix& m, std::span<const double> rhs);
Matrix solve_small_spd(const SymmetricMatrix& m, const Matrix& rhs);

/// Factorization with the solve_small_spd pivot rule; shared by the solver
/// and the inference code that also needs the block determinant.
CholeskyFactor cholesky_checked(const SymmetricMatrix& m);

namespace detail {
/// Core of both Sherman-Morrison updates: a_inv + coeff * w w', symmetrized.
/// Callers supply w = A^{-1}u so the matrix-vector product can be shared
/// with the determinant-lemma update.
SymmetricMatrix rank_one_combine(const SymmetricMatrix& a_inv, std::span<const double> w,
                                 double coeff);
} // namespace detail

} // namespace figmn
