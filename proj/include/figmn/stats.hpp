#pragma once

#include <cstdint>
#include <span>

#include "figmn/linalg.hpp"

namespace figmn {

/// Regularized lower incomplete gamma function P(a, x).
double gamma_p(double a, double x);

/// CDF of the chi-squared distribution with dof degrees of freedom.
double chi2_cdf(int dof, double x);

/// Inverse CDF: returns x with CDF(x) = p. p = 1 maps to +infinity.
/// Throws std::invalid_argument outside [0, 1] or for dof < 1.
double chi2_quantile(int dof, double p);

/// Welford single-pass accumulator for per-dimension mean and variance.
class RunningStats {
public:
    RunningStats() = default;
    explicit RunningStats(int dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

    void update(std::span<const double> x);

    std::int64_t count() const { return count_; }
    int dim() const { return static_cast<int>(mean_.size()); }
    const Vector& mean() const { return mean_; }
    const Vector& m2() const { return m2_; }

    /// Per-dimension sample standard deviation (n-1 denominator; zero when
    /// count == 1), clamped elementwise to floor.
    Vector std(double floor) const;

private:
    std::int64_t count_ = 0;
    Vector mean_;
    Vector m2_;
};

} // namespace figmn
