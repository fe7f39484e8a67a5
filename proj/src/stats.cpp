#include "figmn/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "figmn/errors.hpp"

namespace figmn {

namespace {

// Series expansion of P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x); for x >= a + 1. Modified
// Lentz evaluation.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw std::invalid_argument("gamma_p requires x >= 0 and a > 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(int dof, double x) {
    if (dof < 1) throw std::invalid_argument("chi2_cdf requires dof >= 1");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(int dof, double p) {
    if (dof < 1) throw std::invalid_argument("chi2_quantile requires dof >= 1");
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("chi2_quantile requires p in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    // Bracket, then bisect on the forward CDF.
    double lo = 0.0;
    double hi = dof + 10.0;
    while (chi2_cdf(dof, hi) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(dof, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return 0.5 * (lo + hi);
}

void RunningStats::update(std::span<const double> x) {
    if (count_ == 0 && mean_.empty()) {
        mean_.assign(x.size(), 0.0);
        m2_.assign(x.size(), 0.0);
    }
    if (x.size() != mean_.size())
        throw DimensionError("RunningStats dimension mismatch");
    ++count_;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = x[i] - mean_[i];
        mean_[i] += delta / static_cast<double>(count_);
        m2_[i] += delta * (x[i] - mean_[i]);
    }
}

Vector RunningStats::std(double floor) const {
    if (count_ < 1)
        throw std::logic_error("RunningStats::std requires at least one sample");
    Vector out(mean_.size());
    for (std::size_t i = 0; i < mean_.size(); ++i) {
        double v = count_ > 1 ? m2_[i] / static_cast<double>(count_ - 1) : 0.0;
        out[i] = std::max(std::sqrt(std::max(v, 0.0)), floor);
    }
    return out;
}

} // namespace figmn
