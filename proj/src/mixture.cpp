#include "figmn/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "figmn/errors.hpp"

namespace figmn {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;
const double kInf = std::numeric_limits<double>::infinity();

// High-dimensional determinants can underflow; flooring keeps the
// log-likelihood finite without touching any realistically sized model.
double floored(double v) { return std::max(v, std::numeric_limits<double>::min()); }
} // namespace

std::string to_string(Backend b) { return b == Backend::Fast ? "fast" : "reference"; }
std::string to_string(DegeneratePolicy p) {
    return p == DegeneratePolicy::Clamp ? "clamp" : "error";
}

Backend backend_from_string(const std::string& s) {
    if (s == "fast") return Backend::Fast;
    if (s == "reference") return Backend::Reference;
    throw std::invalid_argument("unknown backend '" + s + "' (expected fast or reference)");
}

DegeneratePolicy policy_from_string(const std::string& s) {
    if (s == "clamp") return DegeneratePolicy::Clamp;
    if (s == "error") return DegeneratePolicy::Error;
    throw std::invalid_argument("unknown degenerate policy '" + s + "' (expected clamp or error)");
}

void IGMNConfig::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in [0, 1]");
    if (!(v_min > 0.0)) throw std::invalid_argument("v_min must be positive");
    if (!(sp_min > 0.0)) throw std::invalid_argument("sp_min must be positive");
    if (!(std_floor > 0.0)) throw std::invalid_argument("std_floor must be positive");
}

MixtureModel::MixtureModel(IGMNConfig cfg, int dim)
    : cfg_(cfg), dim_(dim), running_(dim) {
    cfg_.validate();
    if (dim_ < 1) throw DimensionError("dimension must be at least 1");
    chi2_thresh_ = cfg_.beta == 0.0 ? kInf : chi2_quantile(dim_, 1.0 - cfg_.beta);
}

MixtureModel::MixtureModel(IGMNConfig cfg, int dim, const Vector& dataset_std)
    : MixtureModel(cfg, dim) {
    if (static_cast<int>(dataset_std.size()) != dim_)
        throw DimensionError("dataset std dimension mismatch");
    sigma_ini_ = make_sigma(dataset_std);
}

Vector MixtureModel::make_sigma(const Vector& dataset_std) const {
    Vector sigma(dataset_std.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        sigma[i] = cfg_.delta * std::max(dataset_std[i], cfg_.std_floor);
    return sigma;
}

MixtureModel MixtureModel::restore(IGMNConfig cfg, int dim, Vector sigma_ini,
                                   std::vector<GaussianComponent> components,
                                   std::int64_t points_seen) {
    MixtureModel m(cfg, dim);
    if (!sigma_ini.empty() && static_cast<int>(sigma_ini.size()) != dim)
        throw DimensionError("sigma_ini dimension mismatch");
    m.sigma_ini_ = std::move(sigma_ini);
    for (auto& c : components) {
        if (static_cast<int>(c.mu.size()) != dim)
            throw DimensionError("component dimension mismatch");
        if (cfg.backend == Backend::Reference) {
            auto f = cholesky(c.cov);
            if (!f) throw DegenerateUpdate("restored covariance is not positive definite");
            c.cov_chol = *f;
        }
    }
    m.comps_ = std::move(components);
    m.points_seen_ = points_seen;
    return m;
}

void MixtureModel::check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw DimensionError("input dimension mismatch: expected " + std::to_string(dim_) +
                             ", got " + std::to_string(x.size()));
    for (double v : x)
        if (!std::isfinite(v)) throw DimensionError("input contains a non-finite value");
}

double MixtureModel::prior(std::size_t j) const {
    double total = 0.0;
    for (const auto& c : comps_) total += c.sp;
    return comps_.at(j).sp / total;
}

Vector MixtureModel::sq_distances(std::span<const double> x) const {
    check_point(x);
    Vector d2(comps_.size());
    Vector e(dim_);
    for (std::size_t j = 0; j < comps_.size(); ++j) {
        const auto& c = comps_[j];
        if (cfg_.backend == Backend::Fast) {
            d2[j] = mahalanobis_sq(x, c.mu, c.lambda);
        } else {
            for (int i = 0; i < dim_; ++i) e[i] = x[i] - c.mu[i];
            d2[j] = c.cov_chol.quad_inverse(e);
        }
    }
    return d2;
}

double MixtureModel::component_likelihood(std::span<const double> x, std::size_t j) const {
    check_point(x);
    const auto& c = comps_.at(j);
    double d2;
    if (cfg_.backend == Backend::Fast) {
        d2 = mahalanobis_sq(x, c.mu, c.lambda);
    } else {
        Vector e(dim_);
        for (int i = 0; i < dim_; ++i) e[i] = x[i] - c.mu[i];
        d2 = c.cov_chol.quad_inverse(e);
    }
    return std::exp(-0.5 * (dim_ * kLog2Pi + std::log(c.det_c) + d2));
}

Vector MixtureModel::posteriors_from(const Vector& d2) const {
    // Log space with a max shift; direct evaluation of the density
    // underflows long before the dimensionalities this code targets.
    Vector lp(comps_.size());
    double m = -kInf;
    for (std::size_t j = 0; j < comps_.size(); ++j) {
        lp[j] = -0.5 * (dim_ * kLog2Pi + std::log(comps_[j].det_c) + d2[j]) +
                std::log(comps_[j].sp);
        if (lp[j] > m) m = lp[j];
    }
    Vector post(comps_.size());
    if (!std::isfinite(m)) {
        // Every density vanished; fall back to the priors.
        double total = 0.0;
        for (const auto& c : comps_) total += c.sp;
        for (std::size_t j = 0; j < comps_.size(); ++j) post[j] = comps_[j].sp / total;
        return post;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < comps_.size(); ++j) {
        post[j] = std::exp(lp[j] - m);
        total += post[j];
    }
    for (double& p : post) p /= total;
    return post;
}

Vector MixtureModel::posteriors(std::span<const double> x) const {
    if (comps_.empty()) throw std::logic_error("posteriors on an empty model");
    return posteriors_from(sq_distances(x));
}

bool MixtureModel::accepts(std::span<const double> x) const {
    if (comps_.empty()) return false;
    Vector d2 = sq_distances(x);
    return *std::min_element(d2.begin(), d2.end()) < chi2_thresh_;
}

void MixtureModel::update_fast(GaussianComponent& c, std::span<const double> x, double p) {
    c.v += 1.0;
    c.sp += p;
    if (p == 0.0) return;  // exact no-op on mean, precision and determinant

    const double omega = p / c.sp;  // sp >= 1 before the update, so omega <= 1/2
    Vector e(dim_), dmu(dim_), estar(dim_);
    for (int i = 0; i < dim_; ++i) {
        e[i] = x[i] - c.mu[i];
        dmu[i] = omega * e[i];
        c.mu[i] += dmu[i];
        estar[i] = x[i] - c.mu[i];
    }

    const double one_m = 1.0 - omega;
    const double ratio = omega / one_m;

    // Adding step. The quadratic form is shared between the determinant
    // update and the denominator of the precision update.
    Vector w = c.lambda.apply(estar);
    double q = 0.0;
    for (int i = 0; i < dim_; ++i) q += estar[i] * w[i];

    const double bracket = 1.0 + ratio * q;
    const double det_bar = std::pow(one_m, dim_) * c.det_c * bracket;

    SymmetricMatrix lam_bar = c.lambda.scaled(1.0 / one_m);
    lam_bar.add_scaled_outer(w, -(omega / (one_m * one_m)) / bracket);
    lam_bar.symmetrize();

    // Subtracting step, again with one shared scalar.
    Vector w2 = lam_bar.apply(dmu);
    double q2 = 0.0;
    for (int i = 0; i < dim_; ++i) q2 += dmu[i] * w2[i];

    const double factor = 1.0 - q2;
    if (factor < kDegenerateEps) {
        if (cfg_.degenerate_policy == DegeneratePolicy::Error)
            throw DegenerateUpdate("covariance update became degenerate (factor " +
                                   std::to_string(factor) + ")");
        // Scale the subtracted term down until the determinant factor is
        // exactly kDegenerateEps, so the precision and the determinant keep
        // describing the same matrix.
        const double s2 = (1.0 - kDegenerateEps) / q2;
        c.lambda = lam_bar;
        c.lambda.add_scaled_outer(w2, s2 / kDegenerateEps);
        c.lambda.symmetrize();
        c.det_c = floored(det_bar * kDegenerateEps);
        ++degenerate_events_;
        return;
    }
    c.lambda = lam_bar;
    c.lambda.add_scaled_outer(w2, 1.0 / factor);
    c.lambda.symmetrize();
    c.det_c = floored(det_bar * factor);
}

void MixtureModel::update_reference(GaussianComponent& c, std::span<const double> x, double p) {
    c.v += 1.0;
    c.sp += p;
    if (p == 0.0) return;

    const double omega = p / c.sp;
    Vector e(dim_), dmu(dim_), estar(dim_);
    for (int i = 0; i < dim_; ++i) {
        e[i] = x[i] - c.mu[i];
        dmu[i] = omega * e[i];
        c.mu[i] += dmu[i];
        estar[i] = x[i] - c.mu[i];
    }

    const double one_m = 1.0 - omega;
    // Expected intermediate determinant; only used to recognize a collapsed
    // subtraction step. The factor uses the previous Cholesky factor.
    const double q = c.cov_chol.quad_inverse(estar);
    const double det_bar = std::pow(one_m, dim_) * c.det_c * (1.0 + (omega / one_m) * q);

    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            c.cov(i, j) = one_m * c.cov(i, j) + omega * estar[i] * estar[j] - dmu[i] * dmu[j];

    auto f = cholesky(c.cov);
    const bool degenerate = !f || f->det() < kDegenerateEps * det_bar;
    if (degenerate) {
        if (cfg_.degenerate_policy == DegeneratePolicy::Error)
            throw DegenerateUpdate("covariance update became degenerate");
        // Undo the subtraction, then apply the scaled-down version the fast
        // backend uses, so both backends land on the same matrix.
        c.cov.add_scaled_outer(dmu, 1.0);
        auto f_bar = cholesky(c.cov);
        if (!f_bar) throw DegenerateUpdate("intermediate covariance lost positive-definiteness");
        const double q2 = f_bar->quad_inverse(dmu);
        const double s2 = (1.0 - kDegenerateEps) / q2;
        c.cov.add_scaled_outer(dmu, -s2);
        f = cholesky(c.cov);
        if (!f) throw DegenerateUpdate("clamped covariance lost positive-definiteness");
        c.det_c = floored(det_bar * kDegenerateEps);
        c.cov_chol = *f;
        ++degenerate_events_;
        return;
    }
    c.det_c = floored(f->det());
    c.cov_chol = *f;
}

void MixtureModel::update_all_impl(std::span<const double> x, const Vector& post) {
    for (std::size_t j = 0; j < comps_.size(); ++j) {
        if (cfg_.backend == Backend::Fast)
            update_fast(comps_[j], x, post[j]);
        else
            update_reference(comps_[j], x, post[j]);
    }
}

void MixtureModel::update_all(std::span<const double> x) {
    if (comps_.empty()) throw std::logic_error("update_all on an empty model");
    update_all_impl(x, posteriors(x));
}

void MixtureModel::create_component(std::span<const double> x) {
    check_point(x);
    if (sigma_ini_.empty())
        sigma_ini_ = make_sigma(running_.std(cfg_.std_floor));

    GaussianComponent c;
    c.mu.assign(x.begin(), x.end());
    c.sp = 1.0;
    c.v = 1.0;
    double det = 1.0;
    Vector var(dim_);
    for (int i = 0; i < dim_; ++i) {
        var[i] = sigma_ini_[i] * sigma_ini_[i];
        det *= var[i];
    }
    c.det_c = floored(det);
    if (cfg_.backend == Backend::Fast) {
        Vector inv_var(dim_);
        for (int i = 0; i < dim_; ++i) inv_var[i] = 1.0 / var[i];
        c.lambda = SymmetricMatrix::from_diagonal(inv_var);
    } else {
        c.cov = SymmetricMatrix::from_diagonal(var);
        c.cov_chol = *cholesky(c.cov);
    }
    comps_.push_back(std::move(c));
}

std::vector<std::size_t> MixtureModel::prune() {
    std::vector<std::size_t> removed;
    for (std::size_t j = 0; j < comps_.size(); ++j)
        if (comps_[j].v > cfg_.v_min && comps_[j].sp < cfg_.sp_min) removed.push_back(j);
    if (removed.size() == comps_.size() && !comps_.empty())
        removed.erase(removed.begin());  // never remove the last component
    for (auto it = removed.rbegin(); it != removed.rend(); ++it)
        comps_.erase(comps_.begin() + static_cast<std::ptrdiff_t>(*it));
    return removed;
}

void MixtureModel::learn_one(std::span<const double> x) {
    check_point(x);
    if (sigma_ini_.empty()) running_.update(x);
    if (comps_.empty()) {
        create_component(x);
    } else {
        Vector d2 = sq_distances(x);
        if (*std::min_element(d2.begin(), d2.end()) < chi2_thresh_)
            update_all_impl(x, posteriors_from(d2));
        else
            create_component(x);
    }
    prune();
    ++points_seen_;
}

} // namespace figmn
