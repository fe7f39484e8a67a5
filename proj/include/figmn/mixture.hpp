#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "figmn/linalg.hpp"
#include "figmn/stats.hpp"

namespace figmn {

enum class Backend { Reference, Fast };
enum class DegeneratePolicy { Error, Clamp };

std::string to_string(Backend b);
std::string to_string(DegeneratePolicy p);
Backend backend_from_string(const std::string& s);
DegeneratePolicy policy_from_string(const std::string& s);

struct IGMNConfig {
    double delta = 0.01;       // scaling factor for the initial std
    double beta = 0.1;         // novelty parameter; 0 disables creation after the first component
    double v_min = 5.0;        // age before a component can be pruned
    double sp_min = 3.0;       // accumulator a component must reach to survive
    double std_floor = 1e-6;   // lower bound on per-dimension std estimates
    Backend backend = Backend::Fast;
    DegeneratePolicy degenerate_policy = DegeneratePolicy::Clamp;

    void validate() const;  // throws std::invalid_argument
};

/// One mixture component. The fast backend keeps the precision matrix, the
/// reference backend keeps the covariance plus its current Cholesky factor;
/// both carry the covariance determinant.
struct GaussianComponent {
    Vector mu;
    SymmetricMatrix lambda;    // precision (fast backend only)
    SymmetricMatrix cov;       // covariance (reference backend only)
    CholeskyFactor cov_chol;   // factor of cov, refreshed on every update
    double det_c = 0.0;
    double sp = 0.0;
    double v = 0.0;
};

class MixtureModel {
public:
    /// Stream mode: the initial std is estimated from the points seen so
    /// far and frozen when the first component is created.
    MixtureModel(IGMNConfig cfg, int dim);

    /// Batch mode: dataset_std holds the per-dimension standard deviation
    /// of the training data; sigma_ini = delta * max(std, std_floor).
    MixtureModel(IGMNConfig cfg, int dim, const Vector& dataset_std);

    /// Rebuilds a model from serialized state.
    static MixtureModel restore(IGMNConfig cfg, int dim, Vector sigma_ini,
                                std::vector<GaussianComponent> components,
                                std::int64_t points_seen);

    int dim() const { return dim_; }
    const IGMNConfig& config() const { return cfg_; }
    std::size_t size() const { return comps_.size(); }
    const std::vector<GaussianComponent>& components() const { return comps_; }
    const GaussianComponent& component(std::size_t j) const { return comps_.at(j); }
    const Vector& sigma_ini() const { return sigma_ini_; }
    std::int64_t points_seen() const { return points_seen_; }
    std::int64_t degenerate_events() const { return degenerate_events_; }
    double chi2_threshold() const { return chi2_thresh_; }

    double prior(std::size_t j) const;
    double component_likelihood(std::span<const double> x, std::size_t j) const;
    Vector posteriors(std::span<const double> x) const;
    bool accepts(std::span<const double> x) const;

    /// Processes one point: update or create, then prune. The point itself
    /// is never retained.
    void learn_one(std::span<const double> x);

    void update_all(std::span<const double> x);
    void create_component(std::span<const double> x);
    std::vector<std::size_t> prune();

    /// Squared Mahalanobis distance of x to every component.
    Vector sq_distances(std::span<const double> x) const;

private:
    void check_point(std::span<const double> x) const;
    Vector posteriors_from(const Vector& d2) const;
    void update_all_impl(std::span<const double> x, const Vector& post);
    void update_fast(GaussianComponent& c, std::span<const double> x, double p);
    void update_reference(GaussianComponent& c, std::span<const double> x, double p);
    Vector make_sigma(const Vector& dataset_std) const;

    IGMNConfig cfg_;
    int dim_ = 0;
    double chi2_thresh_ = 0.0;
    Vector sigma_ini_;            // empty until frozen in stream mode
    RunningStats running_;        // stream-mode std estimation
    std::vector<GaussianComponent> comps_;
    std::int64_t points_seen_ = 0;
    std::int64_t degenerate_events_ = 0;
};

} // namespace figmn
