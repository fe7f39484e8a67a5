#pragma once

#include <span>
#include <vector>

#include "figmn/mixture.hpp"

namespace figmn {

/// Splits the vector dimensions into known inputs and targets to
/// reconstruct. Indices must be disjoint and cover 0..dim-1; targets must
/// be non-empty.
struct SlicePlan {
    std::vector<int> input_indices;
    std::vector<int> target_indices;

    /// The usual classification layout: targets are the trailing block.
    static SlicePlan trailing_targets(int dim, int n_targets);

    void validate(int dim) const;  // throws DimensionError
};

/// The partition of a precision matrix under a SlicePlan: X is the
/// input-input block, W the target-target block, Y the input-target block
/// (its transpose is the Z block of the symmetric matrix).
struct BlockView {
    SymmetricMatrix X;
    Matrix Y;
    SymmetricMatrix W;
};

BlockView split_precision(const SymmetricMatrix& lambda, const SlicePlan& plan);

/// Marginal distribution of the input block, derived from the precision
/// matrix with only a |targets|-sized inversion: the marginal precision is
/// the Schur complement X - Y W^{-1} Y', and the marginal covariance
/// determinant is det(W) * det_c.
struct MarginalParams {
    SymmetricMatrix precision;
    double det_cov = 0.0;
};

MarginalParams marginal_input_params(const GaussianComponent& comp, const SlicePlan& plan);

/// Posterior over components given only the input slice.
Vector conditional_posteriors(const MixtureModel& model, std::span<const double> x_input,
                              const SlicePlan& plan);

/// Posterior-weighted conditional mean of the target slice.
Vector reconstruct(const MixtureModel& model, std::span<const double> x_input,
                   const SlicePlan& plan);

/// Runs reconstruct with the trailing n_classes block as targets and takes
/// the argmax; ties break to the lowest class index. Returns the label and
/// the raw reconstructed scores.
struct Classification {
    int label = 0;
    Vector scores;
};

Classification classify(const MixtureModel& model, std::span<const double> features,
                        int n_classes);

} // namespace figmn
