#pragma once

#include <cstdint>
#include <vector>

#include "figmn/dataset.hpp"
#include "figmn/metrics.hpp"
#include "figmn/mixture.hpp"

namespace figmn {

struct XvalOptions {
    int folds = 2;
    std::uint64_t seed = 42;
    std::vector<double> deltas = {0.01, 0.1, 1.0};
    IGMNConfig base;          // delta is overridden per grid candidate
    bool standardize_data = false;
};

struct DeltaResult {
    double delta = 0.0;
    std::vector<EvalResult> per_fold;
    EvalResult mean;
};

struct XvalReport {
    std::vector<DeltaResult> per_delta;
    int best_index = 0;  // argmax mean weighted AUC; ties go to the smaller delta
};

/// Trains one model per fold (stream in file order, test-fold rows skipped)
/// and evaluates weighted AUC and accuracy on the held-out fold.
DeltaResult run_xval(const Dataset& ds, const IGMNConfig& cfg, int folds, std::uint64_t seed);

/// Runs run_xval for every delta candidate and selects the best.
XvalReport grid_search_delta(const Dataset& ds, const XvalOptions& options);

} // namespace figmn
