#pragma once

#include <vector>

#include "figmn/linalg.hpp"

namespace figmn {

/// One-vs-rest AUC per class via the midrank statistic, weighted by class
/// prevalence. Classes with no positives or no negatives are excluded from
/// the weighted average (their per_class entry is NaN). Throws UndefinedAUC
/// when fewer than two classes have defined AUCs... see auc_weighted.
struct WeightedAUC {
    double value = 0.0;
    std::vector<double> per_class;   // NaN where undefined
    int skipped_classes = 0;
};

/// scores: one row per instance, one column per class (raw, any monotone
/// scale); labels: class index per instance.
WeightedAUC auc_weighted(const std::vector<Vector>& scores, const std::vector<int>& labels,
                         int n_classes);

/// Fraction of rows whose argmax column (low-index ties) equals the label.
double accuracy(const std::vector<Vector>& scores, const std::vector<int>& labels);

/// Evaluation summary of one fold (or the mean over folds).
struct EvalResult {
    std::vector<double> per_class_auc;
    double weighted_auc = 0.0;
    double accuracy = 0.0;
    double train_seconds = 0.0;
    double test_seconds = 0.0;
    double k_final = 0.0;
};

} // namespace figmn
