#include "figmn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "figmn/errors.hpp"

namespace figmn {

namespace {

// Mann-Whitney AUC with midranks for ties.
double auc_one_vs_rest(const std::vector<Vector>& scores, const std::vector<int>& labels,
                       int cls) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a][cls] < scores[b][cls];
    });

    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]][cls] == scores[order[i]][cls]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == cls) {
                rank_sum_pos += midrank;
                ++n_pos;
            }
        }
        i = j + 1;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::numeric_limits<double>::quiet_NaN();
    return (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1)) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

} // namespace

WeightedAUC auc_weighted(const std::vector<Vector>& scores, const std::vector<int>& labels,
                         int n_classes) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("auc_weighted: scores and labels disagree");
    for (const auto& row : scores)
        if (static_cast<int>(row.size()) != n_classes)
            throw DimensionError("auc_weighted: score row width != n_classes");

    std::vector<std::size_t> counts(n_classes, 0);
    for (int l : labels) {
        if (l < 0 || l >= n_classes) throw std::invalid_argument("label out of range");
        ++counts[l];
    }

    WeightedAUC out;
    out.per_class.assign(n_classes, std::numeric_limits<double>::quiet_NaN());
    double weight_total = 0.0;
    double acc = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        const double auc = auc_one_vs_rest(scores, labels, c);
        out.per_class[c] = auc;
        if (std::isnan(auc)) {
            ++out.skipped_classes;
            continue;
        }
        const double w = static_cast<double>(counts[c]);
        acc += w * auc;
        weight_total += w;
    }
    if (out.skipped_classes > 0)
        std::cerr << "warning: " << out.skipped_classes
                  << " class(es) had no positives or no negatives and were excluded from the "
                     "weighted AUC\n";
    if (weight_total == 0.0)
        throw UndefinedAUC("AUC is undefined for every class");
    out.value = acc / weight_total;
    return out;
}

double accuracy(const std::vector<Vector>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw std::invalid_argument("accuracy: scores and labels disagree");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < scores.size(); ++r) {
        int best = 0;
        for (std::size_t c = 1; c < scores[r].size(); ++c)
            if (scores[r][c] > scores[r][best]) best = static_cast<int>(c);
        if (best == labels[r]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(scores.size());
}

} // namespace figmn
