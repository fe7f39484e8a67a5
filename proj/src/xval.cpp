#include "figmn/xval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "figmn/inference.hpp"

namespace figmn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

EvalResult mean_result(const std::vector<EvalResult>& folds, int n_classes) {
    EvalResult m;
    m.per_class_auc.assign(n_classes, 0.0);
    std::vector<int> defined(n_classes, 0);
    for (const auto& f : folds) {
        m.weighted_auc += f.weighted_auc;
        m.accuracy += f.accuracy;
        m.train_seconds += f.train_seconds;
        m.test_seconds += f.test_seconds;
        m.k_final += f.k_final;
        for (int c = 0; c < n_classes; ++c) {
            if (!std::isnan(f.per_class_auc[c])) {
                m.per_class_auc[c] += f.per_class_auc[c];
                ++defined[c];
            }
        }
    }
    const double n = static_cast<double>(folds.size());
    m.weighted_auc /= n;
    m.accuracy /= n;
    m.train_seconds /= n;
    m.test_seconds /= n;
    m.k_final /= n;
    for (int c = 0; c < n_classes; ++c) {
        if (defined[c] > 0)
            m.per_class_auc[c] /= defined[c];
        else
            m.per_class_auc[c] = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

} // namespace

DeltaResult run_xval(const Dataset& ds, const IGMNConfig& cfg, int folds, std::uint64_t seed) {
    Dataset data = ds;
    // (copy so --standardize never mutates the caller's dataset)
    const FoldSplit split = stratified_folds(data, folds, seed);
    const EncodedDataset enc = encode_for_igmn(data);
    const int dim = static_cast<int>(enc.rows.front().size());
    const int n_classes = data.n_classes();

    DeltaResult result;
    result.delta = cfg.delta;
    for (int fold = 0; fold < folds; ++fold) {
        std::vector<const Vector*> train_rows;
        std::vector<std::size_t> test_rows;
        for (std::size_t r = 0; r < enc.rows.size(); ++r) {
            if (split.fold_of_row[r] == fold)
                test_rows.push_back(r);
            else
                train_rows.push_back(&enc.rows[r]);
        }
        if (train_rows.empty() || test_rows.empty())
            throw std::invalid_argument("fold split left an empty train or test set");

        Vector std_vec(dim, 0.0);
        {
            RunningStats stats(dim);
            for (const Vector* row : train_rows) stats.update(*row);
            std_vec = stats.std(0.0);
        }
        MixtureModel model(cfg, dim, std_vec);

        auto t0 = Clock::now();
        for (const Vector* row : train_rows) model.learn_one(*row);
        const double train_s = seconds_since(t0);

        std::vector<Vector> scores;
        std::vector<int> labels;
        scores.reserve(test_rows.size());
        t0 = Clock::now();
        for (std::size_t r : test_rows) {
            std::span<const double> features(enc.rows[r].data(),
                                             enc.rows[r].size() - n_classes);
            scores.push_back(classify(model, features, n_classes).scores);
        }
        const double test_s = seconds_since(t0);
        for (std::size_t r : test_rows) labels.push_back(data.labels[r]);

        EvalResult er;
        const WeightedAUC auc = auc_weighted(scores, labels, n_classes);
        er.per_class_auc = auc.per_class;
        er.weighted_auc = auc.value;
        er.accuracy = accuracy(scores, labels);
        er.train_seconds = train_s;
        er.test_seconds = test_s;
        er.k_final = static_cast<double>(model.size());
        result.per_fold.push_back(std::move(er));
    }
    result.mean = mean_result(result.per_fold, n_classes);
    return result;
}

XvalReport grid_search_delta(const Dataset& ds, const XvalOptions& options) {
    if (options.deltas.empty())
        throw std::invalid_argument("the delta grid must not be empty");
    Dataset data = ds;
    if (options.standardize_data) standardize(data);

    std::vector<double> deltas = options.deltas;
    std::sort(deltas.begin(), deltas.end());  // ties then resolve to the smallest delta

    XvalReport report;
    for (double delta : deltas) {
        IGMNConfig cfg = options.base;
        cfg.delta = delta;
        report.per_delta.push_back(run_xval(data, cfg, options.folds, options.seed));
    }
    report.best_index = 0;
    for (std::size_t i = 1; i < report.per_delta.size(); ++i)
        if (report.per_delta[i].mean.weighted_auc >
            report.per_delta[report.best_index].mean.weighted_auc)
            report.best_index = static_cast<int>(i);
    return report;
}

} // namespace figmn
