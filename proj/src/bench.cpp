#include "figmn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "figmn/inference.hpp"
#include "figmn/rng.hpp"

namespace figmn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median3(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

std::vector<Vector> synthetic_data(int n, int dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vector> rows(n, Vector(dim));
    for (auto& row : rows)
        for (double& v : row) v = rng.normal();
    return rows;
}

} // namespace

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) return std::nullopt;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

BenchReport run_bench(const BenchOptions& options) {
    BenchReport report;

    IGMNConfig cfg;
    cfg.delta = 1.0;  // with beta = 0 a single component absorbs the stream
    cfg.beta = 0.0;

    for (int dim : options.dims) {
        const std::vector<Vector> data =
            synthetic_data(options.samples, dim, options.seed ^ static_cast<std::uint64_t>(dim));
        Vector std_vec(dim, 0.0);
        {
            RunningStats stats(dim);
            for (const auto& row : data) stats.update(row);
            std_vec = stats.std(0.0);
        }
        const int n_test = std::min<int>(options.samples, options.max_test_samples);
        const SlicePlan plan = SlicePlan::trailing_targets(dim, 1);

        for (Backend backend : options.backends) {
            cfg.backend = backend;
            std::vector<double> train_times, test_times;
            int k_final = 0;
            for (int rep = 0; rep < options.repetitions; ++rep) {
                MixtureModel model(cfg, dim, std_vec);
                auto t0 = Clock::now();
                for (const auto& row : data) model.learn_one(row);
                train_times.push_back(seconds_since(t0));
                k_final = static_cast<int>(model.size());

                t0 = Clock::now();
                for (int r = 0; r < n_test; ++r) {
                    std::span<const double> features(data[r].data(), dim - 1);
                    volatile double sink = reconstruct(model, features, plan)[0];
                    (void)sink;
                }
                test_times.push_back(seconds_since(t0));
            }
            BenchRecord rec;
            rec.backend = backend;
            rec.dim = dim;
            rec.n = options.samples;
            rec.k_final = k_final;
            rec.train_s = median3(train_times);
            rec.test_s = median3(test_times);
            rec.per_sample_train_us = rec.train_s / options.samples * 1e6;
            rec.per_sample_test_us = rec.test_s / n_test * 1e6;
            rec.test_samples = n_test;
            report.records.push_back(rec);
        }
    }

    for (Backend backend : options.backends) {
        std::vector<double> xs, ys;
        std::set<int> seen;
        for (const auto& rec : report.records) {
            if (rec.backend != backend || seen.count(rec.dim)) continue;
            seen.insert(rec.dim);
            xs.push_back(static_cast<double>(rec.dim));
            ys.push_back(rec.per_sample_train_us);
        }
        auto slope = log_log_slope(xs, ys);
        if (backend == Backend::Fast)
            report.slope_fast = slope;
        else
            report.slope_reference = slope;
    }
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "backend,D,N,K_final,train_s,test_s,per_sample_us\n";
    for (const auto& r : report.records)
        out << to_string(r.backend) << ',' << r.dim << ',' << r.n << ',' << r.k_final << ','
            << r.train_s << ',' << r.test_s << ',' << r.per_sample_train_us << '\n';
    return out.str();
}

std::string bench_table(const BenchReport& report) {
    std::ostringstream out;
    out << "backend      D      N  K  train_s    test_s     train_us/sample\n";
    for (const auto& r : report.records) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-10s %5d %6d %2d %9.4f %9.4f %13.2f\n",
                      to_string(r.backend).c_str(), r.dim, r.n, r.k_final, r.train_s, r.test_s,
                      r.per_sample_train_us);
        out << line;
    }
    if (report.slope_fast)
        out << "fast:      log-log train slope = " << *report.slope_fast << "\n";
    if (report.slope_reference)
        out << "reference: log-log train slope = " << *report.slope_reference << "\n";
    return out.str();
}

} // namespace figmn
