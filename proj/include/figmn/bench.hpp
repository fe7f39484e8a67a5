#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "figmn/mixture.hpp"

namespace figmn {

struct BenchRecord {
    Backend backend = Backend::Fast;
    int dim = 0;
    int n = 0;
    int k_final = 0;
    double train_s = 0.0;
    double test_s = 0.0;
    double per_sample_train_us = 0.0;
    double per_sample_test_us = 0.0;
    int test_samples = 0;
};

struct BenchReport {
    std::vector<BenchRecord> records;
    // Log-log slope of per-sample train time vs D, per backend; present
    // only with >= 3 distinct dimensions.
    std::optional<double> slope_fast;
    std::optional<double> slope_reference;
};

struct BenchOptions {
    std::vector<int> dims = {32, 64, 128, 256, 512};
    int samples = 2000;
    std::vector<Backend> backends = {Backend::Fast, Backend::Reference};
    std::uint64_t seed = 42;
    int repetitions = 3;       // median-of-k timing
    int max_test_samples = 256;
};

/// Trains one component (delta = 1, beta = 0) on i.i.d. standard normal
/// data per dimension and times the learn and inference loops with a
/// monotonic clock. Inference reconstructs the last dimension from the
/// rest (o = 1).
BenchReport run_bench(const BenchOptions& options);

/// The CSV the bench command writes: header
/// backend,D,N,K_final,train_s,test_s,per_sample_us
std::string bench_csv(const BenchReport& report);

/// Human-readable table plus fitted slopes.
std::string bench_table(const BenchReport& report);

/// Least-squares slope of log(y) against log(x).
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace figmn
