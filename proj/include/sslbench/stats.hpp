#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sslbench/errors.hpp"

namespace sslbench {

// positive = malicious
struct ConfusionCounts {
    uint64_t tp = 0;
    uint64_t fp = 0;
    uint64_t tn = 0;
    uint64_t fn = 0;
};

struct Metrics {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2PR/(P+R);
// every 0/0 degenerates to 0.
Metrics metrics(const ConfusionCounts& c);

enum class Tails { one = 1, two = 2 };

struct StatTestResult {
    double z = 0.0;
    double p = 1.0;
    size_t pop_size = 0;       // elements per population (framework compares equal sizes)
    double effect_size = 0.0;  // z / sqrt(pop_size)
    bool reject_null = false;  // p <= alpha
    double alpha = 0.05;
    Tails tails = Tails::two;
    bool small_sample = false; // under 20 per side: normal approximation degrades

    const char* verdict() const { return reject_null ? "reject" : "accept"; }
};

// Standard normal CDF via the Zelen-Severo rational approximation
// (|error| < 7.5e-8), used instead of libm erfc so reported p-values are
// bit-identical across toolchains.
double normal_cdf(double x);

// Rank-sum test on the rank sum of `a`, midranks for ties, tie-corrected
// sigma, no continuity correction. z > 0 means `a` ranks above `b`; the
// one-tailed p tests the hypothesis that `a` exceeds `b`.
StatTestResult wilcoxon_ranksum(const std::vector<double>& a, const std::vector<double>& b,
                                Tails tails = Tails::two, double alpha = 0.05);

// mu / budget_total; budget_total must be > 0.
double roi(double mu, double budget_total);

} // namespace sslbench
