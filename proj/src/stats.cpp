#include "sslbench/stats.hpp"

#include <algorithm>
#include <cmath>

namespace sslbench {

Metrics metrics(const ConfusionCounts& c) {
    Metrics m;
    const double tp = static_cast<double>(c.tp);
    m.precision = (c.tp + c.fp) == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fp);
    m.recall = (c.tp + c.fn) == 0 ? 0.0 : tp / static_cast<double>(c.tp + c.fn);
    const double pr = m.precision + m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
    return m;
}

double normal_cdf(double x) {
    // Zelen & Severo constants
    constexpr double p = 0.2316419;
    constexpr double b1 = 0.319381530;
    constexpr double b2 = -0.356563782;
    constexpr double b3 = 1.781477937;
    constexpr double b4 = -1.821255978;
    constexpr double b5 = 1.330274429;
    constexpr double inv_sqrt_2pi = 0.3989422804014327;

    const double ax = std::abs(x);
    const double t = 1.0 / (1.0 + p * ax);
    const double poly = t * (b1 + t * (b2 + t * (b3 + t * (b4 + t * b5))));
    const double tail = inv_sqrt_2pi * std::exp(-0.5 * ax * ax) * poly;
    return x >= 0.0 ? 1.0 - tail : tail;
}

StatTestResult wilcoxon_ranksum(const std::vector<double>& a, const std::vector<double>& b,
                                Tails tails, double alpha) {
    if (a.empty() || b.empty())
        throw Error(Errc::empty_population, "rank-sum test needs nonempty populations");

    const size_t na = a.size();
    const size_t nb = b.size();
    const size_t n = na + nb;

    std::vector<std::pair<double, uint8_t>> pooled; // (value, came-from-a)
    pooled.reserve(n);
    for (double v : a) pooled.emplace_back(v, 1);
    for (double v : b) pooled.emplace_back(v, 0);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });

    // midranks over tie groups, accumulating the tie correction term
    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (size_t g = i; g < j; ++g)
            if (pooled[g].second) rank_sum_a += midrank;
        tie_term += t * t * t - t;
        i = j;
    }

    const double dn = static_cast<double>(n);
    const double mean_w = static_cast<double>(na) * (dn + 1.0) / 2.0;
    const double var_w = (static_cast<double>(na) * static_cast<double>(nb) / 12.0) *
                         ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));

    StatTestResult r;
    r.tails = tails;
    r.alpha = alpha;
    r.pop_size = na;
    r.small_sample = na < 20 || nb < 20;
    if (var_w > 0.0) r.z = (rank_sum_a - mean_w) / std::sqrt(var_w);
    r.p = tails == Tails::two ? 2.0 * normal_cdf(-std::abs(r.z)) : normal_cdf(-r.z);
    r.p = std::min(r.p, 1.0);
    r.effect_size = r.z / std::sqrt(static_cast<double>(r.pop_size));
    r.reject_null = r.p <= alpha;
    return r;
}

double roi(double mu, double budget_total) {
    if (!(budget_total > 0.0))
        throw Error(Errc::config_error, "ROI needs a positive total budget");
    return mu / budget_total;
}

} // namespace sslbench
