#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sslbench/engine.hpp"
#include "sslbench/report.hpp"
#include "sslbench/rng.hpp"
#include "sslbench/stats.hpp"
#include "wilcoxon_oracle.hpp"

using namespace sslbench;
using testutil::exact_ranksum_p;

namespace {

RunRecord record(const std::string& method, double f1, int n_index, double budget = 100.0) {
    RunRecord r;
    r.method = method;
    r.f1 = f1;
    r.n_index = n_index;
    r.budget = budget;
    r.scenario = "balanced";
    return r;
}

CampaignConfig benefit_cfg() {
    CampaignConfig cfg;
    cfg.benefit_gap_delta = 0.05;
    return cfg;
}

} // namespace

TEST_CASE("metrics on the canonical confusion examples") {
    Metrics m = metrics({10, 0, 0, 0});
    CHECK(m.f1 == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);

    m = metrics({0, 0, 0, 5});
    CHECK(m.f1 == 0.0);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);

    m = metrics({50, 10, 0, 10});
    CHECK(m.precision == doctest::Approx(50.0 / 60.0));
    CHECK(m.recall == doctest::Approx(50.0 / 60.0));
    CHECK(m.f1 == doctest::Approx(0.833333333));
}

TEST_CASE("metrics agree with a brute-force counting oracle") {
    for (uint64_t trial = 0; trial < 1000; ++trial) {
        RandomStream rng(derive_seed(31337, {trial}));
        // build truth/prediction pairs, then count the confusion cells
        const size_t n = rng.below(60); // includes empty and degenerate splits
        std::vector<int> truth(n), pred(n);
        for (size_t i = 0; i < n; ++i) {
            truth[i] = static_cast<int>(rng.below(2));
            pred[i] = static_cast<int>(rng.below(2));
        }
        ConfusionCounts c;
        for (size_t i = 0; i < n; ++i) {
            if (truth[i] == 1 && pred[i] == 1) ++c.tp;
            if (truth[i] == 0 && pred[i] == 1) ++c.fp;
            if (truth[i] == 0 && pred[i] == 0) ++c.tn;
            if (truth[i] == 1 && pred[i] == 0) ++c.fn;
        }
        const Metrics m = metrics(c);
        const double expect_p =
            (c.tp + c.fp) == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
        const double expect_r =
            (c.tp + c.fn) == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
        const double expect_f =
            expect_p + expect_r == 0.0 ? 0.0 : 2.0 * expect_p * expect_r / (expect_p + expect_r);
        REQUIRE(m.precision == expect_p);
        REQUIRE(m.recall == expect_r);
        REQUIRE(m.f1 == expect_f);
        if (m.precision > 0.0 && m.recall > 0.0) {
            const double harmonic = 2.0 / (1.0 / m.precision + 1.0 / m.recall);
            REQUIRE(m.f1 == doctest::Approx(harmonic).epsilon(1e-12));
        }
    }
}

TEST_CASE("normal cdf approximation hits the reference points") {
    CHECK(std::abs(normal_cdf(0.0) - 0.5) < 1e-7);
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-5));
    CHECK(normal_cdf(-1.96) == doctest::Approx(0.0249979).epsilon(1e-4));
    CHECK(normal_cdf(3.0) == doctest::Approx(0.9986501).epsilon(1e-6));
    for (double x : {-2.5, -0.7, 0.3, 1.1, 4.0})
        CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical populations give z=0, p=1") {
    const std::vector<double> a{0.4, 0.5, 0.6, 0.5};
    const StatTestResult r = wilcoxon_ranksum(a, a);
    CHECK(r.z == 0.0);
    CHECK(r.p == 1.0);
    CHECK_FALSE(r.reject_null);
}

TEST_CASE("three-versus-three separated case matches the exact enumeration") {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    const StatTestResult r = wilcoxon_ranksum(a, b);
    CHECK(r.z == doctest::Approx(-1.963961).epsilon(1e-5));
    CHECK(r.p == doctest::Approx(0.049533).epsilon(1e-3));
    const double exact = exact_ranksum_p(a, b);
    CHECK(exact == doctest::Approx(0.05));
    CHECK(std::abs(r.p - exact) <= 0.02);
}

TEST_CASE("tie-corrected variance on a hand-checked case") {
    const std::vector<double> a{1, 2, 2}, b{2, 3, 4};
    const StatTestResult r = wilcoxon_ranksum(a, b);
    CHECK(r.z == doctest::Approx(-1.62309).epsilon(2e-4));
    CHECK(r.p == doctest::Approx(0.10457).epsilon(5e-3));
}

TEST_CASE("normal approximation tracks the exact permutation p") {
    for (uint64_t trial = 0; trial < 60; ++trial) {
        RandomStream rng(derive_seed(777, {trial}));
        const size_t na = 8 + rng.below(5), nb = 8 + rng.below(5);
        const double shift = rng.next_double() * 2.0 - 0.5;
        std::vector<double> a, b;
        for (size_t i = 0; i < na; ++i) a.push_back(rng.next_normal());
        for (size_t i = 0; i < nb; ++i) b.push_back(rng.next_normal() + shift);

        const StatTestResult r = wilcoxon_ranksum(a, b);
        const double exact = exact_ranksum_p(a, b);
        REQUIRE(std::abs(r.p - exact) <= 0.02);
    }
}

TEST_CASE("antisymmetry under population swap") {
    RandomStream rng(4242);
    std::vector<double> a, b;
    for (int i = 0; i < 15; ++i) a.push_back(rng.next_normal());
    for (int i = 0; i < 15; ++i) b.push_back(rng.next_normal() + 0.4);
    const StatTestResult ab = wilcoxon_ranksum(a, b);
    const StatTestResult ba = wilcoxon_ranksum(b, a);
    CHECK(ab.z == doctest::Approx(-ba.z).epsilon(1e-12));
    CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
}

TEST_CASE("a large shift drives two-tailed p toward zero") {
    RandomStream rng(9);
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) {
        const double v = rng.next_normal();
        a.push_back(v + 1000.0);
        b.push_back(rng.next_normal());
    }
    const StatTestResult r = wilcoxon_ranksum(a, b);
    CHECK(r.p < 1e-9);
    CHECK(r.reject_null);
    CHECK(r.z > 0.0); // first population ranks above
}

TEST_CASE("jointly monotone transforms leave z unchanged") {
    RandomStream rng(12);
    std::vector<double> a, b;
    for (int i = 0; i < 12; ++i) a.push_back(rng.next_double());
    for (int i = 0; i < 14; ++i) b.push_back(rng.next_double() + 0.2);

    auto transform = [](std::vector<double> v) {
        for (double& x : v) x = std::exp(3.0 * x) - 7.0;
        return v;
    };
    const StatTestResult plain = wilcoxon_ranksum(a, b);
    const StatTestResult warped = wilcoxon_ranksum(transform(a), transform(b));
    CHECK(plain.z == warped.z);
    CHECK(plain.p == warped.p);
}

TEST_CASE("one-tailed direction tests 'first exceeds second'") {
    std::vector<double> high{5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> low{1, 2, 3, 4, 4.5, 3.5, 2.5, 1.5};
    const StatTestResult forward = wilcoxon_ranksum(high, low, Tails::one);
    CHECK(forward.p < 0.01);
    const StatTestResult backward = wilcoxon_ranksum(low, high, Tails::one);
    CHECK(backward.p > 0.99);
}

TEST_CASE("empty populations are rejected") {
    CHECK_THROWS_AS(wilcoxon_ranksum({}, {1.0}), Error);
    CHECK_THROWS_AS(wilcoxon_ranksum({1.0}, {}), Error);
}

TEST_CASE("small populations are flagged") {
    RandomStream rng(3);
    std::vector<double> a, b;
    for (int i = 0; i < 25; ++i) {
        a.push_back(rng.next_normal());
        b.push_back(rng.next_normal());
    }
    CHECK_FALSE(wilcoxon_ranksum(a, b).small_sample);
    a.resize(19);
    CHECK(wilcoxon_ranksum(a, b).small_sample);
}

TEST_CASE("effect size arithmetic") {
    std::vector<double> a, b;
    RandomStream rng(1);
    for (int i = 0; i < 396; ++i) {
        a.push_back(rng.next_normal());
        b.push_back(rng.next_normal());
    }
    const StatTestResult r = wilcoxon_ranksum(a, b);
    CHECK(r.pop_size == 396);
    CHECK(r.effect_size == doctest::Approx(r.z / std::sqrt(396.0)).epsilon(1e-12));
    // the reference magnitude: z=4.310 over a population of 396
    CHECK(4.310 / std::sqrt(396.0) == doctest::Approx(0.2166).epsilon(5e-4));
}

TEST_CASE("roi arithmetic and monotonicity") {
    CHECK(roi(0.8, 400.0) == doctest::Approx(0.002));
    CHECK(roi(0.0, 10.0) == 0.0);
    CHECK(roi(0.5, 100.0) > roi(0.5, 200.0));
    CHECK_THROWS_AS(roi(0.5, 0.0), Error);
}

TEST_CASE("compare_methods verdicts") {
    std::vector<RunRecord> records;
    for (int i = 0; i < 20; ++i) {
        const double wiggle = 0.001 * i;
        records.push_back(record("sl_lower", 0.60 + wiggle, i));
        records.push_back(record("sl_upper", 0.90 + wiggle, i));
        records.push_back(record("ssl_vanilla", 0.60 + wiggle, i));
        records.push_back(record("pseudo", 0.75 + wiggle, i));
        records.push_back(record("active_low", 0.55 + wiggle, i));
    }
    const CampaignConfig cfg = benefit_cfg();

    SUBCASE("identical challenger population accepts H0 with no benefit") {
        const auto out = compare_methods(records, "sl_lower", "ssl_vanilla", Tails::two, 0.05, cfg);
        CHECK_FALSE(out.test.reject_null);
        CHECK(out.benefit == "no_benefit");
    }

    SUBCASE("stronger challenger with a real gap is beneficial") {
        const auto out = compare_methods(records, "sl_lower", "pseudo", Tails::two, 0.05, cfg);
        CHECK(out.test.reject_null);
        CHECK(out.test.z > 0.0);
        CHECK(out.benefit == "beneficial");
    }

    SUBCASE("weaker challenger is no benefit") {
        const auto out = compare_methods(records, "sl_lower", "active_low", Tails::two, 0.05, cfg);
        CHECK(out.benefit == "no_benefit");
    }

    SUBCASE("narrow upper-lower gap voids the investment regardless of p") {
        std::vector<RunRecord> flat;
        for (int i = 0; i < 20; ++i) {
            flat.push_back(record("sl_lower", 0.85 + 0.001 * i, i));
            flat.push_back(record("sl_upper", 0.88 + 0.001 * i, i));
            flat.push_back(record("ssl_vanilla", 0.85 + 0.001 * i, i));
            flat.push_back(record("pseudo", 0.99 + 0.0001 * i, i));
        }
        const auto out = compare_methods(flat, "sl_lower", "pseudo", Tails::two, 0.05, cfg);
        CHECK(out.test.reject_null); // statistically better, yet
        CHECK(out.benefit == "investment_not_warranted");
    }
}

TEST_CASE("failed cells are dropped pairwise") {
    std::vector<RunRecord> records;
    for (int i = 0; i < 10; ++i) {
        records.push_back(record("sl_lower", 0.6, i));
        records.push_back(record("sl_upper", 0.9, i));
        records.push_back(record("ssl_vanilla", 0.6, i));
        auto r = record("pseudo", 0.7, i);
        if (i == 3) r.flags = "failed:empty_training_set";
        records.push_back(r);
    }
    const auto out =
        compare_methods(records, "sl_lower", "pseudo", Tails::two, 0.05, benefit_cfg());
    CHECK(out.test.pop_size == 9);
}

TEST_CASE("best-method selection by mean f1") {
    std::vector<RunRecord> records;
    records.push_back(record("ssl_vanilla", 0.5, 0));
    records.push_back(record("pseudo", 0.6, 0));
    records.push_back(record("pseudo_iterated", 0.4, 0));
    records.push_back(record("active_low", 0.7, 0));
    records.push_back(record("pseudo_active_high", 0.9, 0));
    CHECK(best_pure_pseudo_method(records) == "pseudo");
    CHECK(best_active_method(records) == "pseudo_active_high");
}
