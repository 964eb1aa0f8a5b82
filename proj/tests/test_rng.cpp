#include <doctest.h>

#include <algorithm>
#include <set>

#include "sslbench/rng.hpp"

using namespace sslbench;

TEST_CASE("stream is deterministic per seed") {
    RandomStream a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const uint64_t va = a.next_u64();
        all_equal &= (va == b.next_u64());
        any_diff |= (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("next_double lies in [0,1) and looks uniform") {
    RandomStream rng(7);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.next_double();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("below stays in range and covers all values") {
    RandomStream rng(11);
    std::set<uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const uint64_t v = rng.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("derived seeds differ per component") {
    const uint64_t base = derive_seed(1, {2, 3, 4});
    CHECK(base == derive_seed(1, {2, 3, 4}));
    CHECK(base != derive_seed(1, {2, 3, 5}));
    CHECK(base != derive_seed(1, {2, 4, 3}));
    CHECK(base != derive_seed(2, {2, 3, 4}));
}

TEST_CASE("normal draws have roughly standard moments") {
    RandomStream rng(99);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.next_normal();
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.0).epsilon(0.05));
    CHECK(std::abs(mean) < 0.05);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sample_indices draws distinct indices uniformly") {
    RandomStream rng(5);
    const auto picks = sample_indices(50, 20, rng);
    REQUIRE(picks.size() == 20);
    std::set<uint32_t> unique(picks.begin(), picks.end());
    CHECK(unique.size() == 20);
    for (uint32_t p : picks) CHECK(p < 50);

    // each index equally likely over many draws
    std::vector<int> hits(10, 0);
    for (int t = 0; t < 4000; ++t) {
        RandomStream r(derive_seed(123, {static_cast<uint64_t>(t)}));
        for (uint32_t p : sample_indices(10, 3, r)) ++hits[p];
    }
    for (int h : hits) CHECK(h == doctest::Approx(1200).epsilon(0.12));
}
