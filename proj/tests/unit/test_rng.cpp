#include "smisga/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using smisga::Rng;

TEST_CASE("rng streams are reproducible and seed-sensitive") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        (void)c.next_u64();
    }
    Rng d(42), e(43);
    CHECK(d.next_u64() != e.next_u64());
}

TEST_CASE("mix_seed depends on every coordinate") {
    const auto s = smisga::mix_seed(1, {2, 3});
    CHECK(s == smisga::mix_seed(1, {2, 3}));
    CHECK(s != smisga::mix_seed(1, {3, 2}));
    CHECK(s != smisga::mix_seed(2, {2, 3}));
    CHECK(s != smisga::mix_seed(1, {2}));
}

TEST_CASE("uniform and normal moments") {
    Rng rng(7);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("below stays in range and hits every value") {
    Rng rng(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("sample_indices returns sorted distinct indices") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const auto idx = rng.sample_indices(64, 20);
        REQUIRE(idx.size() == 20);
        for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] < idx[i]);
        CHECK(idx.back() < 64);
    }
    CHECK(rng.sample_indices(5, 5).size() == 5);
}
