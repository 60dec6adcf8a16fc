#include "foilspace/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace foilspace;

TEST(Random, SplitmixMatchesReferenceOutput) {
    // First output of the reference splitmix64 generator with state 0.
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Random, Fnv1aReferenceValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Random, StreamsAreReproducible) {
    Stream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(a.uniform01(), b.uniform01());
        ASSERT_EQ(a.normal(), b.normal());
    }
}

TEST(Random, DerivedSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 50; ++s)
        for (std::uint64_t k = 0; k < 50; ++k) seen.insert(derive_seed(s, k));
    EXPECT_EQ(seen.size(), 2500u);
    EXPECT_NE(derive_seed(1, "sample"), derive_seed(1, "bootstrap"));
}

TEST(Random, UniformMomentsAndRange) {
    Stream s(3, 0);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform(-1.0, 1.0);
        ASSERT_GE(u, -1.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum2 += u * u;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum2 / n, 1.0 / 3.0, 0.01);
}

TEST(Random, NormalMoments) {
    Stream s(11, 2);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sum2 += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum2 / n, 1.0, 0.02);
}

TEST(Random, IndexIsUniformOverSmallRange) {
    Stream s(5, 5);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[s.index(7)];
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}
