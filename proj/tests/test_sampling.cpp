#include <gtest/gtest.h>

#include <set>
#include <tuple>
#include <type_traits>
#include <vector>

#include "mobiuse/dataset.hpp"
#include "mobiuse/sampling.hpp"
#include "synthetic_kg.hpp"

using namespace mobiuse;

namespace {

// Minimal store: one triple (a, r, b) over two entities.
TripleStore two_entity_store() {
    TripleStore s;
    s.entities.intern("a");
    s.entities.intern("b");
    s.relations.intern("r");
    s.train = {{0, 0, 1}};
    return s;
}

}  // namespace

TEST(SamplingTest, TwoEntityCandidateSet) {
    auto store = two_entity_store();
    auto sampler = NegativeSampler::for_store(store);
    std::mt19937_64 rng(11);

    // Only two corruptions exist: replace the head (b, r, b) or the tail
    // (a, r, a). Neither collides with the training set.
    std::set<std::tuple<int, int, int>> seen;
    for (int i = 0; i < 400; ++i) {
        auto neg = sampler.draw(store.train[0], rng);
        seen.insert({neg.triple.h, neg.triple.r, neg.triple.t});
        if (neg.corrupted_side == Side::Head) {
            EXPECT_EQ(neg.triple.h, 1);
            EXPECT_EQ(neg.triple.t, 1);
        } else {
            EXPECT_EQ(neg.triple.h, 0);
            EXPECT_EQ(neg.triple.t, 0);
        }
    }
    std::set<std::tuple<int, int, int>> expect = {{1, 0, 1}, {0, 0, 0}};
    EXPECT_EQ(seen, expect);
}

TEST(SamplingTest, NegativesNeverInTrainingSet) {
    auto store = testkg::make_cyclic_store(60, 4, /*seed=*/3, /*held_out_per_split=*/20);
    FilterIndex filter = FilterIndex::over_train(store);
    auto sampler = NegativeSampler::for_store(store);
    std::mt19937_64 rng(99);

    for (const Triple& l : store.train) {
        for (int k = 0; k < 4; ++k) {
            auto neg = sampler.draw(l, rng);
            EXPECT_FALSE(filter.contains(neg.triple));
            EXPECT_EQ(neg.triple.r, l.r);
            // Exactly one entity slot differs from the source triple.
            bool head_changed = neg.triple.h != l.h;
            bool tail_changed = neg.triple.t != l.t;
            EXPECT_NE(head_changed, tail_changed);
            EXPECT_EQ(head_changed, neg.corrupted_side == Side::Head);
        }
    }
}

TEST(SamplingTest, HeadCorruptionFrequencyTracksRelationShape) {
    // One head fans out to three tails: tph = 3, hpt = 1, so heads should be
    // corrupted with probability 3 / (3 + 1) = 0.75.
    TripleStore store;
    for (auto name : {"a", "x", "y", "z"}) store.entities.intern(name);
    store.relations.intern("r");
    store.train = {{0, 0, 1}, {0, 0, 2}, {0, 0, 3}};

    auto stats = bern_stats(store);
    ASSERT_DOUBLE_EQ(stats.tph.at(0), 3.0);
    ASSERT_DOUBLE_EQ(stats.hpt.at(0), 1.0);
    ASSERT_DOUBLE_EQ(stats.head_corruption_prob(0), 0.75);

    auto sampler = NegativeSampler::for_store(store);
    std::mt19937_64 rng(2024);
    const int draws = 100000;
    int heads = 0;
    for (int i = 0; i < draws; ++i) {
        auto neg = sampler.draw(store.train[0], rng);
        if (neg.corrupted_side == Side::Head) ++heads;
    }
    double freq = static_cast<double>(heads) / draws;
    EXPECT_NEAR(freq, 0.75, 0.01);
}

TEST(SamplingTest, SameSeedSameStream) {
    auto store = testkg::make_cyclic_store(40, 3, 5, 10);
    auto sampler = NegativeSampler::for_store(store);

    auto run = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::vector<Triple> out;
        for (const Triple& l : store.train) out.push_back(sampler.draw(l, rng).triple);
        return out;
    };
    auto a = run(7);
    auto b = run(7);
    EXPECT_EQ(a, b);
}

TEST(SamplingTest, SingleEntityGraphRejected) {
    TripleStore store;
    store.entities.intern("only");
    store.relations.intern("r");
    store.train = {{0, 0, 0}};
    auto stats = bern_stats(store);
    FilterIndex filter = FilterIndex::over_train(store);
    std::mt19937_64 rng(1);
    EXPECT_THROW(sample_negative(store.train[0], stats, filter, 1, rng),
                 std::domain_error);
}

TEST(SamplingTest, SaturatedGraphThrowsSamplingError) {
    // Every (h, r, t) combination over two entities is a true triple, so no
    // corruption can escape the filter on either side.
    TripleStore store;
    store.entities.intern("a");
    store.entities.intern("b");
    store.relations.intern("r");
    store.train = {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}};
    auto sampler = NegativeSampler::for_store(store);
    std::mt19937_64 rng(42);
    EXPECT_THROW(sampler.draw(store.train[0], rng), SamplingError);
}

TEST(SamplingTest, SamplingErrorIsDataError) {
    static_assert(std::is_base_of_v<DataError, SamplingError>);
    SUCCEED();
}
