#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "mobiuse/model.hpp"
#include "mobiuse/training.hpp"
#include "synthetic_kg.hpp"
#include "temp_dir.hpp"

using namespace mobiuse;

namespace {

Geometry mobius21() { return Geometry::mobius(RingSpec{2, 1}); }

TripleStore single_triple_store() {
    TripleStore s;
    s.entities.intern("a");
    s.entities.intern("b");
    s.relations.intern("r");
    s.train = {{0, 0, 1}};
    return s;
}

bool tables_equal(const ModelState& a, const ModelState& b) {
    return (a.entity_table == b.entity_table).all() &&
           (a.relation_table == b.relation_table).all();
}

double positive_score(const ModelState& st, const Triple& l) {
    return score(st.geometry, row_of(st.entity_table, l.h),
                 row_of(st.relation_table, l.r), row_of(st.entity_table, l.t));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST(LossTermTest, HingeExamples) {
    EXPECT_DOUBLE_EQ(loss_term(0.3, 0.9, 1.0), 0.4);
    EXPECT_DOUBLE_EQ(loss_term(0.0, 5.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(loss_term(2.0, 0.1, 1.0), 2.9);
    for (double x : {0.0, 0.25, 3.0}) {
        for (double g : {0.0, 0.5, 2.0}) {
            EXPECT_DOUBLE_EQ(loss_term(x, x, g), g);
        }
    }
}

TEST(TrainingTest, ZeroLearningRateLeavesStateUnchanged) {
    auto store = testkg::make_cyclic_store(40, 3, 5, 10);
    auto state =
        init_model(mobius21(), store.num_entities(), store.num_relations(), 4, 17);
    auto before = state;

    TrainConfig cfg;
    cfg.gamma = 1.0;
    cfg.alpha = 0.0;
    cfg.epochs = 3;
    cfg.seed = 9;
    train(state, store, cfg);
    EXPECT_TRUE(tables_equal(state, before));

    // With the state frozen, an epoch is a pure function of the generator
    // state: replaying it from the same seed yields the same loss.
    const NegativeSampler sampler = NegativeSampler::for_store(store);
    std::vector<double> losses;
    for (int rep = 0; rep < 3; ++rep) {
        std::mt19937_64 rng(4242);
        losses.push_back(train_epoch(state, store.train, sampler, cfg, rng));
    }
    EXPECT_TRUE(tables_equal(state, before));
    ASSERT_EQ(losses.size(), 3u);
    EXPECT_DOUBLE_EQ(losses[0], losses[1]);
    EXPECT_DOUBLE_EQ(losses[1], losses[2]);
    EXPECT_GT(losses[0], 0.0);
}

TEST(TrainingTest, ZeroMarginWithIdenticalScoresMakesNoUpdate) {
    auto store = testkg::make_cyclic_store(20, 2, 5, 4);
    auto state =
        init_model(mobius21(), store.num_entities(), store.num_relations(), 3, 1);
    // Collapse every embedding onto one point: every score is identical, so
    // with margin 0 each hinge is exactly 0 and nothing moves.
    for (int i = 1; i < state.num_entities(); ++i)
        state.entity_table.row(i) = state.entity_table.row(0);
    for (int i = 1; i < state.num_relations(); ++i)
        state.relation_table.row(i) = state.relation_table.row(0);
    auto before = state;

    TrainConfig cfg;
    cfg.gamma = 0.0;
    cfg.alpha = 0.1;
    cfg.epochs = 2;
    cfg.seed = 3;
    double last_loss = -1.0;
    train(state, store, cfg,
          [&](int, double loss, const ModelState&) { last_loss = loss; });

    EXPECT_TRUE(tables_equal(state, before));
    EXPECT_DOUBLE_EQ(last_loss, 0.0);
}

TEST(TrainingTest, SingleTripleScoreDrivenNearZero) {
    auto store = single_triple_store();
    auto state = init_model(mobius21(), 2, 1, 1, 11);
    const double initial = positive_score(state, store.train[0]);

    TrainConfig cfg;
    cfg.gamma = 1.0;  // always-active hinge on this geometry (max distance 0.75)
    cfg.alpha = 0.001;
    cfg.epochs = 6000;
    cfg.seed = 11;
    train(state, store, cfg);

    const double final_score = positive_score(state, store.train[0]);
    EXPECT_LT(final_score, 0.01);
    EXPECT_LT(final_score, initial);
}

TEST(TrainingTest, CoordinatesStayCanonicalAfterTraining) {
    auto store = testkg::make_cyclic_store(60, 3, 7, 10);
    const int n = 4;

    {
        auto state = init_model(Geometry::mobius(RingSpec{3, 2}), store.num_entities(),
                                store.num_relations(), n, 2);
        TrainConfig cfg;
        cfg.gamma = 1.0;
        cfg.alpha = 0.05;
        cfg.epochs = 5;
        cfg.seed = 8;
        train(state, store, cfg);
        for (const EmbTable* t : {&state.entity_table, &state.relation_table}) {
            EXPECT_GE(t->leftCols(n).minCoeff(), 0.0);
            EXPECT_LT(t->leftCols(n).maxCoeff(), 3.0);
            EXPECT_GE(t->rightCols(n).minCoeff(), 0.0);
            EXPECT_LT(t->rightCols(n).maxCoeff(), 2.0);
        }
    }
    {
        auto state = init_model(Geometry::torus(), store.num_entities(),
                                store.num_relations(), n, 2);
        TrainConfig cfg;
        cfg.gamma = 0.5;
        cfg.alpha = 0.05;
        cfg.epochs = 5;
        cfg.seed = 8;
        train(state, store, cfg);
        for (const EmbTable* t : {&state.entity_table, &state.relation_table}) {
            EXPECT_GE(t->minCoeff(), 0.0);
            EXPECT_LT(t->maxCoeff(), 1.0);
        }
    }
    {
        auto state = init_model(Geometry::euclidean(), store.num_entities(),
                                store.num_relations(), n, 2);
        TrainConfig cfg;
        cfg.gamma = 1.0;
        cfg.alpha = 0.05;
        cfg.epochs = 5;
        cfg.seed = 8;
        train(state, store, cfg);
        // Entities are pulled back into the unit ball at every epoch end.
        for (int i = 0; i < state.num_entities(); ++i) {
            double norm = std::sqrt(state.entity_table.row(i).square().sum());
            EXPECT_LE(norm, 1.0 + 1e-12);
        }
    }
}

TEST(TrainingTest, SameSeedGivesBitIdenticalRuns) {
    auto store = testkg::make_cyclic_store(50, 4, 21, 10);
    TrainConfig cfg;
    cfg.gamma = 2.0;
    cfg.alpha = 0.02;
    cfg.epochs = 6;
    cfg.seed = 77;

    auto run = [&]() {
        auto state =
            init_model(mobius21(), store.num_entities(), store.num_relations(), 6, 5);
        train(state, store, cfg);
        return state;
    };
    auto a = run();
    auto b = run();
    EXPECT_TRUE(tables_equal(a, b));

    auto c = init_model(mobius21(), store.num_entities(), store.num_relations(), 6, 5);
    TrainConfig other = cfg;
    other.seed = 78;
    train(c, store, other);
    EXPECT_FALSE(tables_equal(a, c));
}

TEST(TrainingTest, ZeroEpochsMeansInitializeOnly) {
    auto store = testkg::make_cyclic_store(20, 2, 5, 4);
    auto state =
        init_model(mobius21(), store.num_entities(), store.num_relations(), 3, 4);
    auto before = state;
    TrainConfig cfg;
    cfg.epochs = 0;
    int calls = 0;
    train(state, store, cfg, [&](int, double, const ModelState&) { ++calls; });
    EXPECT_EQ(calls, 0);
    EXPECT_TRUE(tables_equal(state, before));
}

TEST(TrainingTest, CallbackSeesEveryEpochInOrder) {
    auto store = testkg::make_cyclic_store(20, 2, 5, 4);
    auto state =
        init_model(mobius21(), store.num_entities(), store.num_relations(), 3, 4);
    TrainConfig cfg;
    cfg.gamma = 1.0;
    cfg.alpha = 0.01;
    cfg.epochs = 4;
    std::vector<int> epochs;
    train(state, store, cfg,
          [&](int epoch, double, const ModelState&) { epochs.push_back(epoch); });
    EXPECT_EQ(epochs, (std::vector<int>{1, 2, 3, 4}));
}

TEST(TrainingTest, VocabMismatchRejected) {
    auto store = testkg::make_cyclic_store(20, 2, 5, 4);
    auto state = init_model(mobius21(), store.num_entities() + 1,
                            store.num_relations(), 3, 4);
    TrainConfig cfg;
    cfg.epochs = 1;
    EXPECT_THROW(train(state, store, cfg), DataError);
}

TEST(TrainingTest, NonFiniteScoreRaisesNumericError) {
    auto store = testkg::make_cyclic_store(20, 2, 5, 4);
    auto state =
        init_model(mobius21(), store.num_entities(), store.num_relations(), 3, 4);
    state.entity_table(0, 0) = std::numeric_limits<double>::quiet_NaN();
    TrainConfig cfg;
    cfg.gamma = 1.0;
    cfg.alpha = 0.01;
    cfg.epochs = 1;
    EXPECT_THROW(train(state, store, cfg), NumericError);
}

TEST(TrainingTest, NegativeConfigRejected) {
    auto store = testkg::make_cyclic_store(20, 2, 5, 4);
    auto state =
        init_model(mobius21(), store.num_entities(), store.num_relations(), 3, 4);
    TrainConfig cfg;
    cfg.alpha = -0.1;
    EXPECT_THROW(train(state, store, cfg), std::invalid_argument);
    cfg = TrainConfig{};
    cfg.gamma = -1.0;
    EXPECT_THROW(train(state, store, cfg), std::invalid_argument);
    cfg = TrainConfig{};
    cfg.epochs = -1;
    EXPECT_THROW(train(state, store, cfg), std::invalid_argument);
}

TEST(CheckpointTest, RoundTripPreservesEverything) {
    testutil::TempDir dir("train_case");
    auto store = testkg::make_cyclic_store(25, 3, 9, 5);
    auto state = init_model(Geometry::mobius(RingSpec{3, 2}, Norm::L2),
                            store.num_entities(), store.num_relations(), 5, 99);
    TrainConfig cfg;
    cfg.gamma = 1.0;
    cfg.alpha = 0.02;
    cfg.epochs = 2;
    cfg.seed = 1;
    train(state, store, cfg);

    auto path = dir.path / "model.ckpt";
    checkpoint_save(state, path);
    auto loaded = checkpoint_load(path);

    EXPECT_EQ(loaded.geometry.kind, state.geometry.kind);
    EXPECT_EQ(loaded.geometry.spec.q, state.geometry.spec.q);
    EXPECT_EQ(loaded.geometry.spec.p, state.geometry.spec.p);
    EXPECT_EQ(loaded.geometry.norm, state.geometry.norm);
    EXPECT_EQ(loaded.n, state.n);
    EXPECT_EQ(loaded.seed, state.seed);
    EXPECT_TRUE(tables_equal(loaded, state));

    // Saving the loaded state reproduces the file byte for byte.
    auto path2 = dir.path / "model2.ckpt";
    checkpoint_save(loaded, path2);
    EXPECT_EQ(slurp(path), slurp(path2));
}

TEST(CheckpointTest, RoundTripEveryGeometry) {
    testutil::TempDir dir("train_case");
    for (const Geometry& g :
         {Geometry::mobius(RingSpec{2, 1}), Geometry::mobius(RingSpec{5, 3}, Norm::L2),
          Geometry::torus(), Geometry::torus(Norm::L2), Geometry::euclidean()}) {
        auto state = init_model(g, 7, 3, 4, 123);
        auto path = dir.path / "g.ckpt";
        checkpoint_save(state, path);
        auto loaded = checkpoint_load(path);
        EXPECT_EQ(loaded.geometry.kind, g.kind);
        EXPECT_EQ(loaded.geometry.norm, g.norm);
        EXPECT_TRUE(tables_equal(loaded, state));
    }
}

TEST(CheckpointTest, CorruptionIsDetected) {
    testutil::TempDir dir("train_case");
    auto state = init_model(mobius21(), 5, 2, 3, 7);
    auto path = dir.path / "m.ckpt";
    checkpoint_save(state, path);
    const std::string good = slurp(path);
    auto bad_path = dir.path / "bad.ckpt";

    {  // truncated payload
        spit(bad_path, good.substr(0, good.size() / 2));
        EXPECT_THROW(checkpoint_load(bad_path), CheckpointError);
    }
    {  // wrong magic
        std::string bad = good;
        bad[0] = 'X';
        spit(bad_path, bad);
        EXPECT_THROW(checkpoint_load(bad_path), CheckpointError);
    }
    {  // unsupported version (little-endian u32 at offset 8)
        std::string bad = good;
        bad[8] = 2;
        spit(bad_path, bad);
        EXPECT_THROW(checkpoint_load(bad_path), CheckpointError);
    }
    {  // flipped payload byte breaks the checksum
        std::string bad = good;
        bad[good.size() - 16] = static_cast<char>(bad[good.size() - 16] ^ 0x40);
        spit(bad_path, bad);
        EXPECT_THROW(checkpoint_load(bad_path), CheckpointError);
    }
    {  // trailing garbage
        spit(bad_path, good + "!");
        EXPECT_THROW(checkpoint_load(bad_path), CheckpointError);
    }
    {  // missing file
        EXPECT_THROW(checkpoint_load(dir.path / "nope.ckpt"), CheckpointError);
    }
}

TEST(InitModelTest, CanonicalRangesAndSeedPolicy) {
    auto g = Geometry::mobius(RingSpec{3, 2});
    auto a = init_model(g, 30, 5, 6, 42);
    auto b = init_model(g, 30, 5, 6, 42);
    auto c = init_model(g, 30, 5, 6, 43);
    EXPECT_TRUE(tables_equal(a, b));
    EXPECT_FALSE(tables_equal(a, c));
    EXPECT_EQ(a.seed, 42u);

    EXPECT_GE(a.entity_table.leftCols(6).minCoeff(), 0.0);
    EXPECT_LT(a.entity_table.leftCols(6).maxCoeff(), 3.0);
    EXPECT_GE(a.entity_table.rightCols(6).minCoeff(), 0.0);
    EXPECT_LT(a.entity_table.rightCols(6).maxCoeff(), 2.0);

    auto t = init_model(Geometry::torus(), 30, 5, 6, 1);
    EXPECT_GE(t.entity_table.minCoeff(), 0.0);
    EXPECT_LT(t.entity_table.maxCoeff(), 1.0);

    // Euclidean init lives in the +-6/sqrt(n) box and is not pre-normalized.
    auto e = init_model(Geometry::euclidean(), 30, 5, 6, 1);
    const double bound = 6.0 / std::sqrt(6.0);
    EXPECT_GE(e.entity_table.minCoeff(), -bound);
    EXPECT_LE(e.entity_table.maxCoeff(), bound);
    bool any_outside_ball = false;
    for (int i = 0; i < e.num_entities(); ++i)
        if (e.entity_table.row(i).square().sum() > 1.0) any_outside_ball = true;
    EXPECT_TRUE(any_outside_ball);
}
