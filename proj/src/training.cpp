#include "mobiuse/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mobiuse {

double loss_term(double pos_score, double neg_score, double gamma) {
    return std::max(0.0, gamma + pos_score - neg_score);
}

namespace {

void check_config(const TrainConfig& cfg) {
    // Zero margin / zero step are degenerate but well-defined (and useful
    // in tests); only negatives and NaN are rejected.
    if (!(cfg.gamma >= 0.0)) throw std::invalid_argument("margin must be non-negative");
    if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");
    if (cfg.epochs < 0) throw std::invalid_argument("epoch count must be >= 0");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (cfg.eval_every < 0) throw std::invalid_argument("eval cadence must be >= 0");
}

void apply(ModelState& state, const Triple& l, const ScoreGradient& g, double step) {
    row_of(state.entity_table, l.h) += step * g.grad_h;
    row_of(state.relation_table, l.r) += step * g.grad_r;
    row_of(state.entity_table, l.t) += step * g.grad_t;
}

void rewrap(ModelState& state, const Triple& l) {
    if (state.geometry.kind == GeometryKind::Euclidean) return;
    Eigen::Map<Eigen::ArrayXd> h = row_of(state.entity_table, l.h);
    Eigen::Map<Eigen::ArrayXd> r = row_of(state.relation_table, l.r);
    Eigen::Map<Eigen::ArrayXd> t = row_of(state.entity_table, l.t);
    canonicalize(state.geometry, h);
    canonicalize(state.geometry, r);
    canonicalize(state.geometry, t);
}

// Project entities back into the unit L2 ball (the baseline's constraint;
// the compact geometries need no such step).
void project_entities(ModelState& state) {
    for (Eigen::Index i = 0; i < state.entity_table.rows(); ++i) {
        const double norm = std::sqrt(state.entity_table.row(i).square().sum());
        if (norm > 1.0) state.entity_table.row(i) /= norm;
    }
}

}  // namespace

double train_epoch(ModelState& state, const std::vector<Triple>& train,
                   const NegativeSampler& sampler, const TrainConfig& cfg,
                   std::mt19937_64& rng) {
    check_config(cfg);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    ScoreGradient pos_grad, neg_grad;
    double epoch_loss = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
        const Triple& pos = train[order[step]];
        const NegativeSample neg = sampler.draw(pos, rng);

        const auto& ent = state.entity_table;
        const auto& rel = state.relation_table;
        const double f_pos = score_subgradient(state.geometry, row_of(ent, pos.h),
                                               row_of(rel, pos.r), row_of(ent, pos.t), pos_grad);
        const double f_neg =
            score_subgradient(state.geometry, row_of(ent, neg.triple.h), row_of(rel, neg.triple.r),
                              row_of(ent, neg.triple.t), neg_grad);
        // max(0, x) hides a NaN score, so the raw scores are what get vetted.
        if (!std::isfinite(f_pos) || !std::isfinite(f_neg))
            throw NumericError("non-finite score at training step " + std::to_string(step));
        const double hinge = loss_term(f_pos, f_neg, cfg.gamma);
        epoch_loss += hinge;
        if (hinge <= 0.0) continue;

        // d(hinge)/d(pos coords) = +grad, d/d(neg coords) = -grad; both
        // taken from the pre-update tables.
        apply(state, pos, pos_grad, -cfg.alpha);
        apply(state, neg.triple, neg_grad, +cfg.alpha);
        rewrap(state, pos);
        rewrap(state, neg.triple);
    }
    if (state.geometry.kind == GeometryKind::Euclidean) project_entities(state);
    return epoch_loss;
}

void train(ModelState& state, const TripleStore& store, const TrainConfig& cfg,
           const EpochCallback& after_epoch) {
    check_config(cfg);
    if (state.num_entities() != store.num_entities() ||
        state.num_relations() != store.num_relations())
        throw DataError("model tables do not match the dataset vocabularies");

    const NegativeSampler sampler = NegativeSampler::for_store(store);
    // Distinct from the init stream so epoch order is not correlated with
    // the initial tables.
    std::mt19937_64 rng(cfg.seed ^ 0x9E3779B97F4A7C15ull);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double loss = train_epoch(state, store.train, sampler, cfg, rng);
        if (after_epoch) after_epoch(epoch, loss, state);
    }
}

}  // namespace mobiuse
