#pragma once

#include "mobiuse/dataset.hpp"
#include "mobiuse/model.hpp"
#include "mobiuse/sampling.hpp"

#include <functional>
#include <random>

namespace mobiuse {

struct TrainConfig {
    double gamma = 500.0;
    double alpha = 0.0005;
    int epochs = 500;     // 0 = initialize only
    int batch_size = 100; // validated config knob; the optimizer updates per triple
    std::uint64_t seed = 0;
    int eval_every = 0;   // 0 = never; otherwise the driver's callback cadence
};

// Hinge [gamma + pos - neg]_+.
double loss_term(double pos_score, double neg_score, double gamma);

// One pass over the train split in a seeded shuffle: per positive, one
// negative, subgradient step of size alpha on the active hinge, then the
// touched rows are wrapped back onto the geometry.  Returns summed loss.
double train_epoch(ModelState& state, const std::vector<Triple>& train,
                   const NegativeSampler& sampler, const TrainConfig& cfg,
                   std::mt19937_64& rng);

// Called after each epoch (1-based) with the summed epoch loss.
using EpochCallback = std::function<void(int epoch, double loss, const ModelState& state)>;

// Runs `cfg.epochs` epochs over `store.train`; deterministic for a fixed
// (config, data, seed) in this single-threaded driver.
void train(ModelState& state, const TripleStore& store, const TrainConfig& cfg,
           const EpochCallback& after_epoch = {});

}  // namespace mobiuse
