#pragma once

#include "mobiuse/dataset.hpp"

#include <random>

namespace mobiuse {

// Raised when the rejection budget is exhausted on both entity slots
// (possible only on pathologically small, saturated graphs).
struct SamplingError : DataError {
    using DataError::DataError;
};

struct NegativeSample {
    Triple triple;
    Side corrupted_side = Side::Head;
};

// Draws one corrupted triple for the positive `l`: the head slot is chosen
// with probability tph/(tph+hpt), else the tail; the replacement entity is
// uniform over all entities except the original.  Candidates found in
// `train_filter` are rejected and redrawn, up to 100 attempts per side
// (chosen side first, then the other).
NegativeSample sample_negative(const Triple& l, const RelationStats& stats,
                               const FilterIndex& train_filter, int num_entities,
                               std::mt19937_64& rng);

// Bundles everything sample_negative needs besides the random stream.
struct NegativeSampler {
    RelationStats stats;
    FilterIndex train_filter;
    int num_entities = 0;

    static NegativeSampler for_store(const TripleStore& store);

    NegativeSample draw(const Triple& l, std::mt19937_64& rng) const {
        return sample_negative(l, stats, train_filter, num_entities, rng);
    }
};

}  // namespace mobiuse
