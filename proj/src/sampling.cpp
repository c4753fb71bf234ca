#include "mobiuse/sampling.hpp"

#include <limits>
#include <stdexcept>

namespace mobiuse {

namespace {

constexpr int kAttemptsPerSide = 100;

// Exactly uniform over [0, m) via rejection; stream-stable across builds.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t m) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % m;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % m;
}

// Uniform over {0..num_entities-1} \ {original}.
int draw_replacement(std::mt19937_64& rng, int num_entities, int original) {
    auto idx = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(num_entities - 1)));
    return idx >= original ? idx + 1 : idx;
}

bool try_side(const Triple& l, Side side, const FilterIndex& filter, int num_entities,
              std::mt19937_64& rng, Triple& out) {
    for (int attempt = 0; attempt < kAttemptsPerSide; ++attempt) {
        Triple cand = l;
        if (side == Side::Head)
            cand.h = draw_replacement(rng, num_entities, l.h);
        else
            cand.t = draw_replacement(rng, num_entities, l.t);
        if (!filter.contains(cand)) {
            out = cand;
            return true;
        }
    }
    return false;
}

}  // namespace

NegativeSample sample_negative(const Triple& l, const RelationStats& stats,
                               const FilterIndex& train_filter, int num_entities,
                               std::mt19937_64& rng) {
    if (num_entities < 2)
        throw std::domain_error("negative sampling needs at least two entities");

    const double p_head = stats.head_corruption_prob(l.r);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const Side first = u < p_head ? Side::Head : Side::Tail;
    const Side second = first == Side::Head ? Side::Tail : Side::Head;

    NegativeSample neg;
    for (Side side : {first, second}) {
        if (try_side(l, side, train_filter, num_entities, rng, neg.triple)) {
            neg.corrupted_side = side;
            return neg;
        }
    }
    throw SamplingError("negative sampling rejection budget exhausted on both entity slots");
}

NegativeSampler NegativeSampler::for_store(const TripleStore& store) {
    return NegativeSampler{bern_stats(store), FilterIndex::over_train(store),
                           store.num_entities()};
}

}  // namespace mobiuse
