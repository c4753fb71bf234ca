#pragma once

#include "mobiuse/dataset.hpp"
#include "mobiuse/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace mobiuse {

struct RankResult {
    Triple triple;
    double head_rank = 0.0;  // fractional under the mid-rank tie policy
    double tail_rank = 0.0;
};

struct MetricReport {
    double mr = 0.0;
    double mrr = 0.0;
    std::map<int, double> hits;  // m -> fraction of ranks <= m, m in {1,3,10}
    std::size_t rank_count = 0;

    std::string table() const;  // aligned, MRR MR HIT@10 HIT@3 HIT@1 order
    std::string kv() const;     // line-oriented key=value, lossless round-trip
    static MetricReport parse_kv(const std::string& text);

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct EvalOptions {
    bool filtered = true;  // false: rank against every corruption
    int threads = 1;
};

// Rank of `l` among corruptions of one side: candidates are every entity
// in the slot except those forming a triple in `filter` (the true triple
// always competes); rank = 1 + #{strictly smaller} + #{ties}/2.  Pass an
// empty FilterIndex for raw ranking.
double rank_triple(const ModelState& state, const Triple& l, const FilterIndex& filter,
                   Side side);

// Both-side ranks for every triple of the split, in split order.
std::vector<RankResult> rank_split(const ModelState& state, const TripleStore& store,
                                   const FilterIndex& filter, Split split,
                                   const EvalOptions& opts = {});

MetricReport metrics_from_ranks(const std::vector<RankResult>& ranks);

// Filtered (or raw) link-prediction metrics over a split, two ranks per
// triple (head-corrupted and tail-corrupted).
MetricReport evaluate(const ModelState& state, const TripleStore& store,
                      const FilterIndex& filter, Split split, const EvalOptions& opts = {});

}  // namespace mobiuse
