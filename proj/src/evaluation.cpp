#include "mobiuse/evaluation.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mobiuse {

namespace {

void check_compatible(const ModelState& state, const TripleStore& store) {
    if (state.num_entities() != store.num_entities() ||
        state.num_relations() != store.num_relations())
        throw DataError("model tables do not match the dataset vocabularies");
}

void check_ids(const ModelState& state, const Triple& l) {
    if (l.h < 0 || l.h >= state.num_entities() || l.t < 0 || l.t >= state.num_entities() ||
        l.r < 0 || l.r >= state.num_relations())
        throw DataError("triple id outside the model vocabulary");
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

double rank_triple(const ModelState& state, const Triple& l, const FilterIndex& filter,
                   Side side) {
    check_ids(state, l);
    const Geometry& g = state.geometry;
    const auto& ent = state.entity_table;
    const double true_score =
        score(g, row_of(ent, l.h), row_of(state.relation_table, l.r), row_of(ent, l.t));

    std::size_t smaller = 0, ties = 0;
    const int original = side == Side::Head ? l.h : l.t;
    // Tail corruption holds h (+) r fixed; reuse it across candidates.
    const Eigen::ArrayXd s = translate(g, row_of(ent, l.h), row_of(state.relation_table, l.r));
    for (int e = 0; e < state.num_entities(); ++e) {
        if (e == original) continue;
        Triple cand = l;
        (side == Side::Head ? cand.h : cand.t) = e;
        if (filter.contains(cand)) continue;
        const double sc =
            side == Side::Head
                ? score(g, row_of(ent, e), row_of(state.relation_table, l.r), row_of(ent, l.t))
                : pair_dist(g, s, row_of(ent, e));
        if (sc < true_score)
            ++smaller;
        else if (sc == true_score)
            ++ties;
    }
    return 1.0 + static_cast<double>(smaller) + static_cast<double>(ties) / 2.0;
}

std::vector<RankResult> rank_split(const ModelState& state, const TripleStore& store,
                                   const FilterIndex& filter, Split split,
                                   const EvalOptions& opts) {
    check_compatible(state, store);
    const std::vector<Triple>& triples = store.split(split);
    std::vector<RankResult> results(triples.size());
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i].triple = triples[i];
            results[i].head_rank = rank_triple(state, triples[i], filter, Side::Head);
            results[i].tail_rank = rank_triple(state, triples[i], filter, Side::Tail);
        }
    };
    const int threads = std::max(1, opts.threads);
    if (threads == 1 || triples.size() < 2) {
        work(0, triples.size());
        return results;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (triples.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < triples.size(); begin += chunk)
        pool.emplace_back(work, begin, std::min(begin + chunk, triples.size()));
    for (auto& th : pool) th.join();
    return results;
}

MetricReport metrics_from_ranks(const std::vector<RankResult>& ranks) {
    if (ranks.empty()) throw DataError("cannot compute metrics over an empty split");
    MetricReport rep;
    rep.hits = {{1, 0.0}, {3, 0.0}, {10, 0.0}};
    for (const RankResult& r : ranks) {
        for (double rank : {r.head_rank, r.tail_rank}) {
            rep.mr += rank;
            rep.mrr += 1.0 / rank;
            for (auto& [m, frac] : rep.hits)
                if (rank <= m) frac += 1.0;
        }
    }
    rep.rank_count = 2 * ranks.size();
    const auto total = static_cast<double>(rep.rank_count);
    rep.mr /= total;
    rep.mrr /= total;
    for (auto& [m, frac] : rep.hits) frac /= total;
    return rep;
}

MetricReport evaluate(const ModelState& state, const TripleStore& store,
                      const FilterIndex& filter, Split split, const EvalOptions& opts) {
    const std::vector<Triple>& triples = store.split(split);
    if (triples.empty()) throw DataError("evaluation split is empty");
    const FilterIndex raw;
    const FilterIndex& use = opts.filtered ? filter : raw;
    return metrics_from_ranks(rank_split(state, store, use, split, opts));
}

std::string MetricReport::table() const {
    std::ostringstream os;
    os << "   MRR        MR  HIT@10   HIT@3   HIT@1\n"
       << fmt("%.4f", mrr) << fmt("%10.2f", mr) << fmt("%8.4f", hits.at(10))
       << fmt("%8.4f", hits.at(3)) << fmt("%8.4f", hits.at(1)) << '\n';
    return os.str();
}

std::string MetricReport::kv() const {
    std::ostringstream os;
    os << "ranks=" << rank_count << '\n'
       << "mr=" << fmt("%.17g", mr) << '\n'
       << "mrr=" << fmt("%.17g", mrr) << '\n';
    for (const auto& [m, frac] : hits) os << "hit" << m << '=' << fmt("%.17g", frac) << '\n';
    return os.str();
}

MetricReport MetricReport::parse_kv(const std::string& text) {
    MetricReport rep;
    std::istringstream is(text);
    std::string line;
    int seen = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("malformed metric record: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "ranks")
                rep.rank_count = std::stoull(val);
            else if (key == "mr")
                rep.mr = std::stod(val);
            else if (key == "mrr")
                rep.mrr = std::stod(val);
            else if (key == "hit1")
                rep.hits[1] = std::stod(val);
            else if (key == "hit3")
                rep.hits[3] = std::stod(val);
            else if (key == "hit10")
                rep.hits[10] = std::stod(val);
            else
                throw DataError("unknown metric key: " + key);
        } catch (const std::logic_error&) {
            throw DataError("malformed metric value: " + line);
        }
        ++seen;
    }
    if (seen != 6 || rep.hits.size() != 3)
        throw DataError("incomplete metric record (expected 6 keys)");
    return rep;
}

}  // namespace mobiuse
