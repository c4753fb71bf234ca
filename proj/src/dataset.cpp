#include "mobiuse/dataset.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace mobiuse {

int Vocab::intern(const std::string& name) {
    auto [it, inserted] = ids.try_emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
}

int Vocab::lookup(const std::string& name) const {
    auto it = ids.find(name);
    return it == ids.end() ? -1 : it->second;
}

const std::vector<Triple>& TripleStore::split(Split s) const {
    switch (s) {
        case Split::Train: return train;
        case Split::Valid: return valid;
        case Split::Test:
        default: return test;
    }
}

namespace {

constexpr int kKeyBits = 21;  // fits |E|, |R| up to 2^21 - 1

std::uint64_t pack_key(const Triple& t) {
    const auto h = static_cast<std::uint64_t>(t.h);
    const auto r = static_cast<std::uint64_t>(t.r);
    const auto tt = static_cast<std::uint64_t>(t.t);
    if (t.h < 0 || t.r < 0 || t.t < 0 || h >= (1ull << kKeyBits) || r >= (1ull << kKeyBits) ||
        tt >= (1ull << kKeyBits))
        throw DataError("triple id out of indexable range");
    return (h << (2 * kKeyBits)) | (r << kKeyBits) | tt;
}

void load_split(const std::filesystem::path& file, Split split, TripleStore& store,
                const LoadOptions& opts, LoadReport& report, int train_entities,
                int train_relations) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open " + file.string());

    auto& out = split == Split::Train ? store.train
              : split == Split::Valid ? store.valid
                                      : store.test;
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::array<std::string, 3> field;
        std::size_t start = 0;
        int nfields = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                if (nfields == 3) {
                    nfields = 4;
                    break;
                }
                field[nfields++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (nfields != 3 || field[0].empty() || field[1].empty() || field[2].empty())
            throw DataError(file.string() + ":" + std::to_string(lineno) +
                            ": malformed line (expected head<TAB>relation<TAB>tail)");

        Triple triple;
        triple.h = store.entities.intern(field[0]);
        triple.r = store.relations.intern(field[1]);
        triple.t = store.entities.intern(field[2]);

        if (split != Split::Train &&
            (triple.h >= train_entities || triple.t >= train_entities ||
             triple.r >= train_relations)) {
            if (opts.strict)
                throw DataError(file.string() + ":" + std::to_string(lineno) +
                                ": triple uses a symbol that never appears in the training split");
            ++report.skipped_unknown;
            continue;
        }
        if (!seen.insert(pack_key(triple)).second) {
            if (opts.strict)
                throw DataError(file.string() + ":" + std::to_string(lineno) +
                                ": duplicate triple within the split");
            ++report.skipped_duplicate;
            continue;
        }
        out.push_back(triple);
    }
}

}  // namespace

TripleStore load_triple_files(const std::filesystem::path& train_file,
                              const std::filesystem::path& valid_file,
                              const std::filesystem::path& test_file, const LoadOptions& opts,
                              LoadReport* report) {
    TripleStore store;
    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep = LoadReport{};
    load_split(train_file, Split::Train, store, opts, rep, 0, 0);
    const int train_entities = store.num_entities();
    const int train_relations = store.num_relations();
    load_split(valid_file, Split::Valid, store, opts, rep, train_entities, train_relations);
    load_split(test_file, Split::Test, store, opts, rep, train_entities, train_relations);
    return store;
}

TripleStore load_triples(const std::filesystem::path& dir, const LoadOptions& opts,
                         LoadReport* report) {
    return load_triple_files(dir / "train.txt", dir / "valid.txt", dir / "test.txt", opts,
                             report);
}

RelationStats bern_stats(const TripleStore& store) {
    if (store.train.empty()) throw DataError("bern statistics need a non-empty training split");
    const int nr = store.num_relations();
    std::vector<std::size_t> count(nr, 0);
    std::vector<std::unordered_set<int>> heads(nr), tails(nr);
    for (const Triple& t : store.train) {
        ++count[t.r];
        heads[t.r].insert(t.h);
        tails[t.r].insert(t.t);
    }
    RelationStats stats;
    stats.tph.assign(nr, 1.0);
    stats.hpt.assign(nr, 1.0);
    for (int r = 0; r < nr; ++r) {
        if (count[r] == 0) continue;
        stats.tph[r] = static_cast<double>(count[r]) / static_cast<double>(heads[r].size());
        stats.hpt[r] = static_cast<double>(count[r]) / static_cast<double>(tails[r].size());
    }
    return stats;
}

std::uint64_t FilterIndex::key(const Triple& t) { return pack_key(t); }

void FilterIndex::insert(const Triple& t) { keys_.insert(key(t)); }

FilterIndex FilterIndex::over_all(const TripleStore& store) {
    FilterIndex idx;
    idx.keys_.reserve(store.train.size() + store.valid.size() + store.test.size());
    for (const auto* split : {&store.train, &store.valid, &store.test})
        for (const Triple& t : *split) idx.insert(t);
    return idx;
}

FilterIndex FilterIndex::over_train(const TripleStore& store) {
    FilterIndex idx;
    idx.keys_.reserve(store.train.size());
    for (const Triple& t : store.train) idx.insert(t);
    return idx;
}

std::string stats_table(const TripleStore& store) {
    const std::array<std::pair<const char*, std::size_t>, 5> rows = {{
        {"entities", static_cast<std::size_t>(store.num_entities())},
        {"relations", static_cast<std::size_t>(store.num_relations())},
        {"train", store.train.size()},
        {"valid", store.valid.size()},
        {"test", store.test.size()},
    }};
    std::size_t width = 0;
    for (const auto& [_, v] : rows) width = std::max(width, std::to_string(v).size());
    std::ostringstream os;
    for (const auto& [name, v] : rows) {
        std::string num = std::to_string(v);
        os << name << std::string(10 - std::string(name).size(), ' ')
           << std::string(width - num.size(), ' ') << num << '\n';
    }
    return os.str();
}

}  // namespace mobiuse
