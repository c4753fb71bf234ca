#pragma once

#include "mobiuse/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mobiuse {

enum class Split { Train, Valid, Test };
enum class Side { Head, Tail };

struct Triple {
    int h = 0;
    int r = 0;
    int t = 0;
    friend bool operator==(const Triple&, const Triple&) = default;
};

// Insertion-ordered string <-> dense-id mapping.
struct Vocab {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> ids;

    int intern(const std::string& name);
    // -1 when absent.
    int lookup(const std::string& name) const;
    int size() const noexcept { return static_cast<int>(names.size()); }
};

struct TripleStore {
    Vocab entities;
    Vocab relations;
    std::vector<Triple> train;
    std::vector<Triple> valid;
    std::vector<Triple> test;

    const std::vector<Triple>& split(Split s) const;
    int num_entities() const noexcept { return entities.size(); }
    int num_relations() const noexcept { return relations.size(); }
};

struct LoadOptions {
    // Strict: unknown valid/test symbols (absent from train) and duplicate
    // triples within a split are errors.  Lenient: skip and count them.
    bool strict = true;
};

struct LoadReport {
    std::size_t skipped_unknown = 0;
    std::size_t skipped_duplicate = 0;
};

// Reads <dir>/train.txt, <dir>/valid.txt, <dir>/test.txt.  Lines are
// "head<TAB>relation<TAB>tail"; vocabularies are built over the union of
// the three splits in first-appearance order (head, relation, tail per
// line, train then valid then test).
TripleStore load_triples(const std::filesystem::path& dir, const LoadOptions& opts = {},
                         LoadReport* report = nullptr);
TripleStore load_triple_files(const std::filesystem::path& train_file,
                              const std::filesystem::path& valid_file,
                              const std::filesystem::path& test_file,
                              const LoadOptions& opts = {}, LoadReport* report = nullptr);

// Per-relation mean tails-per-head / heads-per-tail over the train split.
// Relations absent from train get tph = hpt = 1.
struct RelationStats {
    std::vector<double> tph;
    std::vector<double> hpt;

    // Probability of corrupting the head when drawing a negative.
    double head_corruption_prob(int r) const { return tph.at(r) / (tph.at(r) + hpt.at(r)); }
};

RelationStats bern_stats(const TripleStore& store);

// O(1) membership over a set of triples (hash of a packed 63-bit key).
class FilterIndex {
public:
    static FilterIndex over_all(const TripleStore& store);
    static FilterIndex over_train(const TripleStore& store);

    void insert(const Triple& t);
    bool contains(const Triple& t) const { return keys_.count(key(t)) != 0; }
    std::size_t size() const noexcept { return keys_.size(); }

private:
    static std::uint64_t key(const Triple& t);
    std::unordered_set<std::uint64_t> keys_;
};

// Aligned text table of entity/relation/split counts.
std::string stats_table(const TripleStore& store);

}  // namespace mobiuse
