#pragma once

#include "mobiuse/errors.hpp"
#include "mobiuse/geometry.hpp"

#include <cstdint>
#include <filesystem>

namespace mobiuse {

// Row i = embedding of id i; rows are contiguous.
using EmbTable = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<Eigen::ArrayXd> row_of(EmbTable& t, int i) {
    return {t.data() + static_cast<std::ptrdiff_t>(i) * t.cols(), t.cols()};
}
inline Eigen::Map<const Eigen::ArrayXd> row_of(const EmbTable& t, int i) {
    return {t.data() + static_cast<std::ptrdiff_t>(i) * t.cols(), t.cols()};
}

struct ModelState {
    Geometry geometry;
    int n = 0;  // rings (Mobius) or coordinates (Torus/Euclidean) per embedding
    std::uint64_t seed = 0;
    EmbTable entity_table;    // |E| x geometry.width(n)
    EmbTable relation_table;  // |R| x geometry.width(n)

    int num_entities() const noexcept { return static_cast<int>(entity_table.rows()); }
    int num_relations() const noexcept { return static_cast<int>(relation_table.rows()); }
    int width() const noexcept { return geometry.width(n); }
};

// Seeded uniform init over each coordinate's canonical range; Euclidean
// tables use the usual +-6/sqrt(n) box.
ModelState init_model(const Geometry& geometry, int num_entities, int num_relations, int n,
                      std::uint64_t seed);

struct CheckpointError : DataError {
    using DataError::DataError;
};

// Fixed binary layout: magic, version, geometry tag, q, p, n, |E|, |R|,
// seed; then both tables id-major as little-endian doubles; then a 64-bit
// checksum of the table bytes.  Round-trips every field losslessly.
void checkpoint_save(const ModelState& state, const std::filesystem::path& path);
ModelState checkpoint_load(const std::filesystem::path& path);

}  // namespace mobiuse
