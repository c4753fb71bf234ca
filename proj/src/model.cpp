#include "mobiuse/model.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobiuse {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void fill_uniform(EmbTable& table, std::mt19937_64& rng, double lo, double hi) {
    for (Eigen::Index i = 0; i < table.size(); ++i)
        table.data()[i] = lo + (hi - lo) * uniform01(rng);
}

void fill_mobius(EmbTable& table, std::mt19937_64& rng, const RingSpec& spec, int n) {
    for (Eigen::Index row = 0; row < table.rows(); ++row) {
        for (int i = 0; i < n; ++i) table(row, i) = spec.q * uniform01(rng);
        for (int i = 0; i < n; ++i) table(row, n + i) = spec.p * uniform01(rng);
    }
}

}  // namespace

ModelState init_model(const Geometry& geometry, int num_entities, int num_relations, int n,
                      std::uint64_t seed) {
    if (num_entities < 1 || num_relations < 1 || n < 1)
        throw std::invalid_argument("model needs positive entity/relation counts and dimension");
    ModelState state;
    state.geometry = geometry;
    state.n = n;
    state.seed = seed;
    const int width = geometry.width(n);
    state.entity_table.resize(num_entities, width);
    state.relation_table.resize(num_relations, width);

    std::mt19937_64 rng(seed);
    switch (geometry.kind) {
        case GeometryKind::Mobius:
            fill_mobius(state.entity_table, rng, geometry.spec, n);
            fill_mobius(state.relation_table, rng, geometry.spec, n);
            break;
        case GeometryKind::Torus:
            fill_uniform(state.entity_table, rng, 0.0, 1.0);
            fill_uniform(state.relation_table, rng, 0.0, 1.0);
            break;
        case GeometryKind::Euclidean: {
            const double b = 6.0 / std::sqrt(static_cast<double>(n));
            fill_uniform(state.entity_table, rng, -b, b);
            fill_uniform(state.relation_table, rng, -b, b);
            break;
        }
    }
    return state;
}

namespace {

constexpr char kMagic[8] = {'M', 'O', 'B', 'I', 'U', 'S', 'E', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

struct Reader {
    const std::string& data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > data.size()) throw CheckpointError("truncated checkpoint");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

std::uint64_t fnv1a(const char* bytes, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(bytes[i]);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint32_t geometry_tag(const Geometry& g) {
    const std::uint32_t kind = g.kind == GeometryKind::Mobius  ? 0
                             : g.kind == GeometryKind::Torus   ? 1
                                                               : 2;
    const std::uint32_t norm = g.norm == Norm::L1 ? 0 : 1;
    return kind | (norm << 8);
}

}  // namespace

void checkpoint_save(const ModelState& state, const std::filesystem::path& path) {
    std::string out;
    const auto ne = static_cast<std::uint64_t>(state.num_entities());
    const auto nr = static_cast<std::uint64_t>(state.num_relations());
    const auto width = static_cast<std::uint64_t>(state.width());
    out.reserve(64 + (ne + nr) * width * 8 + 8);

    out.append(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u32(out, geometry_tag(state.geometry));
    const bool mob = state.geometry.kind == GeometryKind::Mobius;
    put_u32(out, mob ? static_cast<std::uint32_t>(state.geometry.spec.q) : 0);
    put_u32(out, mob ? static_cast<std::uint32_t>(state.geometry.spec.p) : 0);
    put_u64(out, static_cast<std::uint64_t>(state.n));
    put_u64(out, ne);
    put_u64(out, nr);
    put_u64(out, state.seed);

    const std::size_t payload_start = out.size();
    for (const EmbTable* table : {&state.entity_table, &state.relation_table})
        for (Eigen::Index i = 0; i < table->size(); ++i) put_f64(out, table->data()[i]);
    put_u64(out, fnv1a(out.data() + payload_start, out.size() - payload_start));

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw CheckpointError("cannot open checkpoint for writing: " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw CheckpointError("checkpoint write failed: " + path.string());
}

ModelState checkpoint_load(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw CheckpointError("cannot open checkpoint: " + path.string());
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    Reader rd{data};
    rd.need(sizeof kMagic);
    if (data.compare(0, sizeof kMagic, kMagic, sizeof kMagic) != 0)
        throw CheckpointError("not a checkpoint file (bad magic)");
    rd.pos = sizeof kMagic;
    if (rd.u32() != kVersion) throw CheckpointError("unsupported checkpoint version");

    const std::uint32_t tag = rd.u32();
    const std::uint32_t kind = tag & 0xff;
    const std::uint32_t norm = (tag >> 8) & 0xff;
    if (kind > 2 || norm > 1 || (tag >> 16) != 0)
        throw CheckpointError("unrecognized geometry tag");
    const std::uint32_t q = rd.u32();
    const std::uint32_t p = rd.u32();
    const std::uint64_t n = rd.u64();
    const std::uint64_t ne = rd.u64();
    const std::uint64_t nr = rd.u64();
    const std::uint64_t seed = rd.u64();
    if (n < 1 || ne < 1 || nr < 1 || n > (1u << 24) || ne > (1u << 24) || nr > (1u << 24))
        throw CheckpointError("implausible checkpoint dimensions");

    ModelState state;
    const Norm nm = norm == 0 ? Norm::L1 : Norm::L2;
    try {
        switch (kind) {
            case 0:
                state.geometry =
                    Geometry::mobius(RingSpec{static_cast<int>(q), static_cast<int>(p)}, nm);
                break;
            case 1:
                if (q != 0 || p != 0) throw CheckpointError("geometry tag / ring spec mismatch");
                state.geometry = Geometry::torus(nm);
                break;
            default:
                if (q != 0 || p != 0) throw CheckpointError("geometry tag / ring spec mismatch");
                state.geometry = Geometry::euclidean(nm);
                break;
        }
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(std::string("invalid ring spec in checkpoint: ") + e.what());
    }
    state.n = static_cast<int>(n);
    state.seed = seed;

    const std::uint64_t width = static_cast<std::uint64_t>(state.geometry.width(state.n));
    const std::size_t expect = rd.pos + (ne + nr) * width * 8 + 8;
    if (data.size() < expect) throw CheckpointError("truncated checkpoint");
    if (data.size() > expect) throw CheckpointError("trailing bytes after checkpoint payload");

    const std::size_t payload_start = rd.pos;
    state.entity_table.resize(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(width));
    state.relation_table.resize(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(width));
    for (EmbTable* table : {&state.entity_table, &state.relation_table})
        for (Eigen::Index i = 0; i < table->size(); ++i) table->data()[i] = rd.f64();

    const std::uint64_t stored = rd.u64();
    if (stored != fnv1a(data.data() + payload_start, data.size() - 8 - payload_start))
        throw CheckpointError("checkpoint checksum mismatch");
    return state;
}

}  // namespace mobiuse
