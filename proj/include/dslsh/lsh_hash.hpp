#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dslsh/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace dslsh {

/// Quantization range for the l1 bit-sampling family. Coordinates are
/// clamped into [0, kQuantFloor=0, kQuantCeiling] before hashing, which
/// fixes the collision law at 1 - ||x-y||_1 / (d*C) for clamped inputs.
/// 250 mmHg covers the physiological MAP range.
inline constexpr double kQuantCeiling = 250.0;

enum class HashFamily : uint8_t {
    L1BitSample,      // thresholded coordinate test, l1 metric
    CosineProjection, // sign of a random-hyperplane dot product
};

const char* family_name(HashFamily f);

/// (r, cr, p1, p2)-sensitivity parameters. Only the property tests use
/// these; nothing on the query path ever looks at them.
struct SensitivityParams {
    double r;  // distance threshold
    double c;  // approximation factor, >= 1
    double p1; // collision probability for near pairs
    double p2; // collision probability for far pairs, p2 < p1

    bool valid() const { return r > 0 && c >= 1.0 && p1 > p2 && p1 <= 1.0 && p2 >= 0.0; }
};

/// One member of the l1 family: h(x) = [x_coord >= threshold], the
/// thresholded form of Hamming bit-sampling over the unary encoding.
struct BitSampleFunction {
    uint32_t coord = 0;     // in [0, d)
    double threshold = 0.0; // in [0, kQuantCeiling)
};

/// One member of the cosine family: h(x) = [dot(normal, x) >= 0].
struct RandomProjectionFunction {
    std::vector<double> normal; // d independent standard Gaussians
};

/// Bucket key: the m component bits packed little-endian, 64 per word
/// (words[0] bit 0 is component 0). For m <= 128 this is exactly the
/// fixed-width little-endian integer layout; larger m spills into more
/// words. Equality and hashing are all the tables need.
struct BucketKey {
    std::vector<uint64_t> words;

    bool operator==(const BucketKey&) const = default;
};

struct BucketKeyHash {
    size_t operator()(const BucketKey& k) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (uint64_t w : k.words) {
            h ^= w;
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<size_t>(h);
    }
};

/// m-fold composition of one family. Regenerating from (family, seed,
/// m, d) reproduces the components bit-for-bit, so broadcasting the
/// seed is equivalent to broadcasting the function.
struct ComposedHash {
    HashFamily family = HashFamily::L1BitSample;
    uint64_t seed = 0;
    uint32_t m = 0;
    uint32_t d = 0;
    double ceiling = kQuantCeiling; // l1 family clamp range

    std::vector<BitSampleFunction> bits;        // L1BitSample components
    std::vector<RandomProjectionFunction> planes; // CosineProjection components
};

/// Wire-serializable description of a ComposedHash: (family, seed, m,
/// d, C). The receiving side regenerates identical components.
struct HashSpec {
    HashFamily family = HashFamily::L1BitSample;
    uint64_t seed = 0;
    uint32_t m = 0;
    uint32_t d = 0;
    double ceiling = kQuantCeiling;

    friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

void to_json(nlohmann::json& j, const HashSpec& s);
void from_json(const nlohmann::json& j, HashSpec& s);

/// Deterministically derives the m components from the seed. Component
/// i uses a SplitMix64 stream seeded with seed ^ mix64(i); bit-sample
/// components draw (coord, threshold), projection components draw d
/// Gaussian coefficients via Box-Muller.
///
/// Throws std::invalid_argument for m = 0 or d = 0.
ComposedHash derive_composed_hash(HashFamily family, uint64_t seed, uint32_t m,
                                  uint32_t d, double ceiling = kQuantCeiling);

inline ComposedHash derive_composed_hash(const HashSpec& spec) {
    return derive_composed_hash(spec.family, spec.seed, spec.m, spec.d, spec.ceiling);
}

inline HashSpec spec_of(const ComposedHash& h) {
    return HashSpec{h.family, h.seed, h.m, h.d, h.ceiling};
}

/// Evaluates one component. Bit-sample: clamp to [0, C], compare to the
/// threshold. Projection: sign of the dot product, with the fixed tie
/// convention that an exact 0 hashes to 1 (so h(ax) = h(x) for a > 0).
bool hash_component(const ComposedHash& h, uint32_t index, const FeatureVector& x);

/// Concatenates the m component bits into a BucketKey.
/// Throws std::invalid_argument on dimension mismatch.
BucketKey hash_point(const ComposedHash& h, const FeatureVector& x);

/// Empirical single-component collision probability over `trials`
/// independently derived components (seeds base_seed, base_seed+1, ...).
/// Test support for the family collision laws.
double collision_probability_estimate(HashFamily family, const FeatureVector& x,
                                      const FeatureVector& y, uint64_t trials,
                                      uint64_t base_seed = 0);

/// Seed of outer table t derived from the cluster master seed; every
/// node must end up with the same instances.
uint64_t outer_table_seed(uint64_t master_seed, uint32_t table_index);

/// Generates the L_out outer hash specs broadcast at build time.
std::vector<HashSpec> generate_outer_specs(uint64_t master_seed, uint32_t l_out,
                                           uint32_t m_out, uint32_t d,
                                           double ceiling = kQuantCeiling);

/// FNV-1a digest of the canonical JSON encoding of a spec list; nodes
/// echo it back so the orchestrator can verify the broadcast.
std::string spec_digest(const std::vector<HashSpec>& specs);

} // namespace dslsh
