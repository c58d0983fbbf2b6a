#include "dslsh/lsh_hash.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dslsh/prng.hpp"

namespace dslsh {

const char* family_name(HashFamily f) {
    switch (f) {
        case HashFamily::L1BitSample: return "l1_bit_sample";
        case HashFamily::CosineProjection: return "cosine_projection";
    }
    return "unknown";
}

static HashFamily family_from_name(const std::string& s) {
    if (s == "l1_bit_sample") return HashFamily::L1BitSample;
    if (s == "cosine_projection") return HashFamily::CosineProjection;
    throw std::invalid_argument("unknown hash family: " + s);
}

void to_json(nlohmann::json& j, const HashSpec& s) {
    j = nlohmann::json{{"family", family_name(s.family)},
                       {"seed", s.seed},
                       {"m", s.m},
                       {"d", s.d},
                       {"C", s.ceiling}};
}

void from_json(const nlohmann::json& j, HashSpec& s) {
    s.family = family_from_name(j.at("family").get<std::string>());
    s.seed = j.at("seed").get<uint64_t>();
    s.m = j.at("m").get<uint32_t>();
    s.d = j.at("d").get<uint32_t>();
    s.ceiling = j.at("C").get<double>();
}

ComposedHash derive_composed_hash(HashFamily family, uint64_t seed, uint32_t m,
                                  uint32_t d, double ceiling) {
    if (m == 0) throw std::invalid_argument("derive_composed_hash: m must be >= 1");
    if (d == 0) throw std::invalid_argument("derive_composed_hash: d must be >= 1");

    ComposedHash h;
    h.family = family;
    h.seed = seed;
    h.m = m;
    h.d = d;
    h.ceiling = ceiling;

    if (family == HashFamily::L1BitSample) {
        h.bits.reserve(m);
        for (uint32_t i = 0; i < m; ++i) {
            SplitMix64 rng(seed ^ mix64(i));
            BitSampleFunction f;
            f.coord = static_cast<uint32_t>(rng.below(d));
            f.threshold = rng.uniform() * ceiling;
            h.bits.push_back(f);
        }
    } else {
        h.planes.reserve(m);
        for (uint32_t i = 0; i < m; ++i) {
            SplitMix64 rng(seed ^ mix64(i));
            RandomProjectionFunction f;
            f.normal.resize(d);
            for (uint32_t k = 0; k < d; ++k) f.normal[k] = rng.gaussian();
            h.planes.push_back(std::move(f));
        }
    }
    return h;
}

bool hash_component(const ComposedHash& h, uint32_t index, const FeatureVector& x) {
    if (h.family == HashFamily::L1BitSample) {
        const BitSampleFunction& f = h.bits[index];
        double v = x[f.coord];
        if (v < 0.0) v = 0.0;
        if (v > h.ceiling) v = h.ceiling;
        return v >= f.threshold;
    }
    const RandomProjectionFunction& f = h.planes[index];
    double dot = 0.0;
    for (uint32_t k = 0; k < h.d; ++k) dot += f.normal[k] * x[k];
    return dot >= 0.0;
}

BucketKey hash_point(const ComposedHash& h, const FeatureVector& x) {
    if (x.size() != h.d)
        throw std::invalid_argument("hash_point: vector dimension " +
                                    std::to_string(x.size()) + " != hash dimension " +
                                    std::to_string(h.d));
    BucketKey key;
    key.words.assign((h.m + 63) / 64, 0);
    for (uint32_t i = 0; i < h.m; ++i) {
        if (hash_component(h, i, x))
            key.words[i >> 6] |= uint64_t{1} << (i & 63);
    }
    return key;
}

double collision_probability_estimate(HashFamily family, const FeatureVector& x,
                                      const FeatureVector& y, uint64_t trials,
                                      uint64_t base_seed) {
    if (x.size() != y.size())
        throw std::invalid_argument("collision_probability_estimate: dimension mismatch");
    if (trials == 0)
        throw std::invalid_argument("collision_probability_estimate: trials must be >= 1");

    uint32_t d = static_cast<uint32_t>(x.size());
    uint64_t collisions = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        ComposedHash h = derive_composed_hash(family, base_seed + t, 1, d);
        if (hash_component(h, 0, x) == hash_component(h, 0, y)) ++collisions;
    }
    return static_cast<double>(collisions) / static_cast<double>(trials);
}

uint64_t outer_table_seed(uint64_t master_seed, uint32_t table_index) {
    return seed_combine(master_seed, 0x001a61e50000ULL + table_index);
}

std::vector<HashSpec> generate_outer_specs(uint64_t master_seed, uint32_t l_out,
                                           uint32_t m_out, uint32_t d, double ceiling) {
    std::vector<HashSpec> specs;
    specs.reserve(l_out);
    for (uint32_t t = 0; t < l_out; ++t) {
        specs.push_back(HashSpec{HashFamily::L1BitSample,
                                 outer_table_seed(master_seed, t), m_out, d, ceiling});
    }
    return specs;
}

std::string spec_digest(const std::vector<HashSpec>& specs) {
    nlohmann::json j = specs;
    std::string canon = j.dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace dslsh
