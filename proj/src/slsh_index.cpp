#include "dslsh/slsh_index.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dslsh/prng.hpp"

namespace dslsh {

void SlshConfig::validate() const {
    if (m_out == 0 || l_out == 0)
        throw std::invalid_argument("SlshConfig: m_out and l_out must be >= 1");
    if (inner_enabled && (m_in == 0 || l_in == 0))
        throw std::invalid_argument("SlshConfig: m_in and l_in must be >= 1 when the inner layer is enabled");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("SlshConfig: alpha must be in (0, 1)");
    if (d == 0) throw std::invalid_argument("SlshConfig: d must be >= 1");
    if (k == 0) throw std::invalid_argument("SlshConfig: k must be >= 1");
}

void to_json(nlohmann::json& j, const SlshConfig& c) {
    j = nlohmann::json{{"m_out", c.m_out},   {"L_out", c.l_out},
                       {"m_in", c.m_in},     {"L_in", c.l_in},
                       {"alpha", c.alpha},   {"d", c.d},
                       {"K", c.k},           {"inner_enabled", c.inner_enabled},
                       {"master_seed", c.master_seed}, {"C", c.ceiling}};
}

void from_json(const nlohmann::json& j, SlshConfig& c) {
    c.m_out = j.at("m_out").get<uint32_t>();
    c.l_out = j.at("L_out").get<uint32_t>();
    c.m_in = j.at("m_in").get<uint32_t>();
    c.l_in = j.at("L_in").get<uint32_t>();
    c.alpha = j.at("alpha").get<double>();
    c.d = j.at("d").get<uint32_t>();
    c.k = j.at("K").get<uint32_t>();
    c.inner_enabled = j.at("inner_enabled").get<bool>();
    c.master_seed = j.at("master_seed").get<uint64_t>();
    c.ceiling = j.value("C", kQuantCeiling);
}

std::vector<OuterTable> build_outer_tables(const std::vector<FeatureVector>& points,
                                           const std::vector<ComposedHash>& hashes) {
    std::vector<OuterTable> tables(hashes.size());
    for (size_t t = 0; t < hashes.size(); ++t) {
        tables[t].table_id = static_cast<uint32_t>(t);
        tables[t].hash = hashes[t];
        for (size_t i = 0; i < points.size(); ++i) {
            BucketKey key = hash_point(tables[t].hash, points[i]);
            tables[t].buckets[key].push_back(static_cast<uint32_t>(i));
        }
    }
    return tables;
}

/// Inner seeds depend only on the bucket identity, never on map order.
static uint64_t inner_table_seed(uint64_t master_seed, uint32_t table_id,
                                 const BucketKey& key, uint32_t inner_index) {
    uint64_t s = seed_combine(master_seed, 0x1a7e5ULL);
    s = seed_combine(s, table_id);
    for (uint64_t w : key.words) s = seed_combine(s, w);
    return seed_combine(s, inner_index);
}

void build_inner_layers(OuterTable& table, const SlshConfig& cfg, size_t n_local) {
    if (!cfg.inner_enabled) return;
    const double threshold = cfg.alpha * static_cast<double>(n_local);
    for (const auto& [key, bucket] : table.buckets) {
        if (static_cast<double>(bucket.size()) <= threshold) continue;

        InnerLayer layer;
        layer.population = bucket;
        layer.hashes.reserve(cfg.l_in);
        layer.tables.resize(cfg.l_in);
        for (uint32_t j = 0; j < cfg.l_in; ++j) {
            uint64_t seed = inner_table_seed(cfg.master_seed, table.table_id, key, j);
            layer.hashes.push_back(derive_composed_hash(HashFamily::CosineProjection,
                                                        seed, cfg.m_in, cfg.d));
        }
        // Hash the bucket population into each inner table; the point
        // source is the parent bucket only.
        for (uint32_t j = 0; j < cfg.l_in; ++j) {
            for (uint32_t local : bucket) {
                // points are not available here; the caller hashes.
                (void)local;
            }
        }
        table.inner.emplace(key, std::move(layer));
    }
}

CandidateSet candidates_for(const FeatureVector& query,
                            const std::vector<const OuterTable*>& tables) {
    CandidateSet out;
    std::vector<uint32_t>& ids = out.ids;
    for (const OuterTable* table : tables) {
        BucketKey key = hash_point(table->hash, query);
        auto bucket_it = table->buckets.find(key);
        if (bucket_it == table->buckets.end()) continue;

        auto inner_it = table->inner.find(key);
        if (inner_it != table->inner.end()) {
            ++out.inner_layer_hits;
            const InnerLayer& layer = inner_it->second;
            for (size_t j = 0; j < layer.tables.size(); ++j) {
                BucketKey ikey = hash_point(layer.hashes[j], query);
                auto it = layer.tables[j].find(ikey);
                if (it == layer.tables[j].end()) continue;
                ids.insert(ids.end(), it->second.begin(), it->second.end());
            }
        } else {
            ids.insert(ids.end(), bucket_it->second.begin(), bucket_it->second.end());
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return out;
}

ScanResult scan_candidates(const FeatureVector& query,
                           const std::vector<uint32_t>& candidate_ids,
                           const std::vector<FeatureVector>& points,
                           const std::vector<uint64_t>& ids,
                           const std::vector<uint8_t>& labels, uint32_t k) {
    if (k == 0) throw std::invalid_argument("scan_candidates: k must be >= 1");
    ScanResult res;
    res.comparisons = candidate_ids.size();
    res.entries.reserve(std::min<size_t>(k, candidate_ids.size()));

    // Max-heap of the K best seen so far, ordered by the total order.
    auto worse = [](const KnnEntry& a, const KnnEntry& b) { return knn_entry_less(a, b); };
    std::vector<KnnEntry>& heap = res.entries;
    for (uint32_t local : candidate_ids) {
        KnnEntry e{ids[local], l1_distance(query, points[local]), labels[local]};
        if (heap.size() < k) {
            heap.push_back(e);
            std::push_heap(heap.begin(), heap.end(), worse);
        } else if (knn_entry_less(e, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.back() = e;
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    }
    std::sort_heap(heap.begin(), heap.end(), worse);
    return res;
}

std::vector<KnnEntry> merge_topk(const std::vector<std::vector<KnnEntry>>& partials,
                                 uint32_t k) {
    std::vector<KnnEntry> all;
    for (const auto& part : partials) all.insert(all.end(), part.begin(), part.end());
    std::sort(all.begin(), all.end(), knn_entry_less);

    std::vector<KnnEntry> out;
    out.reserve(std::min<size_t>(k, all.size()));
    for (const KnnEntry& e : all) {
        if (out.size() == k) break;
        bool dup = false;
        for (const KnnEntry& kept : out) {
            if (kept.point_id == e.point_id) { dup = true; break; }
        }
        if (!dup) out.push_back(e);
    }
    return out;
}

void SlshIndex::build(std::vector<FeatureVector> points, std::vector<uint64_t> ids,
                      std::vector<uint8_t> labels, const SlshConfig& cfg,
                      const std::vector<HashSpec>& specs) {
    cfg.validate();
    if (points.size() != ids.size() || points.size() != labels.size())
        throw std::invalid_argument("SlshIndex::build: points/ids/labels size mismatch");
    for (const auto& p : points) {
        if (p.size() != cfg.d)
            throw std::invalid_argument("SlshIndex::build: point dimension mismatch");
    }
    cfg_ = cfg;
    points_ = std::move(points);
    ids_ = std::move(ids);
    labels_ = std::move(labels);

    std::vector<ComposedHash> hashes;
    hashes.reserve(specs.size());
    for (const HashSpec& s : specs) hashes.push_back(derive_composed_hash(s));

    tables_ = build_outer_tables(points_, hashes);
    if (cfg_.inner_enabled) {
        for (OuterTable& t : tables_) {
            build_inner_layers(t, cfg_, points_.size());
            for (auto& [key, layer] : t.inner) {
                for (uint32_t j = 0; j < cfg_.l_in; ++j) {
                    for (uint32_t local : layer.population) {
                        BucketKey ikey = hash_point(layer.hashes[j], points_[local]);
                        layer.tables[j][ikey].push_back(local);
                    }
                }
            }
        }
    }
    built_ = true;
}

void SlshIndex::build(std::vector<FeatureVector> points, std::vector<uint64_t> ids,
                      std::vector<uint8_t> labels, const SlshConfig& cfg) {
    build(std::move(points), std::move(ids), std::move(labels), cfg,
          generate_outer_specs(cfg.master_seed, cfg.l_out, cfg.m_out, cfg.d, cfg.ceiling));
}

std::pair<std::vector<KnnEntry>, QueryStats> SlshIndex::query(const FeatureVector& q,
                                                              uint32_t k) const {
    if (!built_) throw std::runtime_error("SlshIndex::query before build");
    std::vector<const OuterTable*> refs;
    refs.reserve(tables_.size());
    for (const OuterTable& t : tables_) refs.push_back(&t);

    CandidateSet cand = candidates_for(q, refs);
    ScanResult scan = scan_candidates(q, cand.ids, points_, ids_, labels_, k);

    QueryStats stats;
    stats.comparisons_per_processor = {scan.comparisons};
    stats.candidates_unique = cand.ids.size();
    stats.inner_layer_hits = cand.inner_layer_hits;
    return {std::move(scan.entries), std::move(stats)};
}

} // namespace dslsh
