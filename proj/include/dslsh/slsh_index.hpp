#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dslsh/lsh_hash.hpp"
#include "dslsh/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace dslsh {

/// Full SLSH parameter set. Shared verbatim by every node of a cluster.
struct SlshConfig {
    uint32_t m_out = 125;
    uint32_t l_out = 120;
    uint32_t m_in = 40;
    uint32_t l_in = 20;
    double alpha = 0.005;  // inner-layer population threshold fraction
    uint32_t d = 30;
    uint32_t k = 10;
    bool inner_enabled = false;
    uint64_t master_seed = 1;
    double ceiling = kQuantCeiling;

    void validate() const; // throws std::invalid_argument

    friend bool operator==(const SlshConfig&, const SlshConfig&) = default;
};

void to_json(nlohmann::json& j, const SlshConfig& c);
void from_json(const nlohmann::json& j, SlshConfig& c);

using Bucket = std::vector<uint32_t>; // local point indices

/// Cosine re-index of one over-populated outer bucket: L_in tables
/// over the parent bucket's population.
struct InnerLayer {
    std::vector<ComposedHash> hashes; // L_in cosine hashes
    std::vector<std::unordered_map<BucketKey, Bucket, BucketKeyHash>> tables;
    Bucket population; // the parent bucket
};

/// One outer l1 table. Buckets partition the local point-id set; an
/// inner layer exists exactly for buckets whose population exceeded
/// alpha * n_local at build time.
struct OuterTable {
    uint32_t table_id = 0; // index in the broadcast spec list
    ComposedHash hash;     // L1BitSample
    std::unordered_map<BucketKey, Bucket, BucketKeyHash> buckets;
    std::unordered_map<BucketKey, InnerLayer, BucketKeyHash> inner;
};

/// Hashes every point into each table's buckets. Tables are
/// independent; the caller may build them concurrently.
/// Throws std::invalid_argument on dimension mismatch.
std::vector<OuterTable> build_outer_tables(const std::vector<FeatureVector>& points,
                                           const std::vector<ComposedHash>& hashes);

/// Adds inner layers to the buckets of `table` whose population is
/// strictly greater than alpha * n_local. Inner hash seeds derive from
/// (master_seed, table_id, bucket key), so the result does not depend
/// on bucket iteration order or worker assignment.
void build_inner_layers(OuterTable& table, const SlshConfig& cfg, size_t n_local);

/// Union of the query's matching buckets over `tables`, deduplicated.
/// Tables whose matched bucket carries an inner layer contribute the
/// union of the query's inner buckets instead of the whole outer
/// bucket; inner_layer_hits counts those tables. Missing buckets
/// contribute nothing.
struct CandidateSet {
    std::vector<uint32_t> ids; // sorted, unique
    uint64_t inner_layer_hits = 0;
};
CandidateSet candidates_for(const FeatureVector& query,
                            const std::vector<const OuterTable*>& tables);

/// Linear scan of the candidates: the K closest by (l1 distance,
/// point_id). `ids` maps local indices to global ids. Returns the
/// sorted entries and the number of distance evaluations (= number of
/// candidates scanned).
struct ScanResult {
    std::vector<KnnEntry> entries; // ascending, <= K
    uint64_t comparisons = 0;
};
ScanResult scan_candidates(const FeatureVector& query,
                           const std::vector<uint32_t>& candidate_ids,
                           const std::vector<FeatureVector>& points,
                           const std::vector<uint64_t>& ids,
                           const std::vector<uint8_t>& labels, uint32_t k);

/// K globally smallest entries over the partial lists. Entries with
/// the same point id (the same point scanned by several workers) are
/// collapsed keeping the smaller distance. Associative and
/// commutative.
std::vector<KnnEntry> merge_topk(const std::vector<std::vector<KnnEntry>>& partials,
                                 uint32_t k);

/// Self-contained single-process SLSH index over one dataset slice.
/// This is the serial reference implementation: node_runtime must
/// produce exactly the same entries through its parallel path.
class SlshIndex {
public:
    /// Builds from explicit hash specs (the broadcast form).
    void build(std::vector<FeatureVector> points, std::vector<uint64_t> ids,
               std::vector<uint8_t> labels, const SlshConfig& cfg,
               const std::vector<HashSpec>& specs);

    /// Convenience: derives the specs from cfg.master_seed first.
    void build(std::vector<FeatureVector> points, std::vector<uint64_t> ids,
               std::vector<uint8_t> labels, const SlshConfig& cfg);

    /// Serial query over all tables: candidate union, one scan.
    /// Stats carry a single per-processor count.
    std::pair<std::vector<KnnEntry>, QueryStats> query(const FeatureVector& q,
                                                       uint32_t k) const;

    bool built() const { return built_; }
    size_t size() const { return points_.size(); }
    const SlshConfig& config() const { return cfg_; }
    const std::vector<OuterTable>& tables() const { return tables_; }
    const std::vector<FeatureVector>& points() const { return points_; }
    const std::vector<uint64_t>& ids() const { return ids_; }
    const std::vector<uint8_t>& labels() const { return labels_; }

private:
    SlshConfig cfg_;
    std::vector<FeatureVector> points_;
    std::vector<uint64_t> ids_;
    std::vector<uint8_t> labels_;
    std::vector<OuterTable> tables_;
    bool built_ = false;
};

} // namespace dslsh
