#pragma once

#include <cstdint>
#include <vector>

namespace dslsh {

/// A d-dimensional point of mean-MAP values (mmHg); the unit of
/// similarity search.
using FeatureVector = std::vector<double>;

/// One neighbor entry as it flows node -> orchestrator.
struct KnnEntry {
    uint64_t point_id = 0;
    double distance = 0.0; // l1, mmHg-sum
    uint8_t label = 0;     // binary AHE label

    friend bool operator==(const KnnEntry&, const KnnEntry&) = default;
};

/// Total order used for every scan and merge: (distance, point_id)
/// ascending. Ids are unique, so the order is strict and distributed
/// results are bit-identical to single-process ones.
inline bool knn_entry_less(const KnnEntry& a, const KnnEntry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.point_id < b.point_id;
}

/// Per-query accounting for the speedup analysis. Comparisons are l1
/// distance evaluations only; hashing is not counted.
struct QueryStats {
    std::vector<uint64_t> comparisons_per_processor;
    uint64_t candidates_unique = 0;
    uint64_t inner_layer_hits = 0;
};

inline double l1_distance(const FeatureVector& a, const FeatureVector& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        sum += diff < 0 ? -diff : diff;
    }
    return sum;
}

} // namespace dslsh
