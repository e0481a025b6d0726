#pragma once

#include <cstddef>
#include <cstdint>

#include "knn/metric.hpp"
#include "knn/neighbor_table.hpp"
#include "knn/point_set.hpp"

namespace knn {

struct BfConfig {
    /// Maximum number of query rows whose distance rows are materialized at
    /// once; bounds the intermediate at chunk_size x m values.
    std::size_t chunk_size = 1024;
    /// Parallel worker target; 0 picks the OpenMP default.
    unsigned worker_count = 0;
    /// Toggles the distance-evaluation counter (exactly n*m for a full run).
    bool count_distance_evals = false;
};

struct SearchStats {
    std::uint64_t distance_evals = 0;
    std::uint64_t pruned_subtrees = 0;
};

/// Exhaustive exact KNN: per query, the distance to every reference is
/// computed, the k smallest are selected and reported ascending (ties by
/// ascending reference index). Queries are processed in chunks, rows in
/// parallel; the result is independent of chunk_size and worker_count.
NeighborTable bf_knn(const PointSet& queries, const PointSet& references, std::size_t k,
                     const Metric& metric, const BfConfig& config = {},
                     SearchStats* stats = nullptr);

struct BfCostModel {
    std::uint64_t additions;       // 2*n*m*d
    std::uint64_t multiplications; // n*m*d
    double comparisons;            // n*m*log2(m)
};

/// Closed-form operation counts of the exhaustive search on an n-query,
/// m-reference, d-dimensional instance.
BfCostModel bf_cost_model(std::size_t n, std::size_t m, std::size_t d, std::size_t k);

} // namespace knn
