#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "knn/bruteforce.hpp"
#include "knn/metric.hpp"
#include "knn/neighbor_table.hpp"
#include "knn/point_set.hpp"

namespace knn {

/// Binary space-partitioning index over a reference point set for exact KNN.
/// Internal nodes split on the dimension with the greatest coordinate spread
/// at the median (ties by point index, so construction is deterministic);
/// leaves hold up to leaf_size points. Every node stores the bounding box of
/// its points, which is what the query-time pruning tests against.
class KdTree {
public:
    explicit KdTree(PointSet reference, std::size_t leaf_size = 16);

    const PointSet& reference() const { return points_; }
    std::size_t leaf_size() const { return leaf_size_; }

    struct Stats {
        std::size_t node_count;
        std::size_t depth; // root = depth 0
        std::size_t leaf_count;
        double mean_leaf_occupancy;
    };
    Stats stats() const;

    struct Node {
        double split_value = 0.0;
        std::int32_t split_dim = -1;
        std::int32_t left = -1; // -1 marks a leaf
        std::int32_t right = -1;
        std::uint32_t begin = 0; // leaf range into the index order
        std::uint32_t end = 0;
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::uint32_t>& point_order() const { return order_; }
    const double* box_lo(std::size_t node) const { return box_lo_.data() + node * points_.dim(); }
    const double* box_hi(std::size_t node) const { return box_hi_.data() + node * points_.dim(); }

private:
    std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t depth);

    PointSet points_;
    std::size_t leaf_size_;
    std::size_t depth_ = 0;
    std::size_t leaf_count_ = 0;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
    std::vector<double> box_lo_;
    std::vector<double> box_hi_;
};

inline KdTree build_kdtree(const PointSet& reference, std::size_t leaf_size = 16) {
    return KdTree(reference, leaf_size);
}

/// Exact KNN through the tree; identical output to bf_knn, including tie
/// order. A subtree is discarded only when the distance from the query to
/// its bounding box strictly exceeds the current k-th best distance, so a
/// tied point with a smaller index can never be pruned away. Only the
/// axis-aligned kinds are accepted; Mahalanobis queries belong to bf_knn.
NeighborTable kdtree_knn(const KdTree& tree, const PointSet& queries, std::size_t k,
                         const Metric& metric, unsigned worker_count = 0,
                         SearchStats* stats = nullptr);

} // namespace knn
