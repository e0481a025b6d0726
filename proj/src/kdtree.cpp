#include "knn/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <omp.h>

namespace knn {

KdTree::KdTree(PointSet reference, std::size_t leaf_size)
    : points_(std::move(reference)), leaf_size_(leaf_size) {
    if (leaf_size_ == 0) throw std::invalid_argument("KdTree: leaf_size must be >= 1");
    const std::size_t m = points_.size();
    order_.resize(m);
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.reserve(2 * (m / leaf_size_ + 1));
    build(0, static_cast<std::uint32_t>(m), 0);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t depth) {
    const std::size_t d = points_.dim();
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    depth_ = std::max(depth_, depth);

    // Bounding box of the points in this range; also yields the spread
    // used to pick the split dimension.
    box_lo_.resize(box_lo_.size() + d);
    box_hi_.resize(box_hi_.size() + d);
    double* lo = box_lo_.data() + static_cast<std::size_t>(id) * d;
    double* hi = box_hi_.data() + static_cast<std::size_t>(id) * d;
    for (std::size_t c = 0; c < d; ++c) {
        lo[c] = points_.coord(order_[begin], c);
        hi[c] = lo[c];
    }
    for (std::uint32_t t = begin + 1; t < end; ++t) {
        for (std::size_t c = 0; c < d; ++c) {
            const double v = points_.coord(order_[t], c);
            if (v < lo[c]) lo[c] = v;
            if (v > hi[c]) hi[c] = v;
        }
    }

    const std::uint32_t count = end - begin;
    if (count <= leaf_size_) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        ++leaf_count_;
        return id;
    }

    std::size_t split_dim = 0;
    double best_spread = hi[0] - lo[0];
    for (std::size_t c = 1; c < d; ++c) {
        const double spread = hi[c] - lo[c];
        if (spread > best_spread) {
            best_spread = spread;
            split_dim = c;
        }
    }

    // Median split on (coordinate, index); equal coordinates straddle the
    // cut so each side keeps half the points even on duplicate-heavy data.
    std::sort(order_.begin() + begin, order_.begin() + end,
              [&](std::uint32_t a, std::uint32_t b) {
                  const double ca = points_.coord(a, split_dim);
                  const double cb = points_.coord(b, split_dim);
                  return ca < cb || (ca == cb && a < b);
              });
    const std::uint32_t mid = begin + count / 2;
    nodes_[id].split_dim = static_cast<std::int32_t>(split_dim);
    nodes_[id].split_value = points_.coord(order_[mid], split_dim);

    const std::int32_t left = build(begin, mid, depth + 1);
    const std::int32_t right = build(mid, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

KdTree::Stats KdTree::stats() const {
    return Stats{
        .node_count = nodes_.size(),
        .depth = depth_,
        .leaf_count = leaf_count_,
        .mean_leaf_occupancy = static_cast<double>(points_.size()) /
                               static_cast<double>(leaf_count_),
    };
}

namespace {

inline double box_key(MetricKind kind, const double* q, const double* lo, const double* hi,
                      std::size_t d) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        double excess = 0.0;
        if (q[c] < lo[c]) excess = lo[c] - q[c];
        else if (q[c] > hi[c]) excess = q[c] - hi[c];
        switch (kind) {
            case MetricKind::euclidean: acc += excess * excess; break;
            case MetricKind::manhattan: acc += excess; break;
            case MetricKind::chebyshev:
                if (excess > acc) acc = excess;
                break;
            case MetricKind::mahalanobis: break;
        }
    }
    return acc;
}

inline double point_key(MetricKind kind, const double* a, const double* b, std::size_t d) {
    switch (kind) {
        case MetricKind::euclidean: return euclidean_key(a, b, d);
        case MetricKind::manhattan: return manhattan_key(a, b, d);
        case MetricKind::chebyshev: return chebyshev_key(a, b, d);
        case MetricKind::mahalanobis: break;
    }
    return 0.0;
}

// Max-root heap of the current best k, ordered by (key, index) so the tie
// rule is part of every replacement decision.
struct BoundedBest {
    std::vector<Neighbor> heap;
    std::size_t cap;

    static bool less(const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    }

    bool full() const { return heap.size() == cap; }
    double worst_key() const { return heap.front().distance; }

    void offer(double key, std::int64_t index) {
        const Neighbor cand{index, key};
        if (heap.size() < cap) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end(), less);
        } else if (less(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), less);
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end(), less);
        }
    }
};

struct QueryContext {
    const KdTree& tree;
    MetricKind kind;
    const double* query;
    std::size_t d;
    BoundedBest best;
    std::uint64_t evals = 0;
    std::uint64_t pruned = 0;
};

void search_node(QueryContext& ctx, std::int32_t id) {
    // Descend only while the box can still hold a point that beats the
    // current k-th best; equality must descend, a tied point with a smaller
    // index may be inside.
    if (ctx.best.full() &&
        box_key(ctx.kind, ctx.query, ctx.tree.box_lo(id), ctx.tree.box_hi(id), ctx.d) >
            ctx.best.worst_key()) {
        ++ctx.pruned;
        return;
    }

    const KdTree::Node& node = ctx.tree.nodes()[static_cast<std::size_t>(id)];
    if (node.left < 0) {
        const PointSet& refs = ctx.tree.reference();
        const auto& order = ctx.tree.point_order();
        for (std::uint32_t t = node.begin; t < node.end; ++t) {
            const std::uint32_t j = order[t];
            const double key = point_key(ctx.kind, ctx.query, refs.row(j).data(), ctx.d);
            ++ctx.evals;
            ctx.best.offer(key, static_cast<std::int64_t>(j));
        }
        return;
    }

    const bool left_first = ctx.query[node.split_dim] <= node.split_value;
    search_node(ctx, left_first ? node.left : node.right);
    search_node(ctx, left_first ? node.right : node.left);
}

} // namespace

NeighborTable kdtree_knn(const KdTree& tree, const PointSet& queries, std::size_t k,
                         const Metric& metric, unsigned worker_count, SearchStats* stats) {
    if (metric.kind() == MetricKind::mahalanobis) {
        throw std::invalid_argument(
            "kdtree_knn: Mahalanobis is not supported by the axis-aligned pruning bounds; "
            "use bf_knn");
    }
    if (queries.dim() != tree.reference().dim()) {
        throw std::invalid_argument("kdtree_knn: dimension mismatch, queries have " +
                                    std::to_string(queries.dim()) + ", tree has " +
                                    std::to_string(tree.reference().dim()));
    }
    if (k == 0 || k > tree.reference().size()) {
        throw std::invalid_argument("kdtree_knn: k = " + std::to_string(k) +
                                    " out of range for " +
                                    std::to_string(tree.reference().size()) + " references");
    }

    const MetricKind kind = metric.kind();
    const bool take_root = kind == MetricKind::euclidean;
    const std::size_t n = queries.size();
    const std::size_t d = queries.dim();
    NeighborTable table(n, k);
    std::uint64_t evals = 0;
    std::uint64_t pruned = 0;

    const int workers =
        worker_count == 0 ? omp_get_max_threads() : static_cast<int>(worker_count);

    #pragma omp parallel for schedule(static) num_threads(workers) reduction(+ : evals, pruned)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        QueryContext ctx{tree, kind, queries.row(static_cast<std::size_t>(i)).data(), d,
                         BoundedBest{{}, k}};
        ctx.best.heap.reserve(k);
        search_node(ctx, 0);

        std::sort(ctx.best.heap.begin(), ctx.best.heap.end(), BoundedBest::less);
        auto out = table.row(static_cast<std::size_t>(i));
        for (std::size_t t = 0; t < k; ++t) {
            out[t] = {ctx.best.heap[t].index, take_root ? std::sqrt(ctx.best.heap[t].distance)
                                                        : ctx.best.heap[t].distance};
        }
        evals += ctx.evals;
        pruned += ctx.pruned;
    }

    if (stats) {
        stats->distance_evals = evals;
        stats->pruned_subtrees = pruned;
    }
    return table;
}

} // namespace knn
