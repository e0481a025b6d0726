#include "knn/bruteforce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <omp.h>

#include "knn/topk.hpp"

namespace knn {

namespace {

int resolve_workers(unsigned requested) {
    return requested == 0 ? omp_get_max_threads() : static_cast<int>(requested);
}

template <double KeyFn(const double*, const double*, std::size_t)>
void fill_key_row(const double* query, const PointSet& refs, double* out) {
    const std::size_t m = refs.size();
    const std::size_t d = refs.dim();
    const double* base = refs.data().data();
    for (std::size_t j = 0; j < m; ++j) out[j] = KeyFn(query, base + j * d, d);
}

void fill_row_dispatch(MetricKind kind, const double* query, const PointSet& refs, double* out) {
    switch (kind) {
        case MetricKind::euclidean: fill_key_row<euclidean_key>(query, refs, out); break;
        case MetricKind::manhattan: fill_key_row<manhattan_key>(query, refs, out); break;
        case MetricKind::chebyshev: fill_key_row<chebyshev_key>(query, refs, out); break;
        case MetricKind::mahalanobis: break; // whitened before dispatch
    }
}

} // namespace

NeighborTable bf_knn(const PointSet& queries, const PointSet& references, std::size_t k,
                     const Metric& metric, const BfConfig& config, SearchStats* stats) {
    if (queries.dim() != references.dim()) {
        throw std::invalid_argument("bf_knn: dimension mismatch, queries have " +
                                    std::to_string(queries.dim()) + ", references have " +
                                    std::to_string(references.dim()));
    }
    if (k == 0) throw std::invalid_argument("bf_knn: k must be >= 1");
    if (k > references.size()) {
        throw std::invalid_argument("bf_knn: k = " + std::to_string(k) +
                                    " exceeds reference count " +
                                    std::to_string(references.size()));
    }
    if (config.chunk_size == 0) throw std::invalid_argument("bf_knn: chunk_size must be >= 1");
    metric.check_compatible(queries.dim());

    const PointSet* q = &queries;
    const PointSet* r = &references;
    std::optional<PointSet> wq, wr;
    if (metric.needs_whitening()) {
        wq.emplace(metric.whiten(queries));
        wr.emplace(metric.whiten(references));
        q = &*wq;
        r = &*wr;
    }
    const MetricKind kind = metric.kernel_kind();
    const bool take_root =
        kind == MetricKind::euclidean; // keys are squared distances for this kind

    const std::size_t n = q->size();
    const std::size_t m = r->size();
    const int workers = resolve_workers(config.worker_count);

    NeighborTable table(n, k);
    std::uint64_t evals = 0;

    const std::size_t chunk = std::min(config.chunk_size, n);
    std::vector<double> keys(chunk * m);

    for (std::size_t chunk_begin = 0; chunk_begin < n; chunk_begin += chunk) {
        const std::size_t rows = std::min(chunk, n - chunk_begin);
        #pragma omp parallel for schedule(static) num_threads(workers) reduction(+ : evals)
        for (std::int64_t rr = 0; rr < static_cast<std::int64_t>(rows); ++rr) {
            const std::size_t i = chunk_begin + static_cast<std::size_t>(rr);
            double* key_row = keys.data() + static_cast<std::size_t>(rr) * m;
            fill_row_dispatch(kind, q->row(i).data(), *r, key_row);
            NeighborList best = select_k_smallest({key_row, m}, k);
            auto out = table.row(i);
            for (std::size_t t = 0; t < k; ++t) {
                out[t] = {best[t].index,
                          take_root ? std::sqrt(best[t].distance) : best[t].distance};
            }
            if (config.count_distance_evals) evals += m;
        }
    }

    if (stats) stats->distance_evals = evals;
    return table;
}

BfCostModel bf_cost_model(std::size_t n, std::size_t m, std::size_t d, std::size_t k) {
    if (n == 0 || m == 0 || d == 0 || k == 0)
        throw std::invalid_argument("bf_cost_model: all inputs must be >= 1");
    const std::uint64_t nmd = static_cast<std::uint64_t>(n) * m * d;
    return BfCostModel{
        .additions = 2 * nmd,
        .multiplications = nmd,
        .comparisons = static_cast<double>(n) * static_cast<double>(m) *
                       std::log2(static_cast<double>(m)),
    };
}

} // namespace knn
