#include "knn/reference.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace knn {

NeighborTable reference_knn(const PointSet& queries, const PointSet& references, std::size_t k,
                            const Metric& metric) {
    if (queries.dim() != references.dim())
        throw std::invalid_argument("reference_knn: dimension mismatch");
    if (k == 0 || k > references.size())
        throw std::invalid_argument("reference_knn: k out of range");
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
    const Metric kernel = [&] {
        switch (metric.kernel_kind()) {
            case MetricKind::manhattan: return Metric::manhattan();
            case MetricKind::chebyshev: return Metric::chebyshev();
            default: return Metric::euclidean();
        }
    }();

    const std::size_t n = q->size();
    const std::size_t m = r->size();
    NeighborTable table(n, k);
    std::vector<Neighbor> all(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            all[j] = {static_cast<std::int64_t>(j), kernel.key(q->row(i), r->row(j))};
        std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
        });
        auto out = table.row(i);
        for (std::size_t t = 0; t < k; ++t)
            out[t] = {all[t].index, kernel.finalize_key(all[t].distance)};
    }
    return table;
}

} // namespace knn
