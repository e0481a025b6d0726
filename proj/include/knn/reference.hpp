#pragma once

#include <cstddef>

#include "knn/metric.hpp"
#include "knn/neighbor_table.hpp"
#include "knn/point_set.hpp"

namespace knn {

/// Serial reference implementation: plain double loop over queries and
/// references, full sort of every distance row, truncation to k. No
/// chunking, no partial selection, no threads. Kept as the correctness
/// oracle for the parallel engines and as the baseline in speedup runs.
NeighborTable reference_knn(const PointSet& queries, const PointSet& references, std::size_t k,
                            const Metric& metric);

} // namespace knn
