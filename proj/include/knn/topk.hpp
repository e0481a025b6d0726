#pragma once

#include <cstddef>
#include <span>

#include "knn/neighbor_table.hpp"

namespace knn {

/// The k smallest values of `row` with their original indices, sorted
/// ascending by value, ties by ascending index. Partial selection: average
/// O(m) to isolate the k smallest plus O(k log k) to order them, equivalent
/// to a full sort followed by truncation.
NeighborList select_k_smallest(std::span<const double> row, std::size_t k);

} // namespace knn
