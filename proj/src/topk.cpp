#include "knn/topk.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace knn {

namespace {

inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

} // namespace

NeighborList select_k_smallest(std::span<const double> row, std::size_t k) {
    const std::size_t m = row.size();
    if (k == 0) throw std::invalid_argument("select_k_smallest: k must be >= 1");
    if (k > m) {
        throw std::invalid_argument("select_k_smallest: k = " + std::to_string(k) +
                                    " exceeds row length m = " + std::to_string(m));
    }

    NeighborList entries(m);
    for (std::size_t j = 0; j < m; ++j) entries[j] = {static_cast<std::int64_t>(j), row[j]};

    if (k < m) std::nth_element(entries.begin(), entries.begin() + (k - 1), entries.end(),
                                neighbor_less);
    entries.resize(k);
    std::sort(entries.begin(), entries.end(), neighbor_less);
    return entries;
}

} // namespace knn
