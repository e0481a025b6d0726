#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace knn {

struct Neighbor {
    std::int64_t index;
    double distance;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

using NeighborList = std::vector<Neighbor>;

/// Per-query lists of the k nearest references, each sorted ascending by
/// distance with ties broken by ascending reference index.
class NeighborTable {
public:
    NeighborTable(std::size_t query_count, std::size_t k)
        : n_(query_count), k_(k), entries_(query_count * k) {
        if (query_count == 0 || k == 0)
            throw std::invalid_argument("NeighborTable: empty table");
    }

    std::size_t query_count() const { return n_; }
    std::size_t k() const { return k_; }

    std::span<Neighbor> row(std::size_t i) { return {entries_.data() + i * k_, k_}; }
    std::span<const Neighbor> row(std::size_t i) const { return {entries_.data() + i * k_, k_}; }

    friend bool operator==(const NeighborTable& a, const NeighborTable& b) {
        return a.n_ == b.n_ && a.k_ == b.k_ && a.entries_ == b.entries_;
    }

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<Neighbor> entries_;
};

} // namespace knn
