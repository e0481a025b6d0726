#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knn {

/// Dense set of n points in d-dimensional space, row-major storage.
/// Immutable after construction; coordinates are validated to be finite.
class PointSet {
public:
    PointSet(std::size_t n, std::size_t d, std::vector<double> data)
        : n_(n), d_(d), data_(std::move(data)) {
        if (n_ == 0) throw std::invalid_argument("PointSet: point count must be >= 1");
        if (d_ == 0) throw std::invalid_argument("PointSet: dimension must be >= 1");
        if (data_.size() != n_ * d_) {
            throw std::invalid_argument("PointSet: data size " + std::to_string(data_.size()) +
                                        " does not match " + std::to_string(n_) + "x" +
                                        std::to_string(d_));
        }
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (!std::isfinite(data_[i])) {
                throw std::invalid_argument("PointSet: non-finite coordinate at point " +
                                            std::to_string(i / d_) + ", dimension " +
                                            std::to_string(i % d_));
            }
        }
    }

    std::size_t size() const { return n_; }
    std::size_t dim() const { return d_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * d_, d_};
    }

    double coord(std::size_t i, std::size_t c) const { return data_[i * d_ + c]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> data_;
};

} // namespace knn
