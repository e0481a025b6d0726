#pragma once

// Deterministic fixture generators shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "knn/applications.hpp"
#include "knn/point_set.hpp"
#include "knn/rng.hpp"

namespace testgen {

inline double uniform(std::mt19937_64& gen, double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * knn::next_unit(gen);
}

/// Box-Muller draw; avoids the distribution adapters in <random> so the
/// same seed produces the same sample everywhere.
inline double gaussian(std::mt19937_64& gen) {
    const double u1 = (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = knn::next_unit(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline knn::PointSet uniform_points(std::size_t n, std::size_t d, std::uint64_t seed,
                                    double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 gen(seed);
    std::vector<double> data(n * d);
    for (double& v : data) v = uniform(gen, lo, hi);
    return knn::PointSet(n, d, std::move(data));
}

inline knn::PointSet gaussian_points(std::size_t n, std::size_t d, std::uint64_t seed,
                                     double mean = 0.0, double sigma = 1.0) {
    std::mt19937_64 gen(seed);
    std::vector<double> data(n * d);
    for (double& v : data) v = mean + sigma * gaussian(gen);
    return knn::PointSet(n, d, std::move(data));
}

/// Two well-separated Gaussian blobs of n/2 points each.
inline knn::PointSet two_blobs(std::size_t n, std::size_t d, std::uint64_t seed,
                               double separation = 100.0) {
    std::mt19937_64 gen(seed);
    std::vector<double> data(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const double center = i < n / 2 ? 0.0 : separation;
        for (std::size_t c = 0; c < d; ++c) data[i * d + c] = center + gaussian(gen);
    }
    return knn::PointSet(n, d, std::move(data));
}

/// Descriptor database of `images` blobs with `per_image` descriptors each,
/// blob centers spread far apart, plus fresh query draws from one blob.
struct RetrievalFixture {
    knn::DescriptorDatabase db;
    knn::PointSet queries;
    std::int64_t query_image;
};

inline RetrievalFixture retrieval_fixture(std::int64_t images, std::size_t per_image,
                                          std::size_t d, std::int64_t query_image,
                                          std::size_t query_count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::size_t total = static_cast<std::size_t>(images) * per_image;
    std::vector<double> data(total * d);
    std::vector<std::int64_t> owners(total);
    for (std::int64_t img = 0; img < images; ++img) {
        for (std::size_t p = 0; p < per_image; ++p) {
            const std::size_t row = static_cast<std::size_t>(img) * per_image + p;
            owners[row] = img;
            for (std::size_t c = 0; c < d; ++c)
                data[row * d + c] = 50.0 * static_cast<double>(img) + gaussian(gen);
        }
    }
    std::vector<double> qdata(query_count * d);
    for (std::size_t i = 0; i < query_count; ++i)
        for (std::size_t c = 0; c < d; ++c)
            qdata[i * d + c] = 50.0 * static_cast<double>(query_image) + gaussian(gen);

    return RetrievalFixture{
        knn::DescriptorDatabase(knn::PointSet(total, d, std::move(data)), std::move(owners),
                                images),
        knn::PointSet(query_count, d, std::move(qdata)),
        query_image,
    };
}

} // namespace testgen
