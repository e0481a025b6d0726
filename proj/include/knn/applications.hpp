#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "knn/bruteforce.hpp"
#include "knn/metric.hpp"
#include "knn/point_set.hpp"

namespace knn {

/// Training data for classification: points plus one integer class token
/// per point.
struct LabeledSet {
    PointSet points;
    std::vector<std::int64_t> labels;

    LabeledSet(PointSet pts, std::vector<std::int64_t> lbls)
        : points(std::move(pts)), labels(std::move(lbls)) {
        if (labels.size() != points.size()) {
            throw std::invalid_argument("LabeledSet: " + std::to_string(labels.size()) +
                                        " labels for " + std::to_string(points.size()) +
                                        " points");
        }
    }
};

/// Majority vote over the k nearest training points. Vote ties are broken
/// by the smaller summed distance of the tied class's members within the k,
/// then by the smaller label token.
std::vector<std::int64_t> knn_classify(const LabeledSet& train, const PointSet& queries,
                                       std::size_t k, const Metric& metric,
                                       const BfConfig& config = {});

/// Stacked descriptors of an image database; image_of maps each descriptor
/// row to the image that owns it. Identifiers must cover [0, image_count).
struct DescriptorDatabase {
    PointSet descriptors;
    std::vector<std::int64_t> image_of;
    std::int64_t image_count;

    DescriptorDatabase(PointSet desc, std::vector<std::int64_t> owners, std::int64_t images);
};

struct VoteTally {
    /// Vote count per image; sums to (query descriptor count) * k.
    std::vector<std::uint64_t> scores;
    /// All image identifiers, descending score, ties by ascending identifier.
    std::vector<std::int64_t> ranking;
};

/// Descriptor-voting retrieval: every query descriptor's k nearest database
/// descriptors each cast one vote for their owning image.
VoteTally retrieve_vote(const DescriptorDatabase& db, const PointSet& query_descriptors,
                        std::size_t k, const Metric& metric, const BfConfig& config = {});

} // namespace knn
