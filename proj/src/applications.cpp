#include "knn/applications.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace knn {

DescriptorDatabase::DescriptorDatabase(PointSet desc, std::vector<std::int64_t> owners,
                                       std::int64_t images)
    : descriptors(std::move(desc)), image_of(std::move(owners)), image_count(images) {
    if (image_of.size() != descriptors.size()) {
        throw std::invalid_argument("DescriptorDatabase: " + std::to_string(image_of.size()) +
                                    " owners for " + std::to_string(descriptors.size()) +
                                    " descriptors");
    }
    if (image_count <= 0)
        throw std::invalid_argument("DescriptorDatabase: image count must be >= 1");
    std::vector<bool> seen(static_cast<std::size_t>(image_count), false);
    for (std::int64_t id : image_of) {
        if (id < 0 || id >= image_count) {
            throw std::invalid_argument("DescriptorDatabase: image identifier " +
                                        std::to_string(id) + " outside [0, " +
                                        std::to_string(image_count) + ")");
        }
        seen[static_cast<std::size_t>(id)] = true;
    }
    for (std::int64_t id = 0; id < image_count; ++id) {
        if (!seen[static_cast<std::size_t>(id)]) {
            throw std::invalid_argument("DescriptorDatabase: image " + std::to_string(id) +
                                        " owns no descriptors");
        }
    }
}

std::vector<std::int64_t> knn_classify(const LabeledSet& train, const PointSet& queries,
                                       std::size_t k, const Metric& metric,
                                       const BfConfig& config) {
    const NeighborTable table = bf_knn(queries, train.points, k, metric, config);

    std::vector<std::int64_t> result(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        struct Tally {
            std::size_t votes = 0;
            double distance_sum = 0.0;
        };
        std::map<std::int64_t, Tally> tallies; // ordered, so the final tie falls to the
                                               // smallest label token
        for (const Neighbor& nb : table.row(i)) {
            Tally& t = tallies[train.labels[static_cast<std::size_t>(nb.index)]];
            ++t.votes;
            t.distance_sum += nb.distance;
        }
        auto best = tallies.begin();
        for (auto it = std::next(tallies.begin()); it != tallies.end(); ++it) {
            if (it->second.votes > best->second.votes ||
                (it->second.votes == best->second.votes &&
                 it->second.distance_sum < best->second.distance_sum)) {
                best = it;
            }
        }
        result[i] = best->first;
    }
    return result;
}

VoteTally retrieve_vote(const DescriptorDatabase& db, const PointSet& query_descriptors,
                        std::size_t k, const Metric& metric, const BfConfig& config) {
    const NeighborTable table = bf_knn(query_descriptors, db.descriptors, k, metric, config);

    VoteTally tally;
    tally.scores.assign(static_cast<std::size_t>(db.image_count), 0);
    for (std::size_t i = 0; i < query_descriptors.size(); ++i) {
        for (const Neighbor& nb : table.row(i))
            ++tally.scores[static_cast<std::size_t>(db.image_of[static_cast<std::size_t>(nb.index)])];
    }

    tally.ranking.resize(static_cast<std::size_t>(db.image_count));
    std::iota(tally.ranking.begin(), tally.ranking.end(), std::int64_t{0});
    std::sort(tally.ranking.begin(), tally.ranking.end(), [&](std::int64_t a, std::int64_t b) {
        const std::uint64_t sa = tally.scores[static_cast<std::size_t>(a)];
        const std::uint64_t sb = tally.scores[static_cast<std::size_t>(b)];
        return sa > sb || (sa == sb && a < b);
    });
    return tally;
}

} // namespace knn
