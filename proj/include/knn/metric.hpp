#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "knn/point_set.hpp"

namespace knn {

enum class MetricKind { euclidean, manhattan, chebyshev, mahalanobis };

std::string to_string(MetricKind kind);

// Raw comparison keys. Accumulation is sequential over coordinates so that
// every code path computing the same pair produces the same bits. Euclidean
// returns the squared distance; the square root is applied by finalize_key.

inline double euclidean_key(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = a[c] - b[c];
        acc += diff * diff;
    }
    return acc;
}

inline double manhattan_key(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) acc += std::abs(a[c] - b[c]);
    return acc;
}

inline double chebyshev_key(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = std::abs(a[c] - b[c]);
        if (diff > acc) acc = diff;
    }
    return acc;
}

/// Distance choice shared by every search engine. Euclidean, Manhattan and
/// Chebyshev are stateless; Mahalanobis carries a symmetric positive-definite
/// matrix M (the inverse covariance) whose Cholesky factor M = L*L^T is
/// computed once at construction. The Mahalanobis distance is evaluated as
/// the Euclidean distance between whitened points y = L^T x, so engines can
/// transform a point set once and then run their Euclidean kernel.
class Metric {
public:
    static Metric euclidean() { return Metric(MetricKind::euclidean); }
    static Metric manhattan() { return Metric(MetricKind::manhattan); }
    static Metric chebyshev() { return Metric(MetricKind::chebyshev); }

    /// `matrix` is the d x d inverse covariance, row-major. Throws if the
    /// matrix is not symmetric within 1e-12 relative tolerance or the
    /// Cholesky factorization hits a non-positive pivot.
    static Metric mahalanobis(std::size_t d, std::vector<double> matrix);

    MetricKind kind() const { return kind_; }

    /// Dimension pinned by the Mahalanobis matrix; 0 for the other kinds.
    std::size_t pinned_dim() const { return dim_; }

    /// Raw ordering key for a pair of points of dimension d. Requires
    /// whitened inputs for Mahalanobis (see kernel_kind / whiten).
    double key(std::span<const double> a, std::span<const double> b) const;

    /// Maps a raw key to the reported distance (sqrt for the squared kinds).
    double finalize_key(double key) const {
        return (kind_ == MetricKind::euclidean || kind_ == MetricKind::mahalanobis)
                   ? std::sqrt(key)
                   : key;
    }

    /// The kernel that runs after preparation: Mahalanobis collapses to
    /// Euclidean on whitened coordinates.
    MetricKind kernel_kind() const {
        return kind_ == MetricKind::mahalanobis ? MetricKind::euclidean : kind_;
    }

    bool needs_whitening() const { return kind_ == MetricKind::mahalanobis; }

    /// Applies y = L^T x to every row. Only valid for Mahalanobis.
    PointSet whiten(const PointSet& points) const;

    void check_compatible(std::size_t d) const {
        if (kind_ == MetricKind::mahalanobis && dim_ != d) {
            throw std::invalid_argument("Metric: Mahalanobis matrix is " + std::to_string(dim_) +
                                        "x" + std::to_string(dim_) + " but points have dimension " +
                                        std::to_string(d));
        }
    }

private:
    explicit Metric(MetricKind kind) : kind_(kind) {}

    void whiten_into(const double* in, double* out) const;

    MetricKind kind_;
    std::size_t dim_ = 0;
    std::vector<double> cholesky_; // lower-triangular L, row-major, d x d
};

/// Metric distance between two vectors. Validates dimensions and finiteness;
/// engines skip this wrapper and call the raw kernels on validated data.
double distance(std::span<const double> a, std::span<const double> b, const Metric& metric);

inline constexpr std::size_t kDefaultPairwiseBudgetBytes = std::size_t{1} << 30;

/// Full n x m matrix of distances, entry (i, j) = distance(Q[i], R[j]).
/// Rows are computed in parallel. Refuses to materialize a matrix larger
/// than `max_bytes`; chunked bf_knn covers that regime.
std::vector<double> pairwise_distances(const PointSet& queries, const PointSet& references,
                                       const Metric& metric,
                                       std::size_t max_bytes = kDefaultPairwiseBudgetBytes);

} // namespace knn
