#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knn/point_set.hpp"

namespace knn {

/// Digamma function Psi(x) for x > 0, absolute error below 1e-10 on
/// (0, 1e6]. Upward recurrence Psi(x) = Psi(x+1) - 1/x shifts the argument
/// to 10 or above, then the asymptotic series
/// ln x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6) is evaluated.
double digamma(double x);

/// Volume of the Euclidean unit ball in d dimensions,
/// 2 pi^(d/2) / (d Gamma(d/2)), evaluated through lgamma so large d does
/// not overflow. Relative error below 1e-12 for d <= 200.
double unit_ball_volume(std::size_t d);

/// Euclidean distance from point i to its k-th nearest neighbor among the
/// other points of the set (self excluded by index, so a coincident point
/// with a different index is still a neighbor at distance zero).
double rho_k(const PointSet& points, std::size_t i, std::size_t k);

/// k-th neighbor distance for every point at once; same values as rho_k
/// called per index, computed with one parallel search.
std::vector<double> rho_k_all(const PointSet& points, std::size_t k, unsigned worker_count = 0);

enum class EntropyVariant {
    /// mean over i of [log(n-1) + d*log(rho_k(y_i)) + log(c1(d)) - Psi(k)]
    corrected,
    /// mean over i of [log((n-1)*rho_k(y_i)) + log(c1(d)) - Psi(k)]
    literal,
};

enum class DuplicatePolicy {
    /// rho_k of zero (coincident points) is an error naming the indices.
    error,
    /// Coordinates get deterministic uniform noise of magnitude
    /// 1e-12 * (largest per-dimension spread) before the estimate.
    jitter,
};

struct EntropyConfig {
    std::size_t k = 5;
    EntropyVariant variant = EntropyVariant::corrected;
    DuplicatePolicy policy = DuplicatePolicy::error;
    std::uint64_t jitter_seed = 0;
    bool keep_terms = false;
    unsigned worker_count = 0;
};

struct EntropyEstimate {
    double value_nats;
    std::size_t n;
    std::size_t k;
    std::size_t d;
    EntropyVariant variant;
    std::optional<std::vector<double>> per_point_terms;
};

/// k-th-neighbor entropy estimate of a sample, in nats. The two variants
/// differ in the exponent on rho_k: `corrected` carries the dimension d and
/// matches closed-form entropies for d > 1, `literal` omits it; they
/// coincide at d = 1. Requires n >= k + 1.
EntropyEstimate kl_entropy(const PointSet& points, const EntropyConfig& config);

std::string to_string(EntropyVariant variant);

} // namespace knn
