#include "knn/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "knn/bruteforce.hpp"
#include "knn/metric.hpp"
#include "knn/rng.hpp"

namespace knn {

std::string to_string(EntropyVariant variant) {
    return variant == EntropyVariant::corrected ? "corrected" : "literal";
}

double digamma(double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("digamma: argument must be positive, got " +
                                    std::to_string(x));
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double tail = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0)));
    return shift + std::log(x) - 0.5 * inv - tail;
}

double unit_ball_volume(std::size_t d) {
    if (d == 0) throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
    const double half_d = 0.5 * static_cast<double>(d);
    return std::exp(std::numbers::ln2 + half_d * std::log(std::numbers::pi) -
                    std::log(static_cast<double>(d)) - std::lgamma(half_d));
}

namespace {

// k-th neighbor distance with the query excluded by index: search for k+1,
// drop the self entry if present, keep the k-th of what remains. When more
// than k coincident points crowd out the self entry everything in the list
// is at distance zero anyway.
double extract_rho(std::span<const Neighbor> row, std::int64_t self, std::size_t k) {
    std::size_t kept = 0;
    double rho = 0.0;
    for (const Neighbor& nb : row) {
        if (nb.index == self) continue;
        rho = nb.distance;
        if (++kept == k) break;
    }
    return rho;
}

} // namespace

double rho_k(const PointSet& points, std::size_t i, std::size_t k) {
    const std::size_t n = points.size();
    if (i >= n) throw std::invalid_argument("rho_k: point index out of range");
    if (k == 0 || k >= n) {
        throw std::invalid_argument("rho_k: k = " + std::to_string(k) +
                                    " needs at least k + 1 = " + std::to_string(k + 1) +
                                    " points, set has " + std::to_string(n));
    }
    const auto row = points.row(i);
    PointSet single(1, points.dim(), {row.begin(), row.end()});
    const NeighborTable table = bf_knn(single, points, k + 1, Metric::euclidean());
    return extract_rho(table.row(0), static_cast<std::int64_t>(i), k);
}

std::vector<double> rho_k_all(const PointSet& points, std::size_t k, unsigned worker_count) {
    const std::size_t n = points.size();
    if (k == 0 || k >= n) {
        throw std::invalid_argument("rho_k_all: k = " + std::to_string(k) +
                                    " needs at least k + 1 points, set has " +
                                    std::to_string(n));
    }
    BfConfig config;
    config.worker_count = worker_count;
    const NeighborTable table = bf_knn(points, points, k + 1, Metric::euclidean(), config);
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i)
        rho[i] = extract_rho(table.row(i), static_cast<std::int64_t>(i), k);
    return rho;
}

namespace {

PointSet jittered(const PointSet& points, std::uint64_t seed) {
    const std::size_t n = points.size();
    const std::size_t d = points.dim();
    double spread = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        double lo = points.coord(0, c);
        double hi = lo;
        for (std::size_t i = 1; i < n; ++i) {
            const double v = points.coord(i, c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        spread = std::max(spread, hi - lo);
    }
    const double magnitude = 1e-12 * spread;
    std::mt19937_64 gen(seed);
    std::vector<double> data = points.data();
    for (double& v : data) v += (2.0 * next_unit(gen) - 1.0) * magnitude;
    return PointSet(n, d, std::move(data));
}

std::string zero_rho_message(const std::vector<double>& rho) {
    std::string indices;
    std::size_t listed = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] != 0.0) continue;
        if (listed == 16) {
            indices += ", ...";
            break;
        }
        if (listed) indices += ", ";
        indices += std::to_string(i);
        ++listed;
    }
    return "kl_entropy: rho_k is zero (coincident points) at indices " + indices;
}

} // namespace

EntropyEstimate kl_entropy(const PointSet& points, const EntropyConfig& config) {
    const std::size_t n = points.size();
    const std::size_t d = points.dim();
    const std::size_t k = config.k;
    if (k == 0) throw std::invalid_argument("kl_entropy: k must be >= 1");
    if (n < k + 1) {
        throw std::invalid_argument("kl_entropy: n = " + std::to_string(n) +
                                    " is too small for k = " + std::to_string(k) +
                                    " (need n >= k + 1)");
    }

    std::vector<double> rho = rho_k_all(points, k, config.worker_count);
    const bool has_zero = std::any_of(rho.begin(), rho.end(), [](double r) { return r == 0.0; });
    if (has_zero) {
        if (config.policy == DuplicatePolicy::error) throw std::invalid_argument(zero_rho_message(rho));
        rho = rho_k_all(jittered(points, config.jitter_seed), k, config.worker_count);
        if (std::any_of(rho.begin(), rho.end(), [](double r) { return r == 0.0; }))
            throw std::invalid_argument(zero_rho_message(rho) + " (after jitter)");
    }

    const double log_ball = std::log(unit_ball_volume(d));
    const double psi_k = digamma(static_cast<double>(k));
    const double log_n1 = std::log(static_cast<double>(n - 1));

    std::vector<double> terms(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double term =
            config.variant == EntropyVariant::corrected
                ? log_n1 + static_cast<double>(d) * std::log(rho[i]) + log_ball - psi_k
                : std::log(static_cast<double>(n - 1) * rho[i]) + log_ball - psi_k;
        terms[i] = term;
        sum += term;
    }

    EntropyEstimate estimate{
        .value_nats = sum / static_cast<double>(n),
        .n = n,
        .k = k,
        .d = d,
        .variant = config.variant,
        .per_point_terms = std::nullopt,
    };
    if (config.keep_terms) estimate.per_point_terms = std::move(terms);
    return estimate;
}

} // namespace knn
