#include "knn/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

namespace knn {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::manhattan: return "manhattan";
        case MetricKind::chebyshev: return "chebyshev";
        case MetricKind::mahalanobis: return "mahalanobis";
    }
    return "unknown";
}

Metric Metric::mahalanobis(std::size_t d, std::vector<double> matrix) {
    if (d == 0) throw std::invalid_argument("Metric: Mahalanobis dimension must be >= 1");
    if (matrix.size() != d * d) {
        throw std::invalid_argument("Metric: Mahalanobis matrix has " +
                                    std::to_string(matrix.size()) + " entries, expected " +
                                    std::to_string(d * d));
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double a = matrix[i * d + j];
            const double b = matrix[j * d + i];
            if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) {
                throw std::invalid_argument("Metric: Mahalanobis matrix is not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }

    // Cholesky M = L * L^T; a non-positive pivot means M is not SPD.
    std::vector<double> lower(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = matrix[i * d + j];
            for (std::size_t c = 0; c < j; ++c) sum -= lower[i * d + c] * lower[j * d + c];
            if (i == j) {
                if (!(sum > 0.0)) {
                    throw std::invalid_argument(
                        "Metric: Mahalanobis matrix is not positive definite (pivot " +
                        std::to_string(i) + ")");
                }
                lower[i * d + i] = std::sqrt(sum);
            } else {
                lower[i * d + j] = sum / lower[j * d + j];
            }
        }
    }

    Metric metric(MetricKind::mahalanobis);
    metric.dim_ = d;
    metric.cholesky_ = std::move(lower);
    return metric;
}

void Metric::whiten_into(const double* in, double* out) const {
    const std::size_t d = dim_;
    // y = L^T x, so y[r] = sum_{c >= r} L[c][r] * x[c].
    for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        for (std::size_t c = r; c < d; ++c) acc += cholesky_[c * d + r] * in[c];
        out[r] = acc;
    }
}

PointSet Metric::whiten(const PointSet& points) const {
    if (kind_ != MetricKind::mahalanobis)
        throw std::logic_error("Metric: whiten is only defined for Mahalanobis");
    check_compatible(points.dim());
    const std::size_t n = points.size();
    const std::size_t d = points.dim();
    std::vector<double> out(n * d);
    for (std::size_t i = 0; i < n; ++i) whiten_into(points.row(i).data(), out.data() + i * d);
    return PointSet(n, d, std::move(out));
}

double Metric::key(std::span<const double> a, std::span<const double> b) const {
    const std::size_t d = a.size();
    switch (kind_) {
        case MetricKind::euclidean: return euclidean_key(a.data(), b.data(), d);
        case MetricKind::manhattan: return manhattan_key(a.data(), b.data(), d);
        case MetricKind::chebyshev: return chebyshev_key(a.data(), b.data(), d);
        case MetricKind::mahalanobis: {
            std::vector<double> wa(d), wb(d);
            whiten_into(a.data(), wa.data());
            whiten_into(b.data(), wb.data());
            return euclidean_key(wa.data(), wb.data(), d);
        }
    }
    return 0.0;
}

double distance(std::span<const double> a, std::span<const double> b, const Metric& metric) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: dimension mismatch, " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
    for (double v : a)
        if (!std::isfinite(v)) throw std::invalid_argument("distance: non-finite coordinate");
    for (double v : b)
        if (!std::isfinite(v)) throw std::invalid_argument("distance: non-finite coordinate");
    metric.check_compatible(a.size());
    return metric.finalize_key(metric.key(a, b));
}

std::vector<double> pairwise_distances(const PointSet& queries, const PointSet& references,
                                       const Metric& metric, std::size_t max_bytes) {
    if (queries.dim() != references.dim()) {
        throw std::invalid_argument("pairwise_distances: dimension mismatch, queries have " +
                                    std::to_string(queries.dim()) + ", references have " +
                                    std::to_string(references.dim()));
    }
    metric.check_compatible(queries.dim());

    const std::size_t n = queries.size();
    const std::size_t m = references.size();
    if (n > max_bytes / sizeof(double) / m) {
        throw std::invalid_argument(
            "pairwise_distances: " + std::to_string(n) + "x" + std::to_string(m) +
            " output exceeds the " + std::to_string(max_bytes) +
            "-byte budget; use the chunked bf_knn search instead");
    }

    const PointSet* q = &queries;
    const PointSet* r = &references;
    std::optional<PointSet> wq, wr;
    if (metric.needs_whitening()) {
        wq.emplace(metric.whiten(queries));
        wr.emplace(metric.whiten(references));
        q = &*wq;
        r = &*wr;
    }
    const MetricKind kind = metric.kernel_kind();
    const std::size_t d = q->dim();

    std::vector<double> out(n * m);
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const double* qa = q->row(static_cast<std::size_t>(i)).data();
        double* row = out.data() + static_cast<std::size_t>(i) * m;
        switch (kind) {
            case MetricKind::euclidean:
                for (std::size_t j = 0; j < m; ++j)
                    row[j] = std::sqrt(euclidean_key(qa, r->row(j).data(), d));
                break;
            case MetricKind::manhattan:
                for (std::size_t j = 0; j < m; ++j)
                    row[j] = manhattan_key(qa, r->row(j).data(), d);
                break;
            case MetricKind::chebyshev:
                for (std::size_t j = 0; j < m; ++j)
                    row[j] = chebyshev_key(qa, r->row(j).data(), d);
                break;
            case MetricKind::mahalanobis: break; // collapsed to euclidean above
        }
    }
    return out;
}

} // namespace knn
