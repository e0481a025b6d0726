#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "knn/metric.hpp"
#include "knn/point_set.hpp"

namespace knn {

enum class BenchMethod { bf, kdt };

std::string to_string(BenchMethod method);
BenchMethod parse_bench_method(const std::string& name);

struct BenchmarkConfig {
    std::vector<std::size_t> n_values; // reference count = query count per cell
    std::vector<std::size_t> d_values;
    std::size_t k = 20;
    std::vector<BenchMethod> methods{BenchMethod::bf, BenchMethod::kdt};
    Metric metric = Metric::euclidean();
    std::uint64_t seed = 0;
    std::size_t repetitions = 3;
    unsigned worker_count = 0;
    double time_budget_seconds = 120.0; // per cell and method; over-budget rows are skipped
    std::size_t chunk_size = 1024;
    std::size_t leaf_size = 16;

    /// Table-shaped desk-scale default: two point counts, the full
    /// dimension sweep, k = 20, both methods.
    static BenchmarkConfig default_grid();
};

struct BenchmarkRow {
    std::string method;
    std::size_t n;
    std::size_t d;
    std::size_t k;
    double seconds;              // median over timed repetitions; NaN when skipped
    std::uint64_t distance_evals;
    std::uint64_t seed;          // master seed; per-cell seeds derive from it
    bool skipped = false;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    std::string environment;
};

/// n points uniform on [0,1)^d from mt19937_64; identical seeds give
/// bitwise identical matrices on every platform.
PointSet generate_uniform(std::size_t n, std::size_t d, std::uint64_t seed);

/// Runs every (n, d) cell of the grid: generates reference and query sets
/// from per-cell derived seeds, runs each method, and records the median
/// wall time plus the distance-evaluation count. When both methods are in
/// the roster their neighbor tables are compared on every cell before any
/// timing is accepted; a mismatch aborts the run. A method whose first
/// repetition exceeds the time budget gets its row marked skipped rather
/// than a fabricated timing. Cells run sequentially to keep timings honest.
BenchmarkReport run_grid(const BenchmarkConfig& config, std::ostream* log = nullptr);

struct SlopeFit {
    double slope;
    double intercept;
    double r_squared;
};

/// Ordinary least squares of wall time against dimension over the rows of
/// one (method, n) slice. Requires at least three distinct dimensions.
SlopeFit fit_dimension_slope(const BenchmarkReport& report, std::size_t n, BenchMethod method);

/// CSV with header method,n,d,k,seconds,dist_evals,seed. Skipped rows carry
/// NA in the seconds column.
void write_report_csv(std::ostream& out, const BenchmarkReport& report);

/// JSON document mirroring BenchmarkReport.
void write_report_json(std::ostream& out, const BenchmarkReport& report);

} // namespace knn
