#include "knn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <omp.h>

#include <json.hpp>

#include "knn/bruteforce.hpp"
#include "knn/csv.hpp"
#include "knn/kdtree.hpp"
#include "knn/rng.hpp"

namespace knn {

std::string to_string(BenchMethod method) {
    return method == BenchMethod::bf ? "bf" : "kdt";
}

BenchMethod parse_bench_method(const std::string& name) {
    if (name == "bf") return BenchMethod::bf;
    if (name == "kdt" || name == "kdtree") return BenchMethod::kdt;
    throw std::invalid_argument("unknown method '" + name + "', expected bf or kdt");
}

BenchmarkConfig BenchmarkConfig::default_grid() {
    BenchmarkConfig config;
    config.n_values = {1200, 2400};
    config.d_values = {8, 16, 32, 64, 80, 96};
    return config;
}

PointSet generate_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n == 0 || d == 0)
        throw std::invalid_argument("generate_uniform: n and d must be >= 1");
    std::mt19937_64 gen(seed);
    std::vector<double> data(n * d);
    for (double& v : data) v = next_unit(gen);
    return PointSet(n, d, std::move(data));
}

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::string environment_description(unsigned worker_count) {
    const int threads = worker_count == 0 ? omp_get_max_threads()
                                          : static_cast<int>(worker_count);
    return std::string("compiler ") + __VERSION__ + ", " + std::to_string(threads) +
           " worker(s)";
}

struct MethodOutcome {
    NeighborTable table;
    BenchmarkRow row;
};

} // namespace

BenchmarkReport run_grid(const BenchmarkConfig& config, std::ostream* log) {
    if (config.n_values.empty() || config.d_values.empty() || config.methods.empty())
        throw std::invalid_argument("run_grid: n_values, d_values and methods must be non-empty");
    if (config.repetitions == 0)
        throw std::invalid_argument("run_grid: repetitions must be >= 1");
    for (std::size_t n : config.n_values) {
        if (config.k > n) {
            throw std::invalid_argument("run_grid: k = " + std::to_string(config.k) +
                                        " exceeds cell size n = " + std::to_string(n));
        }
    }

    BenchmarkReport report;
    report.environment = environment_description(config.worker_count) +
                         ", metric " + to_string(config.metric.kind()) +
                         ", points uniform [0,1)^d";

    for (std::size_t n : config.n_values) {
        for (std::size_t d : config.d_values) {
            PointSet refs = generate_uniform(n, d, derive_seed(config.seed, n, d, 0));
            PointSet queries = generate_uniform(n, d, derive_seed(config.seed, n, d, 1));

            std::vector<MethodOutcome> outcomes;
            for (BenchMethod method : config.methods) {
                BenchmarkRow row{to_string(method), n,           d,   config.k,
                                 0.0,               0,           config.seed, false};

                // The tree is built once per cell; rows time the search phase.
                std::optional<KdTree> tree;
                if (method == BenchMethod::kdt) tree.emplace(refs, config.leaf_size);

                BfConfig bf_config;
                bf_config.chunk_size = config.chunk_size;
                bf_config.worker_count = config.worker_count;
                bf_config.count_distance_evals = true;

                std::vector<double> times;
                std::optional<NeighborTable> table;
                for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                    SearchStats stats;
                    const auto start = std::chrono::steady_clock::now();
                    NeighborTable result =
                        method == BenchMethod::bf
                            ? bf_knn(queries, refs, config.k, config.metric, bf_config, &stats)
                            : kdtree_knn(*tree, queries, config.k, config.metric,
                                         config.worker_count, &stats);
                    times.push_back(elapsed_seconds(start));
                    table = std::move(result);
                    row.distance_evals = stats.distance_evals;
                    if (rep == 0 && times[0] > config.time_budget_seconds) {
                        row.skipped = true;
                        break;
                    }
                }

                if (row.skipped) {
                    row.seconds = std::numeric_limits<double>::quiet_NaN();
                } else if (config.repetitions >= 4) {
                    // First repetition is warm-up.
                    row.seconds = median({times.begin() + 1, times.end()});
                } else {
                    row.seconds = median(times);
                }

                if (log) {
                    *log << row.method << " n=" << n << " d=" << d << " k=" << config.k
                         << (row.skipped
                                 ? " skipped (over time budget)"
                                 : " seconds=" + format_double(row.seconds)) << " dist_evals="
                         << row.distance_evals << '\n';
                }
                outcomes.push_back(MethodOutcome{std::move(*table), std::move(row)});
            }

            // Correctness gate: methods must agree on the cell before any
            // timing enters the report.
            for (std::size_t t = 1; t < outcomes.size(); ++t) {
                if (!(outcomes[t].table == outcomes[0].table)) {
                    throw std::runtime_error(
                        "run_grid: neighbor tables disagree between " + outcomes[0].row.method +
                        " and " + outcomes[t].row.method + " at n=" + std::to_string(n) +
                        " d=" + std::to_string(d));
                }
            }
            for (MethodOutcome& outcome : outcomes) report.rows.push_back(std::move(outcome.row));
        }
    }
    return report;
}

SlopeFit fit_dimension_slope(const BenchmarkReport& report, std::size_t n, BenchMethod method) {
    const std::string tag = to_string(method);
    std::vector<double> xs, ys;
    for (const BenchmarkRow& row : report.rows) {
        if (row.method != tag || row.n != n || row.skipped) continue;
        xs.push_back(static_cast<double>(row.d));
        ys.push_back(row.seconds);
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) {
        throw std::invalid_argument("fit_dimension_slope: need rows at >= 3 distinct dimensions "
                                    "for method " + tag + " at n = " + std::to_string(n));
    }

    const double count = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= count;
    mean_y /= count;

    double cov = 0.0, var_x = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - mean_x) * (ys[i] - mean_y);
        var_x += (xs[i] - mean_x) * (xs[i] - mean_x);
    }
    const double slope = cov / var_x;
    const double intercept = mean_y - slope * mean_x;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    const double r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return SlopeFit{slope, intercept, r_squared};
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "method,n,d,k,seconds,dist_evals,seed\n";
    for (const BenchmarkRow& row : report.rows) {
        out << row.method << ',' << row.n << ',' << row.d << ',' << row.k << ','
            << (row.skipped ? "NA" : format_double(row.seconds)) << ',' << row.distance_evals
            << ',' << row.seed << '\n';
    }
}

void write_report_json(std::ostream& out, const BenchmarkReport& report) {
    nlohmann::json doc;
    doc["environment"] = report.environment;
    doc["rows"] = nlohmann::json::array();
    for (const BenchmarkRow& row : report.rows) {
        nlohmann::json entry{
            {"method", row.method}, {"n", row.n},
            {"d", row.d},           {"k", row.k},
            {"dist_evals", row.distance_evals},
            {"seed", row.seed},     {"skipped", row.skipped},
        };
        if (row.skipped) entry["seconds"] = nullptr;
        else entry["seconds"] = row.seconds;
        doc["rows"].push_back(std::move(entry));
    }
    out << doc.dump(2) << '\n';
}

} // namespace knn
