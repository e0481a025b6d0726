#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "knn/bruteforce.hpp"
#include "knn/metric.hpp"
#include "knn/reference.hpp"
#include "knn/topk.hpp"
#include "support/generators.hpp"

using knn::BfConfig;
using knn::Metric;
using knn::Neighbor;
using knn::NeighborList;
using knn::NeighborTable;
using knn::PointSet;

namespace {

void check_table_invariants(const NeighborTable& table, std::size_t ref_count) {
    for (std::size_t i = 0; i < table.query_count(); ++i) {
        const auto row = table.row(i);
        std::vector<std::int64_t> seen;
        for (std::size_t t = 0; t < row.size(); ++t) {
            CHECK(row[t].index >= 0);
            CHECK(row[t].index < static_cast<std::int64_t>(ref_count));
            seen.push_back(row[t].index);
            if (t > 0) {
                CHECK(row[t].distance >= row[t - 1].distance);
                if (row[t].distance == row[t - 1].distance)
                    CHECK(row[t].index > row[t - 1].index);
            }
        }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

} // namespace

TEST_CASE("select_k_smallest hand-checked rows") {
    const std::vector<double> row{5, 1, 4, 2};
    const NeighborList two = knn::select_k_smallest(row, 2);
    CHECK(two == NeighborList{{1, 1.0}, {3, 2.0}});

    const std::vector<double> ties{3, 1, 1};
    CHECK(knn::select_k_smallest(ties, 1) == NeighborList{{1, 1.0}});
}

TEST_CASE("select_k_smallest rejects bad k") {
    const std::vector<double> row{1.0, 2.0};
    CHECK_THROWS_AS((void)knn::select_k_smallest(row, 0), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)knn::select_k_smallest(row, 3), doctest::Contains("3"),
                         std::invalid_argument);
}

TEST_CASE("select_k_smallest equals sort-then-truncate on random rows") {
    std::mt19937_64 gen(21);
    std::vector<double> row(1000);
    for (double& v : row) v = testgen::uniform(gen, 0, 10);
    // A few duplicates so the tie rule is exercised.
    for (int t = 0; t < 50; ++t) row[gen() % row.size()] = row[gen() % row.size()];

    NeighborList oracle(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        oracle[j] = {static_cast<std::int64_t>(j), row[j]};
    std::sort(oracle.begin(), oracle.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
    oracle.resize(20);

    CHECK(knn::select_k_smallest(row, 20) == oracle);
}

TEST_CASE("bf_knn collinear example and degenerate full sort") {
    const PointSet refs(3, 2, {0, 0, 1, 0, 2, 0});
    const PointSet query(1, 2, {0.1, 0});
    const NeighborTable table = knn::bf_knn(query, refs, 2, Metric::euclidean());
    CHECK(table.row(0)[0].index == 0);
    CHECK(table.row(0)[0].distance == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(table.row(0)[1].index == 1);
    CHECK(table.row(0)[1].distance == doctest::Approx(0.9).epsilon(1e-15));

    // k = m returns every reference in distance order.
    const NeighborTable full = knn::bf_knn(query, refs, 3, Metric::euclidean());
    CHECK(full.row(0)[2].index == 2);
    check_table_invariants(full, refs.size());
}

TEST_CASE("bf_knn rejects contract violations") {
    const PointSet refs(3, 2, {0, 0, 1, 0, 2, 0});
    const PointSet query(1, 2, {0.1, 0});
    CHECK_THROWS_AS((void)knn::bf_knn(query, refs, 4, Metric::euclidean()),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)knn::bf_knn(query, refs, 0, Metric::euclidean()),
                    std::invalid_argument);
    const PointSet wrong_dim(1, 3, {0, 0, 0});
    CHECK_THROWS_AS((void)knn::bf_knn(wrong_dim, refs, 1, Metric::euclidean()),
                    std::invalid_argument);
}

TEST_CASE("bf_knn equals the serial reference on random instances") {
    std::mt19937_64 gen(33);
    std::vector<double> ident(8 * 8, 0.0);
    for (int i = 0; i < 8; ++i) ident[i * 8 + i] = i == 3 ? 2.5 : 1.0;
    const std::vector<Metric> metrics{Metric::euclidean(), Metric::manhattan(),
                                      Metric::chebyshev(), Metric::mahalanobis(8, ident)};
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 1 + gen() % 50;
        const std::size_t m = 1 + gen() % 50;
        const std::size_t k = 1 + gen() % m;
        const PointSet queries = testgen::uniform_points(n, 8, gen(), -2, 2);
        const PointSet refs = testgen::uniform_points(m, 8, gen(), -2, 2);
        const Metric& metric = metrics[trial % metrics.size()];
        const NeighborTable fast = knn::bf_knn(queries, refs, k, metric);
        const NeighborTable slow = knn::reference_knn(queries, refs, k, metric);
        CHECK(fast == slow);
        check_table_invariants(fast, m);
    }
}

TEST_CASE("bf_knn is bitwise deterministic across workers and chunking") {
    const PointSet queries = testgen::uniform_points(37, 6, 101);
    const PointSet refs = testgen::uniform_points(53, 6, 102);
    const NeighborTable baseline = knn::bf_knn(queries, refs, 7, Metric::euclidean());
    for (unsigned workers : {1u, 2u, 8u}) {
        for (std::size_t chunk : {std::size_t{1}, std::size_t{7}, queries.size()}) {
            BfConfig config;
            config.worker_count = workers;
            config.chunk_size = chunk;
            CHECK(knn::bf_knn(queries, refs, 7, Metric::euclidean(), config) == baseline);
        }
    }
}

TEST_CASE("bf_knn distance work does not depend on k") {
    const PointSet queries = testgen::uniform_points(30, 4, 55);
    const PointSet refs = testgen::uniform_points(40, 4, 56);
    BfConfig config;
    config.count_distance_evals = true;
    for (std::size_t k : {std::size_t{1}, std::size_t{20}, refs.size()}) {
        knn::SearchStats stats;
        (void)knn::bf_knn(queries, refs, k, Metric::euclidean(), config, &stats);
        CHECK(stats.distance_evals == queries.size() * refs.size());
    }
}

TEST_CASE("select_k_smallest over pairwise rows composes to bf_knn") {
    const PointSet queries = testgen::uniform_points(25, 3, 77);
    const PointSet refs = testgen::uniform_points(35, 3, 78);
    const std::size_t k = 6;
    for (const Metric& metric : {Metric::euclidean(), Metric::manhattan()}) {
        const auto matrix = knn::pairwise_distances(queries, refs, metric);
        const NeighborTable table = knn::bf_knn(queries, refs, k, metric);
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const NeighborList composed =
                knn::select_k_smallest({matrix.data() + i * refs.size(), refs.size()}, k);
            const auto row = table.row(i);
            for (std::size_t t = 0; t < k; ++t) {
                CHECK(composed[t].index == row[t].index);
                CHECK(composed[t].distance == row[t].distance);
            }
        }
    }
}

TEST_CASE("bf_cost_model closed forms") {
    const auto unit = knn::bf_cost_model(1, 1, 1, 1);
    CHECK(unit.additions == 2);
    CHECK(unit.multiplications == 1);
    CHECK(unit.comparisons == 0.0);

    CHECK(knn::bf_cost_model(10, 100, 8, 5).multiplications == 8000);

    const auto base = knn::bf_cost_model(10, 100, 8, 5);
    const auto doubled = knn::bf_cost_model(10, 100, 16, 5);
    CHECK(doubled.additions == 2 * base.additions);
    CHECK(doubled.multiplications == 2 * base.multiplications);
    CHECK(doubled.comparisons == base.comparisons);

    CHECK_THROWS_AS((void)knn::bf_cost_model(0, 1, 1, 1), std::invalid_argument);
}
