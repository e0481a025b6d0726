// Command-line front end: exact KNN search, the KNN applications, and the
// benchmark grid, all over CSV files. Exit codes: 0 success, 2 malformed
// input file, 3 contract violation (bad k, dimension mismatch, ...).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "knn/applications.hpp"
#include "knn/bench.hpp"
#include "knn/bruteforce.hpp"
#include "knn/csv.hpp"
#include "knn/entropy.hpp"
#include "knn/kdtree.hpp"
#include "knn/metric.hpp"

namespace {

knn::Metric parse_metric(const std::string& name) {
    if (name == "euclidean") return knn::Metric::euclidean();
    if (name == "manhattan") return knn::Metric::manhattan();
    if (name == "chebyshev") return knn::Metric::chebyshev();
    if (name.rfind("mahalanobis:", 0) == 0) {
        const std::filesystem::path path = name.substr(std::string("mahalanobis:").size());
        std::size_t dim = 0;
        std::vector<double> matrix = knn::read_matrix_csv(path, dim);
        return knn::Metric::mahalanobis(dim, std::move(matrix));
    }
    throw CLI::ValidationError(
        "--metric", "expected euclidean, manhattan, chebyshev or mahalanobis:PATH");
}

/// Writes through a temp file and renames, so readers never see a partial
/// file; empty path means standard output.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
        out << content;
    }
    std::filesystem::rename(temp, target);
}

struct SearchOptions {
    std::string ref_path, query_path, out_path;
    std::string metric = "euclidean";
    std::string method = "bf";
    std::size_t k = 1;
    unsigned workers = 0;
    std::size_t chunk_size = 1024;
    std::size_t leaf_size = 16;
};

int run_search(const SearchOptions& opt) {
    const knn::PointSet refs = knn::read_points_csv(opt.ref_path);
    const knn::PointSet queries = knn::read_points_csv(opt.query_path);
    const knn::Metric metric = parse_metric(opt.metric);

    knn::NeighborTable table = [&] {
        if (opt.method == "bf") {
            knn::BfConfig config;
            config.worker_count = opt.workers;
            config.chunk_size = opt.chunk_size;
            return knn::bf_knn(queries, refs, opt.k, metric, config);
        }
        if (opt.method == "kdtree") {
            const knn::KdTree tree(refs, opt.leaf_size);
            return knn::kdtree_knn(tree, queries, opt.k, metric, opt.workers);
        }
        throw CLI::ValidationError("--method", "expected bf or kdtree");
    }();

    std::ostringstream out;
    out << "query_index,rank,ref_index,distance\n";
    for (std::size_t i = 0; i < table.query_count(); ++i) {
        const auto row = table.row(i);
        for (std::size_t r = 0; r < row.size(); ++r) {
            out << i << ',' << r << ',' << row[r].index << ','
                << knn::format_double(row[r].distance) << '\n';
        }
    }
    write_output(opt.out_path, out.str());
    return 0;
}

struct EntropyOptions {
    std::string in_path, out_path;
    std::string variant = "corrected";
    std::string policy = "error";
    std::size_t k = 5;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

int run_entropy(const EntropyOptions& opt) {
    const knn::PointSet points = knn::read_points_csv(opt.in_path);

    knn::EntropyConfig config;
    config.k = opt.k;
    config.jitter_seed = opt.seed;
    config.worker_count = opt.workers;
    if (opt.variant == "corrected") config.variant = knn::EntropyVariant::corrected;
    else if (opt.variant == "literal") config.variant = knn::EntropyVariant::literal;
    else throw CLI::ValidationError("--variant", "expected corrected or literal");
    if (opt.policy == "error") config.policy = knn::DuplicatePolicy::error;
    else if (opt.policy == "jitter") config.policy = knn::DuplicatePolicy::jitter;
    else throw CLI::ValidationError("--policy", "expected error or jitter");

    const knn::EntropyEstimate estimate = knn::kl_entropy(points, config);
    const nlohmann::json doc{
        {"value_nats", estimate.value_nats}, {"n", estimate.n},
        {"k", estimate.k},                   {"d", estimate.d},
        {"variant", knn::to_string(estimate.variant)},
    };
    write_output(opt.out_path, doc.dump(2) + "\n");
    return 0;
}

struct ClassifyOptions {
    std::string train_path, query_path, out_path;
    std::string metric = "euclidean";
    std::size_t k = 1;
    unsigned workers = 0;
};

int run_classify(const ClassifyOptions& opt) {
    const knn::LabeledSet train = knn::read_labeled_csv(opt.train_path);
    const knn::PointSet queries = knn::read_points_csv(opt.query_path);
    knn::BfConfig config;
    config.worker_count = opt.workers;
    const std::vector<std::int64_t> labels =
        knn::knn_classify(train, queries, opt.k, parse_metric(opt.metric), config);

    std::ostringstream out;
    out << "query_index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
    write_output(opt.out_path, out.str());
    return 0;
}

struct RetrieveOptions {
    std::string db_path, query_path, out_path;
    std::string metric = "euclidean";
    std::size_t k = 5;
    unsigned workers = 0;
};

int run_retrieve(const RetrieveOptions& opt) {
    const knn::DescriptorDatabase db = knn::read_descriptors_csv(opt.db_path);
    const knn::PointSet queries = knn::read_points_csv(opt.query_path);
    knn::BfConfig config;
    config.worker_count = opt.workers;
    const knn::VoteTally tally =
        knn::retrieve_vote(db, queries, opt.k, parse_metric(opt.metric), config);

    std::ostringstream out;
    out << "rank,image_id,score\n";
    for (std::size_t r = 0; r < tally.ranking.size(); ++r) {
        const std::int64_t image = tally.ranking[r];
        out << r << ',' << image << ',' << tally.scores[static_cast<std::size_t>(image)] << '\n';
    }
    write_output(opt.out_path, out.str());
    return 0;
}

struct BenchOptions {
    std::string grid;
    std::vector<std::size_t> n_values, d_values;
    std::vector<std::string> methods{"bf", "kdt"};
    std::string metric = "euclidean";
    std::string out_path, json_path;
    std::size_t k = 20;
    std::size_t reps = 3;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    double time_budget = 120.0;
};

int run_bench(const BenchOptions& opt) {
    knn::BenchmarkConfig config = knn::BenchmarkConfig::default_grid();
    if (!opt.grid.empty() && opt.grid != "default")
        throw CLI::ValidationError("--grid", "the only named grid is 'default'");
    if (!opt.n_values.empty()) config.n_values = opt.n_values;
    if (!opt.d_values.empty()) config.d_values = opt.d_values;
    config.methods.clear();
    for (const std::string& name : opt.methods)
        config.methods.push_back(knn::parse_bench_method(name));
    config.metric = parse_metric(opt.metric);
    config.k = opt.k;
    config.repetitions = opt.reps;
    config.seed = opt.seed;
    config.worker_count = opt.workers;
    config.time_budget_seconds = opt.time_budget;

    const knn::BenchmarkReport report = knn::run_grid(config, &std::cerr);

    std::ostringstream csv;
    knn::write_report_csv(csv, report);
    write_output(opt.out_path, csv.str());
    if (!opt.json_path.empty()) {
        std::ostringstream json;
        knn::write_report_json(json, report);
        write_output(opt.json_path, json.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact k-nearest-neighbor search engine and applications"};
    app.require_subcommand(1);

    SearchOptions search;
    CLI::App* search_cmd = app.add_subcommand("search", "Exact KNN of query points in a reference set");
    search_cmd->add_option("--ref", search.ref_path, "Reference points CSV")->required();
    search_cmd->add_option("--query", search.query_path, "Query points CSV")->required();
    search_cmd->add_option("--k", search.k, "Neighbor count")->required();
    search_cmd->add_option("--metric", search.metric,
                           "euclidean|manhattan|chebyshev|mahalanobis:PATH");
    search_cmd->add_option("--method", search.method, "bf|kdtree");
    search_cmd->add_option("--workers", search.workers, "Worker threads (0 = auto)");
    search_cmd->add_option("--chunk-size", search.chunk_size, "Query rows per chunk (bf)");
    search_cmd->add_option("--leaf-size", search.leaf_size, "Leaf bucket size (kdtree)");
    search_cmd->add_option("--out", search.out_path, "Output CSV path (default stdout)");

    EntropyOptions entropy;
    CLI::App* entropy_cmd = app.add_subcommand("entropy", "k-th-neighbor entropy estimate of a sample");
    entropy_cmd->add_option("--in", entropy.in_path, "Sample points CSV")->required();
    entropy_cmd->add_option("--k", entropy.k, "Neighbor order");
    entropy_cmd->add_option("--variant", entropy.variant, "corrected|literal");
    entropy_cmd->add_option("--policy", entropy.policy,
                            "Duplicate-point policy: error|jitter");
    entropy_cmd->add_option("--seed", entropy.seed, "Jitter seed");
    entropy_cmd->add_option("--workers", entropy.workers, "Worker threads (0 = auto)");
    entropy_cmd->add_option("--out", entropy.out_path, "Output JSON path (default stdout)");

    ClassifyOptions classify;
    CLI::App* classify_cmd = app.add_subcommand("classify", "KNN majority-vote classification");
    classify_cmd->add_option("--train", classify.train_path,
                             "Training CSV (trailing integer label column)")->required();
    classify_cmd->add_option("--query", classify.query_path, "Query points CSV")->required();
    classify_cmd->add_option("--k", classify.k, "Neighbor count")->required();
    classify_cmd->add_option("--metric", classify.metric,
                             "euclidean|manhattan|chebyshev|mahalanobis:PATH");
    classify_cmd->add_option("--workers", classify.workers, "Worker threads (0 = auto)");
    classify_cmd->add_option("--out", classify.out_path, "Output CSV path (default stdout)");

    RetrieveOptions retrieve;
    CLI::App* retrieve_cmd =
        app.add_subcommand("retrieve", "Descriptor-voting image retrieval");
    retrieve_cmd->add_option("--db", retrieve.db_path,
                             "Descriptor CSV (leading image-id column)")->required();
    retrieve_cmd->add_option("--query", retrieve.query_path, "Query descriptors CSV")->required();
    retrieve_cmd->add_option("--k", retrieve.k, "Neighbors per query descriptor");
    retrieve_cmd->add_option("--metric", retrieve.metric,
                             "euclidean|manhattan|chebyshev|mahalanobis:PATH");
    retrieve_cmd->add_option("--workers", retrieve.workers, "Worker threads (0 = auto)");
    retrieve_cmd->add_option("--out", retrieve.out_path, "Output CSV path (default stdout)");

    BenchOptions bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Timing grid over (n, d) cells");
    bench_cmd->add_option("--grid", bench.grid, "Named grid ('default': n {1200,2400}, d {8..96})");
    bench_cmd->add_option("--n-values", bench.n_values, "Point counts per cell")->delimiter(',');
    bench_cmd->add_option("--d-values", bench.d_values, "Dimensions per cell")->delimiter(',');
    bench_cmd->add_option("--methods", bench.methods, "Subset of bf,kdt")->delimiter(',');
    bench_cmd->add_option("--metric", bench.metric,
                          "euclidean|manhattan|chebyshev|mahalanobis:PATH");
    bench_cmd->add_option("--k", bench.k, "Neighbor count");
    bench_cmd->add_option("--reps", bench.reps, "Repetitions per cell");
    bench_cmd->add_option("--seed", bench.seed, "Master seed for point generation");
    bench_cmd->add_option("--workers", bench.workers, "Worker threads (0 = auto)");
    bench_cmd->add_option("--time-budget", bench.time_budget,
                          "Per-cell seconds before a row is skipped");
    bench_cmd->add_option("--out", bench.out_path, "Report CSV path (default stdout)");
    bench_cmd->add_option("--json", bench.json_path, "Also write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (search_cmd->parsed()) return run_search(search);
        if (entropy_cmd->parsed()) return run_entropy(entropy);
        if (classify_cmd->parsed()) return run_classify(classify);
        if (retrieve_cmd->parsed()) return run_retrieve(retrieve);
        if (bench_cmd->parsed()) return run_bench(bench);
    } catch (const knn::CsvError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
