// icdkm: command-line front end for the ICD-aware k-means library.
//
//   icdkm generate   synthetic Gaussian blobs -> dataset CSV
//   icdkm sweep-k    Calinski-Harabasz / elbow scan over k
//   icdkm cluster    one clustering run, writes labels and centroids
//   icdkm benchmark  paired repetitions of both variants against ground truth
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icdkm/engine.hpp"
#include "icdkm/harness.hpp"
#include "icdkm/ingest.hpp"
#include "icdkm/kselect.hpp"
#include "icdkm/report.hpp"
#include "icdkm/synth.hpp"

namespace fs = std::filesystem;
using namespace icdkm;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataSource {
    std::string path;
    std::string builtin;
    std::string data_dir;
    bool normalize = false;

    void add_options(CLI::App& cmd) {
        auto* p = cmd.add_option("--data", path, "Dataset CSV (header row, optional final 'label' column)");
        auto* b = cmd.add_option("--builtin", builtin, "Vendored benchmark dataset")
                      ->check(CLI::IsMember({"iris", "wine", "breast-cancer"}));
        p->excludes(b);
        cmd.add_option("--data-dir", data_dir, "Directory holding the vendored benchmark files");
        cmd.add_flag("--normalize", normalize, "Min-max scale every feature to [0, 1] first");
    }

    Dataset load(std::vector<std::string>* warnings = nullptr) const {
        Dataset data;
        if (!builtin.empty()) {
            const auto which = *builtin_from_name(builtin);
            const fs::path dir = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
            if (!fs::exists(dir / builtin_filename(which))) {
                throw UsageError("builtin dataset file not found: " + (dir / builtin_filename(which)).string());
            }
            data = load_builtin(which, dir);
            if (warnings) {
                for (const auto& w : validate_expected(data, which).warnings) warnings->push_back(w);
            }
        } else if (!path.empty()) {
            if (!fs::exists(path)) throw UsageError("dataset not found: " + path);
            data = load_dataset_csv(path);
        } else {
            throw UsageError("one of --data or --builtin is required");
        }
        data.check();
        return normalize ? min_max_normalize(data) : data;
    }

    void describe(Metadata& meta) const {
        meta.emplace_back("data", path);
        meta.emplace_back("builtin", builtin);
        meta.emplace_back("normalize", normalize ? "true" : "false");
    }
};

std::string joined_args(int argc, char** argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) out += ' ';
        out += argv[i];
    }
    return out;
}

Metadata base_metadata(const std::string& command, const std::string& args) {
    return {{"tool", "icdkm"}, {"version", kVersion}, {"command", command}, {"arguments", args}};
}

DistanceKind parse_distance(const std::string& name, double p) {
    if (name == "euclidean") return Euclidean{};
    if (name == "manhattan") return Manhattan{};
    if (name == "chebyshev") return Chebyshev{};
    return Minkowski{p};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ICD-aware k-means clustering and benchmark tool"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    const std::string args = joined_args(argc, argv);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic Gaussian dataset");
    std::size_t gen_dims = 2;
    double gen_variance = 0.5;
    std::size_t gen_points = 100;
    std::uint64_t gen_seed = 7;
    std::string gen_out = "synthetic.csv";
    bool gen_any_dims = false;
    gen->add_option("--dims", gen_dims, "Dimension (2 or 3)")->check(CLI::PositiveNumber);
    gen->add_option("--variance", gen_variance, "Per-coordinate noise variance")->check(CLI::PositiveNumber);
    gen->add_option("--points-per-cluster", gen_points, "Points in each of the 3 clusters")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "Output CSV path (metadata goes to <out>.meta)");
    gen->add_flag("--allow-any-dims", gen_any_dims, "Permit dimensions other than 2 and 3");

    // sweep-k
    auto* sweep = app.add_subcommand("sweep-k", "Score k values with Calinski-Harabasz and the elbow rule");
    DataSource sweep_src;
    sweep_src.add_options(*sweep);
    std::size_t sweep_min = 2, sweep_max = 6, sweep_runs = 10;
    std::uint64_t sweep_seed = 0;
    std::string sweep_out;
    sweep->add_option("--k-min", sweep_min, "Smallest k")->check(CLI::Range(2, 1 << 20));
    sweep->add_option("--k-max", sweep_max, "Largest k")->check(CLI::Range(2, 1 << 20));
    sweep->add_option("--runs", sweep_runs, "Initializations per k (best inertia kept)")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_seed, "RNG seed");
    sweep->add_option("--out", sweep_out, "Directory for sweep_k.csv and metadata.txt");

    // cluster
    auto* clus = app.add_subcommand("cluster", "Run one clustering and write labels and centroids");
    DataSource clus_src;
    clus_src.add_options(*clus);
    std::size_t clus_k = 0, clus_iters = 300;
    std::string clus_variant = "proposed", clus_distance = "euclidean";
    double clus_p = 2.0;
    std::uint64_t clus_seed = 0;
    std::string clus_out = "cluster_out";
    clus->add_option("--k", clus_k, "Number of clusters")->required()->check(CLI::Range(2, 1 << 20));
    clus->add_option("--variant", clus_variant, "traditional | proposed")
        ->check(CLI::IsMember({"traditional", "proposed"}));
    clus->add_option("--distance", clus_distance, "Assignment distance for the traditional variant")
        ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev", "minkowski"}));
    clus->add_option("--p", clus_p, "Minkowski exponent (>= 1)")->check(CLI::Range(1.0, 1e6));
    clus->add_option("--seed", clus_seed, "Initialization seed");
    clus->add_option("--max-iter", clus_iters, "Iteration cap")->check(CLI::PositiveNumber);
    clus->add_option("--out", clus_out, "Output directory");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "Paired benchmark of the proposed and traditional variants");
    DataSource bench_src;
    bench_src.add_options(*bench);
    std::size_t bench_k = 0, bench_reps = 100, bench_threads = 1, bench_iters = 300;
    std::uint64_t bench_seed = 42;
    std::string bench_out = "benchmark_out";
    bench->add_option("--k", bench_k, "Number of clusters (default: labelled class count)");
    bench->add_option("--reps", bench_reps, "Repetitions")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
    bench->add_option("--seed", bench_seed, "Master seed");
    bench->add_option("--threads", bench_threads, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--max-iter", bench_iters, "Iteration cap per run")->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            if (!gen_any_dims && gen_dims != 2 && gen_dims != 3) {
                throw UsageError("--dims must be 2 or 3 (use --allow-any-dims to override)");
            }
            auto spec = SynthSpec::with_defaults(gen_dims, gen_variance, gen_seed);
            spec.points_per_cluster = gen_points;
            const auto data = generate(spec);
            write_dataset_csv(gen_out, data);
            auto meta = base_metadata("generate", args);
            meta.emplace_back("dims", std::to_string(spec.dims));
            meta.emplace_back("variance", format_full(spec.variance));
            meta.emplace_back("clusters", std::to_string(spec.clusters));
            meta.emplace_back("points_per_cluster", std::to_string(spec.points_per_cluster));
            meta.emplace_back("seed", std::to_string(spec.seed));
            for (std::size_t g = 0; g < spec.offsets.rows(); ++g) {
                std::string row;
                for (double v : spec.offsets.row(g)) row += (row.empty() ? "" : " ") + format_full(v);
                meta.emplace_back("offset_" + std::to_string(g), row);
            }
            write_metadata(gen_out + ".meta", meta);
            std::cout << "wrote " << data.size() << "x" << data.dims() << " dataset to " << gen_out
                      << "\n" << data.provenance << "\n";
            return 0;
        }

        if (*sweep) {
            if (sweep_min >= sweep_max) throw UsageError("--k-min must be smaller than --k-max");
            const auto data = sweep_src.load();
            const auto result = sweep_k(data.features, sweep_min, sweep_max, sweep_runs, sweep_seed);
            std::cout << std::left << std::setw(6) << "k" << std::setw(22) << "calinski_harabasz"
                      << "inertia\n";
            for (std::size_t i = 0; i < result.k_values.size(); ++i) {
                std::cout << std::setw(6) << result.k_values[i] << std::setw(22)
                          << format_fixed(result.ch_scores[i]) << format_fixed(result.inertias[i]) << "\n";
            }
            std::cout << "best_k_ch=" << result.best_k_ch << "\nbest_k_elbow=" << result.best_k_elbow << "\n";
            if (!sweep_out.empty()) {
                write_sweep_csv(fs::path(sweep_out) / "sweep_k.csv", result);
                auto meta = base_metadata("sweep-k", args);
                sweep_src.describe(meta);
                meta.emplace_back("dataset", data.provenance);
                meta.emplace_back("k_min", std::to_string(sweep_min));
                meta.emplace_back("k_max", std::to_string(sweep_max));
                meta.emplace_back("runs_per_k", std::to_string(sweep_runs));
                meta.emplace_back("seed", std::to_string(sweep_seed));
                meta.emplace_back("best_k_ch", std::to_string(result.best_k_ch));
                meta.emplace_back("best_k_elbow", std::to_string(result.best_k_elbow));
                write_metadata(fs::path(sweep_out) / "metadata.txt", meta);
            }
            return 0;
        }

        if (*clus) {
            const auto data = clus_src.load();
            if (clus_k > data.size()) {
                throw UsageError("--k " + std::to_string(clus_k) + " exceeds the " +
                                 std::to_string(data.size()) + " points in the dataset");
            }
            auto config = default_config(data.features, clus_k, clus_seed);
            config.max_iterations = clus_iters;
            config.distance = parse_distance(clus_distance, clus_p);
            const auto variant = clus_variant == "traditional" ? Variant::Traditional : Variant::ProposedICD;
            const auto result =
                run(data.features, config, variant, initialize_centroids(data.features, clus_k, clus_seed));

            const fs::path out = clus_out;
            write_assignment(out / "assignments.csv", result.assignment);
            write_centroids(out / "centroids.csv", result.centroids);
            auto meta = base_metadata("cluster", args);
            clus_src.describe(meta);
            meta.emplace_back("dataset", data.provenance);
            meta.emplace_back("k", std::to_string(clus_k));
            meta.emplace_back("variant", to_string(variant));
            meta.emplace_back("distance", to_string(config.distance));
            meta.emplace_back("seed", std::to_string(clus_seed));
            meta.emplace_back("max_iterations", std::to_string(config.max_iterations));
            meta.emplace_back("convergence_tol", format_full(config.convergence_tol));
            meta.emplace_back("iterations_used", std::to_string(result.iterations_used));
            meta.emplace_back("converged", result.converged ? "true" : "false");
            meta.emplace_back("wcd", format_full(result.wcd));
            meta.emplace_back("icd", format_full(result.icd));
            meta.emplace_back("relative_cost", format_full(result.relative_cost));
            write_metadata(out / "metadata.txt", meta);

            std::cout << "WCD=" << format_fixed(result.wcd) << "\nICD=" << format_fixed(result.icd)
                      << "\nrelative_cost=" << format_fixed(result.relative_cost, 9)
                      << "\niterations=" << result.iterations_used
                      << "\nconverged=" << (result.converged ? "true" : "false") << "\n";
            return 0;
        }

        if (*bench) {
            std::vector<std::string> warnings;
            DataSource raw = bench_src;
            raw.normalize = false;
            const auto data = raw.load(&warnings);
            if (!data.has_labels()) {
                std::cerr << "error: benchmark needs a labelled dataset (final 'label' column)\n";
                return kExitRuntime;
            }
            ExperimentSpec spec;
            spec.k = bench_k == 0 ? data.num_classes() : bench_k;
            spec.repetitions = bench_reps;
            spec.master_seed = bench_seed;
            spec.normalize = bench_src.normalize;
            spec.threads = bench_threads;
            spec.engine_config.max_iterations = bench_iters;
            const auto result = run_experiment(data, spec);
            for (const auto& w : result.warnings) warnings.push_back(w);

            const fs::path out = bench_out;
            write_summary_csv(out / "summary.csv", result);
            {
                std::ofstream txt(out / "summary.txt", std::ios::binary);
                txt << summary_table(result);
            }
            write_accuracy_series(out / "accuracy_series.csv", result);
            const auto& last = result.per_rep.back();
            write_confusion(out / "confusion_proposed.csv", last.proposed.confusion, data.class_names);
            write_confusion(out / "confusion_traditional.csv", last.traditional.confusion, data.class_names);

            const auto summary = paired_summary(result);
            auto meta = base_metadata("benchmark", args);
            bench_src.describe(meta);
            meta.emplace_back("dataset", result.dataset);
            meta.emplace_back("k", std::to_string(spec.k));
            meta.emplace_back("repetitions", std::to_string(spec.repetitions));
            meta.emplace_back("master_seed", std::to_string(spec.master_seed));
            meta.emplace_back("seed_derivation", "splitmix64(master_seed + (rep+1)*0x9E3779B97F4A7C15)");
            meta.emplace_back("max_iterations", std::to_string(spec.engine_config.max_iterations));
            meta.emplace_back("convergence_tol", "1e-9 * bounding_box_diagonal");
            meta.emplace_back("mean_oa_difference", format_full(summary.mean_oa_difference));
            meta.emplace_back("proposed_wins", std::to_string(summary.proposed_wins));
            for (std::size_t i = 0; i < warnings.size(); ++i) {
                meta.emplace_back("warning_" + std::to_string(i), warnings[i]);
            }
            write_metadata(out / "metadata.txt", meta);

            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            std::cout << summary_table(result);
            std::cout << "mean OA difference (proposed - traditional): "
                      << format_fixed(summary.mean_oa_difference) << "\n"
                      << "proposed >= traditional in " << summary.proposed_wins << "/"
                      << summary.repetitions << " repetitions\n"
                      << "OA proposed    min/max/sd: " << format_fixed(summary.proposed.min) << " "
                      << format_fixed(summary.proposed.max) << " " << format_fixed(summary.proposed.stddev) << "\n"
                      << "OA traditional min/max/sd: " << format_fixed(summary.traditional.min) << " "
                      << format_fixed(summary.traditional.max) << " "
                      << format_fixed(summary.traditional.stddev) << "\n"
                      << "reports written to " << out.string() << "\n";
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
