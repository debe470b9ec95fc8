#ifndef MALKIT_HARNESS_EXPERIMENT_HPP
#define MALKIT_HARNESS_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "malkit/cpc/trainer.hpp"
#include "malkit/harness/csv_io.hpp"
#include "malkit/harness/synth.hpp"

namespace malkit::harness {

inline constexpr const char* kMalkitVersion = "0.1.0";

// Everything a run needs, loadable from JSON and echoed into the manifest.
struct ExperimentConfig {
    std::string name = "experiment";

    // dataset source: exactly one of synth / temporal / csv
    enum class Source { synth, temporal, csv };
    Source source = Source::synth;
    SynthSpec synth;
    TemporalSynthSpec temporal;
    std::string features_csv, labels_csv, labelmap_json;

    std::string feature = "raw";   // raw | cpc (cpc needs sequence data)
    std::string reducer = "none";  // none pca32 ae32 pca2 ae2 tsne2
                                   // pca32_tsne2 ae32_tsne2
    std::string metric = "auto";   // auto: euclidean iff AL dim is 2
    std::vector<double> budgets{1, 2, 5, 10, 20, 50, 100};
    std::size_t folds = 5;
    std::size_t repeats = 5;
    std::string policy = "medoid_labels";
    std::uint64_t master_seed = 0;
    bool zscore_al = true;
    bool zscore_classifier = true;

    // classifier grid; empty gamma list means the data-driven default
    std::vector<double> grid_c{0.1, 1.0, 10.0, 100.0};
    std::vector<double> grid_gamma;

    // stage knobs sized for desk-scale runs
    std::size_t ae_hidden = 64;
    std::size_t ae_epochs = 500;
    double tsne_perplexity = 30.0;
    std::size_t tsne_iters = 500;
    cpc::CpcConfig cpc;  // input_dim is taken from the data
    cpc::TrainSchedule cpc_schedule;

    std::string out_dir = "out";
    bool cache_affinity = false;
};

// Parses and validates; errors name the offending key. Unknown keys are
// rejected so typos cannot silently fall back to defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
// Full echo of every field, defaults included.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
// FNV-1a over the canonical JSON echo, excluding output-location fields.
std::string config_hash(const ExperimentConfig& cfg);

// Deterministic per-stage seed derivation: base is the master seed, the tag
// spells out the cell coordinates.
std::uint64_t mix_seed(std::uint64_t base, const std::string& tag);

// One of the enumerated reducer pipelines applied to a feature matrix.
// Seeded stages (autoencoder, t-SNE) draw from `seed`.
struct ReducerKnobs {
    std::size_t ae_hidden = 64;
    std::size_t ae_epochs = 500;
    double tsne_perplexity = 30.0;
    std::size_t tsne_iters = 500;
};
Tensor2 reduce_features(const Tensor2& data, const std::string& reducer,
                        std::uint64_t seed, const ReducerKnobs& knobs = {});

struct CellFailure {
    std::string cell;
    std::string message;
};

struct ExperimentReport {
    std::vector<ResultRecord> records;   // everything now in report.csv
    std::vector<CellFailure> failures;
    std::string hash;
    std::string report_path;
    std::size_t cells_resumed = 0;  // records found on disk and kept
};

// Builds the dataset, walks the repeat x fold x budget x strategy x task
// grid, and appends one record per cell to <out_dir>/report.csv as soon as
// it is scored, so an interrupted run resumes where it stopped. Existing
// records must carry this config's hash. Cell errors are collected, not
// fatal. manifest.json echoes the config with hash, version and timestamps.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_EXPERIMENT_HPP
