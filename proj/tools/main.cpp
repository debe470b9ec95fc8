// malkit: clustering-driven active learning for speech emotion features.
// Subcommands cover the pipeline end to end: synthetic data, log-mel
// functionals, CPC training, dimensionality reduction, medoid query plans,
// full experiment sweeps, report aggregation, and a quick self-test.
//
// Exit codes: 0 ok, 1 input error (bad flags, bad files, bad config),
// 2 internal error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "malkit/audio/functionals.hpp"
#include "malkit/audio/logmel.hpp"
#include "malkit/audio/wav.hpp"
#include "malkit/audio/zscore.hpp"
#include "malkit/cpc/trainer.hpp"
#include "malkit/eval/folds.hpp"
#include "malkit/harness/aggregate.hpp"
#include "malkit/harness/csv_io.hpp"
#include "malkit/harness/experiment.hpp"
#include "malkit/harness/labelmap.hpp"
#include "malkit/harness/selfcheck.hpp"
#include "malkit/harness/synth.hpp"
#include "malkit/mal/affinity.hpp"
#include "malkit/mal/kmedoids.hpp"
#include "malkit/mal/query_plan.hpp"

namespace {

using namespace malkit;

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// ---------------------------------------------------------------- synth --

struct SynthArgs {
    harness::SynthSpec spec;
    std::string out_features, out_labels;
};

void add_synth(CLI::App& app, SynthArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "synth", "Write a synthetic blob dataset as features.csv/labels.csv");
    cmd->add_option("--out-features", args.out_features, "features csv path")
        ->required();
    cmd->add_option("--out-labels", args.out_labels, "labels csv path")
        ->required();
    cmd->add_option("--blobs", args.spec.blobs, "number of Gaussian blobs");
    cmd->add_option("--per-blob", args.spec.per_blob, "samples per blob");
    cmd->add_option("--dim", args.spec.dim, "feature dimensionality");
    cmd->add_option("--separation", args.spec.separation,
                    "center distance in sigma units");
    cmd->add_option("--label-noise", args.spec.label_noise,
                    "label flip probability in [0,1)");
    cmd->add_option("--seed", args.spec.seed, "generator seed");
    cmd->callback([&args] {
        harness::Dataset ds = harness::synth_dataset(args.spec);
        harness::write_features_csv(args.out_features, ds.features);
        std::vector<std::pair<std::string, std::string>> rows(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i)
            rows[i] = {ds.features.ids[i],
                       harness::quadrant_emotion(ds.valence[i],
                                                 ds.arousal[i])};
        harness::write_labels_csv(args.out_labels, rows);
        std::cout << "wrote " << ds.size() << " utterances to "
                  << args.out_features << " and " << args.out_labels << "\n";
    });
}

// ------------------------------------------------------------- features --

struct FeaturesArgs {
    std::vector<std::string> wavs;
    std::string out;
    int mels = 40;
};

void add_features(CLI::App& app, FeaturesArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "features", "Log-mel functionals (600-dim at 40 mels) from wav files");
    cmd->add_option("wavs", args.wavs, "mono wav files")->required();
    cmd->add_option("--out", args.out, "output features csv")->required();
    cmd->add_option("--mels", args.mels, "mel band count");
    cmd->callback([&args] {
        FeatureMatrix out;
        for (const std::string& path : args.wavs) {
            audio::WavData wav = audio::read_wav(path);
            audio::LogMelConfig mel;
            mel.num_mel = args.mels;
            Tensor2 frames =
                audio::wav_to_logmel(wav.samples, wav.sample_rate, mel);
            std::vector<double> row = audio::functionals(frames);
            if (out.values.cols == 0) out.values = Tensor2(0, row.size());
            if (row.size() != out.values.cols)
                throw std::runtime_error("inconsistent feature width");
            out.ids.push_back(stem_of(path));
            out.values.data.insert(out.values.data.end(), row.begin(),
                                   row.end());
            ++out.values.rows;
        }
        harness::write_features_csv(args.out, out);
        std::cout << "wrote " << out.size() << " x " << out.dim()
                  << " features to " << args.out << "\n";
    });
}

// ------------------------------------------------------------ train-cpc --

struct TrainCpcArgs {
    std::vector<std::string> wavs;
    std::string model_out;
    std::string features_out;
    cpc::CpcConfig config;
    cpc::TrainSchedule schedule;
    std::uint64_t seed = 0;
    int mels = 40;
};

void add_train_cpc(CLI::App& app, TrainCpcArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "train-cpc",
        "Train contrastive-predictive features on log-mel sequences");
    cmd->add_option("wavs", args.wavs, "mono wav files")->required();
    cmd->add_option("--model", args.model_out, "checkpoint output path")
        ->required();
    cmd->add_option("--out-features", args.features_out,
                    "per-utterance feature csv (optional)");
    cmd->add_option("--mels", args.mels, "mel band count");
    cmd->add_option("--hidden", args.config.hidden_dim, "encoder/GRU width");
    cmd->add_option("--steps", args.config.num_steps, "prediction horizon");
    cmd->add_option("--dropout", args.config.encoder_dropout,
                    "encoder dropout");
    cmd->add_option("--lr", args.schedule.initial_lr, "initial Adam rate");
    cmd->add_option("--epochs", args.schedule.max_epochs, "epoch cap");
    cmd->add_option("--batch", args.schedule.batch_size, "minibatch size");
    cmd->add_option("--segment", args.schedule.segment_frames,
                    "training crop length in frames");
    cmd->add_option("--seed", args.seed, "training seed");
    cmd->callback([&args] {
        std::vector<Tensor2> seqs;
        std::vector<std::string> ids;
        for (const std::string& path : args.wavs) {
            audio::WavData wav = audio::read_wav(path);
            audio::LogMelConfig mel;
            mel.num_mel = args.mels;
            seqs.push_back(
                audio::wav_to_logmel(wav.samples, wav.sample_rate, mel));
            ids.push_back(stem_of(path));
        }
        args.config.input_dim = static_cast<std::size_t>(args.mels);
        cpc::CpcTrainResult result =
            cpc::train_cpc(seqs, args.config, args.schedule, args.seed);
        cpc::save_cpc_model(args.model_out, result.model);
        std::cout << "best validation loss "
                  << result.val_curve[result.best_epoch] << " at epoch "
                  << result.best_epoch << "; model saved to "
                  << args.model_out << "\n";
        if (!args.features_out.empty()) {
            FeatureMatrix fm;
            fm.ids = ids;
            fm.values = Tensor2(seqs.size(), args.config.hidden_dim);
            for (std::size_t u = 0; u < seqs.size(); ++u) {
                std::vector<double> f =
                    cpc::extract_cpc_features(result.model, seqs[u]);
                for (std::size_t c = 0; c < f.size(); ++c)
                    fm.values.at(u, c) = f[c];
            }
            harness::write_features_csv(args.features_out, fm);
            std::cout << "wrote features to " << args.features_out << "\n";
        }
    });
}

// --------------------------------------------------------------- reduce --

struct ReduceArgs {
    std::string features_in, out, reducer = "pca2";
    std::uint64_t seed = 0;
    harness::ReducerKnobs knobs;
    bool no_zscore = false;
};

void add_reduce(CLI::App& app, ReduceArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "reduce", "Apply a reducer pipeline to a feature csv");
    cmd->add_option("--features", args.features_in, "input features csv")
        ->required();
    cmd->add_option("--out", args.out, "output features csv")->required();
    cmd->add_option("--reducer", args.reducer,
                    "none|pca32|ae32|pca2|ae2|tsne2|pca32_tsne2|ae32_tsne2");
    cmd->add_option("--seed", args.seed, "seed for ae/t-sne");
    cmd->add_option("--ae-hidden", args.knobs.ae_hidden, "autoencoder width");
    cmd->add_option("--ae-epochs", args.knobs.ae_epochs, "autoencoder epochs");
    cmd->add_option("--perplexity", args.knobs.tsne_perplexity,
                    "t-sne perplexity");
    cmd->add_option("--tsne-iters", args.knobs.tsne_iters, "t-sne iterations");
    cmd->add_flag("--no-zscore", args.no_zscore,
                  "skip per-column standardization");
    cmd->callback([&args] {
        FeatureMatrix fm = harness::read_features_csv(args.features_in);
        Tensor2 data = fm.values;
        if (!args.no_zscore)
            data = audio::zscore_apply(data, audio::zscore_fit(data));
        fm.values =
            harness::reduce_features(data, args.reducer, args.seed, args.knobs);
        harness::write_features_csv(args.out, fm);
        std::cout << "wrote " << fm.size() << " x " << fm.dim() << " to "
                  << args.out << "\n";
    });
}

// ------------------------------------------------------------- mal-plan --

struct MalPlanArgs {
    std::string features_in, metric = "auto", policy = "medoid_labels";
    double budget = 5.0;
    std::uint64_t seed = 0;
    std::size_t k = 0;  // 0: N/3 default
    bool no_zscore = false;
};

void add_mal_plan(CLI::App& app, MalPlanArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "mal-plan",
        "Cluster a feature csv and print the ordered query indices");
    cmd->add_option("--features", args.features_in, "input features csv")
        ->required();
    cmd->add_option("--budget", args.budget, "label budget in percent");
    cmd->add_option("--metric", args.metric, "auto|euclidean|cosine");
    cmd->add_option("--policy", args.policy, "medoid_labels|cluster_labels");
    cmd->add_option("--seed", args.seed, "clustering/fill seed");
    cmd->add_option("--k", args.k, "cluster count (default N/3)");
    cmd->add_flag("--no-zscore", args.no_zscore,
                  "skip per-column standardization");
    cmd->callback([&args] {
        FeatureMatrix fm = harness::read_features_csv(args.features_in);
        Tensor2 data = fm.values;
        if (!args.no_zscore)
            data = audio::zscore_apply(data, audio::zscore_fit(data));
        mal::Metric metric =
            args.metric == "auto"
                ? (data.cols == 2 ? mal::Metric::euclidean
                                  : mal::Metric::cosine)
                : mal::metric_from_string(args.metric);
        mal::AffinityMatrix aff = mal::affinity(data, metric);
        std::size_t k = args.k ? args.k : mal::default_k(fm.size());
        mal::ClusteringResult clusters =
            mal::k_medoids(aff, k, harness::mix_seed(args.seed, "kmedoids"));
        std::size_t m = harness::budget_to_count(fm.size(), args.budget);
        mal::QueryPlan plan =
            mal::query_plan(clusters, m, mal::policy_from_string(args.policy),
                            harness::mix_seed(args.seed, "plan"));
        for (std::size_t idx : plan.indices) std::cout << idx << "\n";
    });
}

// ------------------------------------------------------------------ run --

struct RunArgs {
    std::string config_path;
    std::string out_dir_override;
};

void add_run(CLI::App& app, RunArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "run", "Run the experiment grid described by a JSON config");
    cmd->add_option("--config", args.config_path, "experiment config json")
        ->required();
    cmd->add_option("--out-dir", args.out_dir_override,
                    "override the config's out_dir");
    cmd->callback([&args] {
        harness::ExperimentConfig cfg =
            harness::load_config(args.config_path);
        if (!args.out_dir_override.empty())
            cfg.out_dir = args.out_dir_override;
        harness::ExperimentReport report = harness::run_experiment(cfg);
        std::cout << report.records.size() << " records ("
                  << report.cells_resumed << " resumed) in "
                  << report.report_path << "\n";
        if (!report.failures.empty()) {
            std::cerr << report.failures.size()
                      << " cell failures (see manifest.json); first: "
                      << report.failures[0].cell << ": "
                      << report.failures[0].message << "\n";
            if (report.records.empty())
                throw std::runtime_error("every cell failed");
        }
    });
}

// ------------------------------------------------------------ aggregate --

struct AggregateArgs {
    std::string report_path;
    std::string group_by = "task,feature,reducer,budget,strategy";
    std::string contrast_by = "task,budget";
    std::string out, contrast_out;
};

void add_aggregate(CLI::App& app, AggregateArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "aggregate", "Summarize a report.csv into means and paired contrasts");
    cmd->add_option("--report", args.report_path, "report.csv path")
        ->required();
    cmd->add_option("--group-by", args.group_by, "comma-separated key list");
    cmd->add_option("--contrast-by", args.contrast_by,
                    "keys for the mal-vs-random contrast");
    cmd->add_option("--out", args.out, "summary csv (stdout when omitted)");
    cmd->add_option("--contrast-out", args.contrast_out,
                    "contrast csv (stdout when omitted)");
    cmd->callback([&args] {
        std::vector<harness::ResultRecord> records =
            harness::read_report_csv(args.report_path);
        harness::GroupedSummary summary =
            harness::group_means(records, split_csv_list(args.group_by));
        harness::ContrastTable table = harness::strategy_contrast(
            records, split_csv_list(args.contrast_by));

        if (args.out.empty())
            harness::write_group_csv(std::cout, summary);
        else
            harness::write_group_csv(args.out, summary);
        if (args.contrast_out.empty()) {
            std::cout << "\n";
            harness::write_contrast_csv(std::cout, table);
        } else {
            harness::write_contrast_csv(args.contrast_out, table);
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"medoid-based active learning toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    FeaturesArgs features_args;
    TrainCpcArgs train_cpc_args;
    ReduceArgs reduce_args;
    MalPlanArgs mal_plan_args;
    RunArgs run_args;
    AggregateArgs aggregate_args;

    add_synth(app, synth_args);
    add_features(app, features_args);
    add_train_cpc(app, train_cpc_args);
    add_reduce(app, reduce_args);
    add_mal_plan(app, mal_plan_args);
    add_run(app, run_args);
    add_aggregate(app, aggregate_args);

    CLI::App* selfcheck_cmd =
        app.add_subcommand("selfcheck", "Run the built-in oracle quick suite");
    int selfcheck_failures = 0;
    selfcheck_cmd->callback([&selfcheck_failures] {
        selfcheck_failures = malkit::harness::selfcheck(std::cout);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return selfcheck_failures == 0 ? 0 : 2;
}
