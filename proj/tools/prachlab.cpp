// SPDX-License-Identifier: Apache-2.0
//
// prachlab: collision detection for the cellular-IoT random access channel
// Copyright (C) 2026 prachlab contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------
//
// Command-line front end. Exit codes:
//   0 success
//   2 usage error (unknown subcommand or bad flag)
//   3 missing or unreadable file
//   4 schema mismatch (wrong columns, wrong model format)
//   5 parse error (malformed value in a config, CSV or model file)
//   7 internal or runtime failure

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prach/balance.hpp"
#include "prach/bench.hpp"
#include "prach/classifiers.hpp"
#include "prach/dataset.hpp"
#include "prach/manifest.hpp"
#include "prach/metrics.hpp"
#include "prach/mlp.hpp"
#include "prach/quantize.hpp"
#include "prach/rng.hpp"
#include "prach/simulator.hpp"

namespace {

using namespace prach;

constexpr int kExitUsage = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitSchema = 4;
constexpr int kExitParse = 5;
constexpr int kExitInternal = 7;

std::string manifest_path(const std::string& artifact) { return artifact + ".manifest.json"; }

// ----------------------------------------------------------------- helpers

struct ModelFile {
    enum class Type { baseline, mlp, quantized } type;
    std::optional<BaselineModel> baseline;
    std::optional<MlpModel> mlp;
    std::optional<QuantizedModel> quantized;
};

ModelFile load_any_model(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open model file: " + path);
    std::string head(256, '\0');
    probe.read(head.data(), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(probe.gcount()));

    ModelFile mf{ModelFile::Type::baseline, {}, {}, {}};
    if (head.find("prachlab-mlp") != std::string::npos) {
        mf.type = ModelFile::Type::mlp;
        mf.mlp = load_mlp(path);
    } else if (head.find("prachlab-quantized") != std::string::npos) {
        mf.type = ModelFile::Type::quantized;
        mf.quantized = load_quantized(path);
    } else if (head.find("prachlab-baseline") != std::string::npos) {
        mf.type = ModelFile::Type::baseline;
        mf.baseline = load_baseline(path);
    } else {
        throw SchemaError(path + ": unrecognized model file format");
    }
    return mf;
}

Eigen::VectorXi model_predict_labels(const ModelFile& mf, const Eigen::MatrixXd& X) {
    switch (mf.type) {
        case ModelFile::Type::baseline: return predict_labels(*mf.baseline, X);
        case ModelFile::Type::mlp: return mf.mlp->predict_labels(X);
        case ModelFile::Type::quantized: return quantized_predict_labels(*mf.quantized, X);
    }
    throw std::logic_error("unreachable");
}

void write_metrics_csv(const std::string& path,
                       const std::vector<std::tuple<std::string, std::string, MetricsReport>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "model,scenario,precision,recall,specificity,balanced_accuracy\n";
    char buf[160];
    for (const auto& [model, scenario, m] : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f\n", model.c_str(), scenario.c_str(),
                      m.precision, m.recall, m.specificity, m.balanced_accuracy);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

void print_metrics_table(const std::vector<std::tuple<std::string, std::string, MetricsReport>>& rows) {
    std::printf("%-10s %-10s %10s %10s %12s %10s\n", "model", "scenario", "precision", "recall",
                "specificity", "bal.acc");
    for (const auto& [model, scenario, m] : rows)
        std::printf("%-10s %-10s %10.4f %10.4f %12.4f %10.4f\n", model.c_str(), scenario.c_str(), m.precision,
                    m.recall, m.specificity, m.balanced_accuracy);
}

FeatureMatrix load_features(const std::string& path) { return to_features(read_dataset(path)); }

/// deterministic calibration subset: `count` rows sampled without
/// replacement with a fixed seed
FeatureMatrix sample_calibration(const FeatureMatrix& data, int count, std::uint64_t seed) {
    const int n = static_cast<int>(data.rows());
    if (n <= count) return data;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (int i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.uniform_int(n - i)]);
    FeatureMatrix out;
    out.X.resize(count, data.X.cols());
    out.y.resize(count);
    for (int i = 0; i < count; ++i) {
        out.X.row(i) = data.X.row(idx[i]);
        out.y(i) = data.y(idx[i]);
    }
    return out;
}

// ------------------------------------------------------------- subcommands

int cmd_simulate(const std::string& config_path, std::uint64_t seed_override, bool has_seed,
                 const std::string& out_path, int jobs, const std::string& dump_pdp) {
    ScenarioConfig cfg = parse_scenario_config(config_path);
    if (has_seed) cfg.seed = seed_override;

    const ScenarioResult result = run_scenario(cfg, jobs, 0, !dump_pdp.empty());
    write_dataset(result.rows, out_path);

    long collisions = 0;
    for (const auto& r : result.rows) collisions += r.label;
    std::printf("simulate: %s ues=%d raos=%d rows=%zu collision_share=%.4f\n", cfg.label.c_str(),
                cfg.total_ues, cfg.n_raos, result.rows.size(),
                result.rows.empty() ? 0.0 : static_cast<double>(collisions) / result.rows.size());

    if (!dump_pdp.empty()) {
        std::ofstream out(dump_pdp, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + dump_pdp);
        out << "index,power\n";
        char buf[48];
        if (result.sample_pdp) {
            for (Eigen::Index i = 0; i < result.sample_pdp->power.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%ld,%.17g\n", static_cast<long>(i),
                              result.sample_pdp->power(i));
                out << buf;
            }
        }
    }

    RunManifest man;
    man.command = "simulate";
    man.config_path = config_path;
    man.seed = cfg.seed;
    man.add_input(config_path);
    man.add_output(out_path);
    if (!dump_pdp.empty()) man.add_output(dump_pdp);
    man.write(manifest_path(out_path));
    return 0;
}

int cmd_balance(const std::string& in_path, const std::string& out_path, int k, std::uint64_t seed) {
    const Dataset rows = read_dataset(in_path);
    const FeatureMatrix data = to_features(rows);
    const BalanceResult balanced = smote_tomek(data, k, seed);

    Dataset out_rows(balanced.data.rows());
    for (Eigen::Index i = 0; i < balanced.data.rows(); ++i) {
        DatasetRow row = rows[static_cast<std::size_t>(balanced.source_row[i])];
        for (int j = 0; j < kNumFeatures; ++j) row.features[j] = balanced.data.X(i, j);
        row.label = balanced.data.y(i);
        out_rows[static_cast<std::size_t>(i)] = row;
    }
    write_dataset(out_rows, out_path);

    long ones = 0;
    for (const auto& r : out_rows) ones += r.label;
    std::printf("balance: %zu -> %zu rows, class1 share %.4f\n", rows.size(), out_rows.size(),
                out_rows.empty() ? 0.0 : static_cast<double>(ones) / out_rows.size());

    RunManifest man;
    man.command = "balance";
    man.seed = seed;
    man.add_input(in_path);
    man.add_output(out_path);
    man.write(manifest_path(out_path));
    return 0;
}

struct TrainOptions {
    std::string model = "mlp";
    int epochs = 50;
    int batch = 256;
    double lr = 1e-3;
    double val_fraction = 0.1;
    int knn_k = 5;
    int trees = 100;
    int max_depth = 12;
    int min_leaf = 20;
    int logreg_epochs = 200;
    double logreg_lr = 0.1;
    double logreg_l2 = 1e-4;
};

int cmd_train(const std::string& in_path, const std::string& out_path, const TrainOptions& opt,
              std::uint64_t seed, int jobs) {
    const FeatureMatrix train = load_features(in_path);
    if (opt.model == "mlp") {
        MlpTrainConfig cfg;
        cfg.epochs = opt.epochs;
        cfg.batch_size = opt.batch;
        cfg.learning_rate = opt.lr;
        cfg.val_fraction = opt.val_fraction;
        cfg.seed = seed;
        const MlpTrainResult result = train_mlp(train, cfg);
        save_mlp(result.model, out_path);
        std::printf("train: mlp rows=%ld best_epoch=%d final_loss=%.4f\n", static_cast<long>(train.rows()),
                    result.best_epoch, result.epoch_loss.back());
    } else {
        BaselineHyper hyper;
        hyper.knn_k = opt.knn_k;
        hyper.forest_trees = opt.trees;
        hyper.tree_max_depth = opt.max_depth;
        hyper.tree_min_leaf = opt.min_leaf;
        hyper.logreg_epochs = opt.logreg_epochs;
        hyper.logreg_lr = opt.logreg_lr;
        hyper.logreg_l2 = opt.logreg_l2;
        const BaselineModel model = train_baseline(model_kind_from_string(opt.model), train, hyper, seed, jobs);
        save_baseline(model, out_path);
        std::printf("train: %s rows=%ld%s\n", opt.model.c_str(), static_cast<long>(train.rows()),
                    model.constant_label ? " (single-class input: constant classifier)" : "");
    }

    RunManifest man;
    man.command = "train";
    man.seed = seed;
    man.add_input(in_path);
    man.add_output(out_path);
    man.write(manifest_path(out_path));
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& test_path, const std::string& out_path,
             const std::string& model_name, const std::string& scenario) {
    const ModelFile mf = load_any_model(model_path);
    const FeatureMatrix test = load_features(test_path);
    const Eigen::VectorXi pred = model_predict_labels(mf, test.X);
    const MetricsReport m = evaluate(pred, test.y);

    std::vector<std::tuple<std::string, std::string, MetricsReport>> rows = {{model_name, scenario, m}};
    print_metrics_table(rows);
    if (!out_path.empty()) {
        write_metrics_csv(out_path, rows);
        RunManifest man;
        man.command = "eval";
        man.add_input(model_path);
        man.add_input(test_path);
        man.add_output(out_path);
        man.write(manifest_path(out_path));
    }
    return 0;
}

int cmd_quantize(const std::string& model_path, const std::string& mode, const std::string& calib_path,
                 const std::string& out_path, int calib_count, std::uint64_t calib_seed) {
    const MlpModel model = load_mlp(model_path);
    QuantizedModel qm;
    if (mode == "drq") {
        qm = quantize_dynamic_range(model);
    } else if (mode == "fiq") {
        if (calib_path.empty()) throw CLI::ValidationError("--calib is required for --mode fiq");
        const FeatureMatrix calib = sample_calibration(load_features(calib_path), calib_count, calib_seed);
        qm = quantize_full_integer(model, calib);
    } else {
        throw CLI::ValidationError("--mode must be drq or fiq");
    }
    save_quantized(qm, out_path);
    std::printf("quantize: %s -> %s (%s)\n", model_path.c_str(), out_path.c_str(), mode.c_str());

    RunManifest man;
    man.command = "quantize";
    man.seed = calib_seed;
    man.add_input(model_path);
    if (!calib_path.empty()) man.add_input(calib_path);
    man.add_output(out_path);
    man.write(manifest_path(out_path));
    return 0;
}

void write_bench_csv(const std::string& path, const std::vector<BenchResult>& results) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "mode,threads,n,warmup,mean_us,std_us\n";
    char buf[128];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%.3f,%.3f\n", r.mode.c_str(), r.threads, r.n_samples,
                      r.warmup, r.mean_us, r.std_us);
        out << buf;
    }
}

int cmd_bench(const std::string& model_path, const std::string& data_path, const std::string& out_path,
              const std::vector<int>& threads, int n_samples, int warmup) {
    const ModelFile mf = load_any_model(model_path);
    const FeatureMatrix data = load_features(data_path);
    if (data.rows() < 1) throw SchemaError(data_path + ": no rows to benchmark on");
    const int n = std::min<int>(n_samples, static_cast<int>(data.rows()));
    const Eigen::MatrixXd samples = data.X.topRows(n);

    std::function<double(const Eigen::VectorXd&)> infer;
    std::string mode;
    switch (mf.type) {
        case ModelFile::Type::mlp:
            mode = "real";
            infer = [&](const Eigen::VectorXd& x) { return mf.mlp->forward(x); };
            break;
        case ModelFile::Type::quantized:
            mode = to_string(mf.quantized->mode);
            infer = [&](const Eigen::VectorXd& x) { return quantized_forward(*mf.quantized, x); };
            break;
        case ModelFile::Type::baseline:
            mode = to_string(mf.baseline->kind);
            infer = [&](const Eigen::VectorXd& x) { return predict(*mf.baseline, x).score; };
            break;
    }

    std::vector<BenchResult> results;
    for (int t : threads) {
        const BenchResult r = benchmark_inference(mode, infer, samples, t, warmup);
        std::printf("bench: mode=%s threads=%d mean=%.3f us std=%.3f us\n", r.mode.c_str(), r.threads,
                    r.mean_us, r.std_us);
        results.push_back(r);
    }
    if (!out_path.empty()) {
        write_bench_csv(out_path, results);
        RunManifest man;
        man.command = "bench";
        man.add_input(model_path);
        man.add_input(data_path);
        man.add_output(out_path);
        man.write(manifest_path(out_path));
    }
    return 0;
}

// -------------------------------------------------------------- pipeline

struct PipelineOptions {
    std::string out_dir = "pipeline_out";
    std::vector<std::uint64_t> seeds = {7, 11, 13};
    // desk scale preserves the full-scale per-opportunity load (~150 UEs per
    // opportunity) so the class balance and detection regime carry over
    int ues = 7500;
    int raos = 50;
    int jobs = 1;
    int mlp_epochs = 50;
};

ScenarioConfig desk_scenario(const std::string& label, const PipelineOptions& opt) {
    ScenarioConfig cfg;
    cfg.label = label;
    cfg.total_ues = opt.ues;
    cfg.n_raos = opt.raos;
    if (label == "DS1") {
        cfg.profile = ChannelProfile::epa();
        cfg.cell_radius_m = 790.0;
    } else if (label == "DS2") {
        cfg.profile = ChannelProfile::epa();
        cfg.cell_radius_m = 500.0;
    } else if (label == "DS3") {
        cfg.profile = ChannelProfile::etu();
        cfg.cell_radius_m = 790.0;
    } else {
        throw std::invalid_argument("unknown desk scenario " + label);
    }
    return cfg;
}

double median3(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

/// S1-S4 protocol at desk scale: three datasets per seed, SMOTE-Tomek
/// balancing, a stratified 90/10 split, six models, four evaluation
/// scenarios, then quantization and the latency benchmark on the S1 network.
int cmd_pipeline(const PipelineOptions& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const auto path = [&](const std::string& name) { return opt.out_dir + "/" + name; };

    const std::vector<std::string> model_names = {"logreg", "gnb", "knn", "dtree", "rforest", "mlp"};
    // scenario -> (train dataset, test dataset)
    const std::vector<std::tuple<std::string, std::string, std::string>> scenarios = {
        {"S1", "DS1", "DS1"}, {"S2", "DS3", "DS3"}, {"S3", "DS1", "DS2"}, {"S4", "DS1", "DS3"}};

    // metric rows per seed: (model, scenario) -> reports
    std::map<std::pair<std::string, std::string>, std::vector<MetricsReport>> cells;
    RunManifest man;
    man.command = "pipeline";
    man.seed = opt.seeds.front();

    for (const std::uint64_t seed : opt.seeds) {
        const std::string tag = "_s" + std::to_string(seed);

        std::map<std::string, FeatureMatrix> train_split, test_split, full_balanced;
        for (const std::string ds : {"DS1", "DS2", "DS3"}) {
            ScenarioConfig cfg = desk_scenario(ds, opt);
            cfg.seed = seed;
            const ScenarioResult sim = run_scenario(cfg, opt.jobs);
            const std::string raw_path = path(ds + tag + ".csv");
            write_dataset(sim.rows, raw_path);
            man.add_output(raw_path);

            const BalanceResult balanced = smote_tomek(to_features(sim.rows), 5, derive_seed(seed, 0xBA1));
            Dataset bal_rows(balanced.data.rows());
            for (Eigen::Index i = 0; i < balanced.data.rows(); ++i) {
                DatasetRow row = sim.rows[static_cast<std::size_t>(balanced.source_row[i])];
                for (int j = 0; j < kNumFeatures; ++j) row.features[j] = balanced.data.X(i, j);
                row.label = balanced.data.y(i);
                bal_rows[static_cast<std::size_t>(i)] = row;
            }
            const std::string bal_path = path(ds + tag + "_balanced.csv");
            write_dataset(bal_rows, bal_path);
            man.add_output(bal_path);

            auto parts = split_train_test(balanced.data, 0.9, derive_seed(seed, 0x59));
            // the same split as row files, for reproduction and benchmarking
            const auto idx = split_indices(balanced.data.y, 0.9, derive_seed(seed, 0x59));
            Dataset train_rows, test_rows;
            for (int i : idx.first) train_rows.push_back(bal_rows[static_cast<std::size_t>(i)]);
            for (int i : idx.second) test_rows.push_back(bal_rows[static_cast<std::size_t>(i)]);
            write_dataset(train_rows, path(ds + tag + "_train.csv"));
            write_dataset(test_rows, path(ds + tag + "_test.csv"));
            man.add_output(path(ds + tag + "_train.csv"));
            man.add_output(path(ds + tag + "_test.csv"));

            train_split[ds] = std::move(parts.first);
            test_split[ds] = std::move(parts.second);
            full_balanced[ds] = balanced.data;
        }
        std::vector<std::tuple<std::string, std::string, MetricsReport>> seed_rows;

        // one model per (kind, training dataset); S3/S4 reuse the DS1 model
        for (const std::string& name : model_names) {
            std::map<std::string, std::string> model_paths;
            for (const std::string ds : {"DS1", "DS3"}) {
                const std::string model_path = path(name + "_" + ds + tag + ".json");
                if (name == "mlp") {
                    MlpTrainConfig cfg;
                    cfg.epochs = opt.mlp_epochs;
                    cfg.seed = derive_seed(seed, 0x3317);
                    const MlpTrainResult r = train_mlp(train_split[ds], cfg);
                    save_mlp(r.model, model_path);
                } else {
                    const BaselineModel m = train_baseline(model_kind_from_string(name), train_split[ds],
                                                           BaselineHyper{}, derive_seed(seed, 0x8EE), opt.jobs);
                    save_baseline(m, model_path);
                }
                man.add_output(model_path);
                model_paths[ds] = model_path;
            }

            for (const auto& [scenario, train_ds, test_ds] : scenarios) {
                const ModelFile mf = load_any_model(model_paths[train_ds]);
                // intra-scenario: held-out split; cross-scenario: the whole
                // balanced target dataset (never seen in training)
                const FeatureMatrix& test = train_ds == test_ds ? test_split[test_ds] : full_balanced[test_ds];
                const Eigen::VectorXi pred = model_predict_labels(mf, test.X);
                const MetricsReport m = evaluate(pred, test.y);
                cells[{name, scenario}].push_back(m);
                seed_rows.emplace_back(name, scenario, m);
            }
        }
        write_metrics_csv(path("metrics" + tag + ".csv"), seed_rows);
        man.add_output(path("metrics" + tag + ".csv"));

        // quantization + latency on the S1 network of this seed
        if (seed == opt.seeds.front()) {
            const std::string mlp_path = path("mlp_DS1" + tag + ".json");
            const MlpModel model = load_mlp(mlp_path);
            const FeatureMatrix calib = sample_calibration(train_split["DS1"], 1000, derive_seed(seed, 0xCA1B));

            const QuantizedModel drq = quantize_dynamic_range(model);
            const QuantizedModel fiq = quantize_full_integer(model, calib);
            save_quantized(drq, path("mlp_DS1" + tag + "_drq.json"));
            save_quantized(fiq, path("mlp_DS1" + tag + "_fiq.json"));
            man.add_output(path("mlp_DS1" + tag + "_drq.json"));
            man.add_output(path("mlp_DS1" + tag + "_fiq.json"));

            const FeatureMatrix& test = test_split["DS1"];
            std::vector<std::tuple<std::string, std::string, MetricsReport>> qrows;
            qrows.emplace_back("real", "S1", evaluate(model.predict_labels(test.X), test.y));
            qrows.emplace_back("drq", "S1", evaluate(quantized_predict_labels(drq, test.X), test.y));
            qrows.emplace_back("fiq", "S1", evaluate(quantized_predict_labels(fiq, test.X), test.y));
            write_metrics_csv(path("quantization_metrics.csv"), qrows);
            man.add_output(path("quantization_metrics.csv"));
            std::printf("-- quantization fidelity (S1, seed %llu)\n",
                        static_cast<unsigned long long>(seed));
            print_metrics_table(qrows);

            const int n_bench = std::min<int>(64, static_cast<int>(test.rows()));
            const Eigen::MatrixXd samples = test.X.topRows(n_bench);
            std::vector<BenchResult> bench;
            for (int threads : {1, 2, 4}) {
                bench.push_back(benchmark_inference(
                    "real", [&](const Eigen::VectorXd& x) { return model.forward(x); }, samples, threads, 8));
                bench.push_back(benchmark_inference(
                    "drq", [&](const Eigen::VectorXd& x) { return quantized_forward(drq, x); }, samples,
                    threads, 8));
                bench.push_back(benchmark_inference(
                    "fiq", [&](const Eigen::VectorXd& x) { return quantized_forward(fiq, x); }, samples,
                    threads, 8));
            }
            write_bench_csv(path("bench.csv"), bench);
            man.add_output(path("bench.csv"));
            std::printf("-- inference latency (us)\n");
            for (const auto& r : bench)
                std::printf("   %-5s threads=%d mean=%.3f std=%.3f\n", r.mode.c_str(), r.threads, r.mean_us,
                            r.std_us);
        }
    }

    // medians across seeds
    std::vector<std::tuple<std::string, std::string, MetricsReport>> table;
    for (const auto& [scenario, train_ds, test_ds] : scenarios) {
        (void)train_ds;
        (void)test_ds;
        for (const std::string& name : model_names) {
            const auto& reports = cells[{name, scenario}];
            std::vector<double> prec, rec, spec, ba;
            for (const auto& m : reports) {
                prec.push_back(m.precision);
                rec.push_back(m.recall);
                spec.push_back(m.specificity);
                ba.push_back(m.balanced_accuracy);
            }
            MetricsReport med;
            med.precision = median3(prec);
            med.recall = median3(rec);
            med.specificity = median3(spec);
            med.balanced_accuracy = median3(ba);
            table.emplace_back(name, scenario, med);
        }
    }
    write_metrics_csv(path("metrics_median.csv"), table);
    man.add_output(path("metrics_median.csv"));
    std::printf("-- metrics, median over %zu seeds\n", opt.seeds.size());
    print_metrics_table(table);

    man.write(path("pipeline.manifest.json"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "prachlab: random-access collision laboratory.\n"
        "Simulates the random access channel, builds labeled delay-profile\n"
        "datasets, trains collision classifiers and benchmarks int8 inference.\n"
        "Exit codes: 0 ok, 2 usage, 3 missing file, 4 schema mismatch,\n"
        "5 parse error, 7 internal error."};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // simulate
    std::string sim_config, sim_out, sim_dump;
    std::uint64_t sim_seed = 0;
    int sim_jobs = 1;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write the labeled dataset CSV");
    simulate->add_option("--config", sim_config, "scenario config file")->required();
    simulate->add_option("--out", sim_out, "output dataset CSV")->required();
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "override the config seed");
    simulate->add_option("--jobs", sim_jobs, "worker threads (default 1)");
    simulate->add_option("--dump-pdp", sim_dump, "write one delay profile as index,power CSV");

    // balance
    std::string bal_in, bal_out;
    int bal_k = 5;
    std::uint64_t bal_seed = 1;
    auto* balance = app.add_subcommand("balance", "SMOTE-Tomek rebalance a dataset CSV");
    balance->add_option("--in", bal_in, "input dataset CSV")->required();
    balance->add_option("--out", bal_out, "output dataset CSV")->required();
    balance->add_option("--k", bal_k, "SMOTE neighbor count (default 5)");
    balance->add_option("--seed", bal_seed, "seed (default 1)");

    // train
    std::string train_in, train_out;
    TrainOptions topt;
    std::uint64_t train_seed = 1;
    int train_jobs = 1;
    auto* train = app.add_subcommand("train", "Train a classifier on a dataset CSV");
    train->add_option("--in", train_in, "training dataset CSV")->required();
    train->add_option("--out", train_out, "output model file")->required();
    train->add_option("--model", topt.model, "logreg|gnb|knn|dtree|rforest|mlp (default mlp)")
        ->check(CLI::IsMember({"logreg", "gnb", "knn", "dtree", "rforest", "mlp"}));
    train->add_option("--seed", train_seed, "seed (default 1)");
    train->add_option("--jobs", train_jobs, "worker threads for forest training");
    train->add_option("--epochs", topt.epochs, "mlp epochs (default 50)");
    train->add_option("--batch", topt.batch, "mlp batch size (default 256)");
    train->add_option("--lr", topt.lr, "mlp learning rate (default 1e-3)");
    train->add_option("--val-fraction", topt.val_fraction, "mlp validation fraction (default 0.1)");
    train->add_option("--knn-k", topt.knn_k, "knn neighbors (default 5)");
    train->add_option("--trees", topt.trees, "forest size (default 100)");
    train->add_option("--max-depth", topt.max_depth, "tree depth limit (default 12)");
    train->add_option("--min-leaf", topt.min_leaf, "minimum rows per leaf (default 20)");
    train->add_option("--logreg-epochs", topt.logreg_epochs, "logistic regression epochs (default 200)");
    train->add_option("--logreg-lr", topt.logreg_lr, "logistic regression learning rate (default 0.1)");
    train->add_option("--logreg-l2", topt.logreg_l2, "logistic regression L2 weight (default 1e-4)");

    // eval
    std::string eval_model, eval_test, eval_out, eval_name = "model", eval_scenario = "S1", eval_pair;
    std::string eval_pair_kind = "mlp";
    std::uint64_t eval_seed = 1;
    auto* eval = app.add_subcommand("eval", "Evaluate a model file against a dataset CSV");
    eval->add_option("--model", eval_model, "model file");
    eval->add_option("--test", eval_test, "test dataset CSV");
    eval->add_option("--out", eval_out, "metrics CSV output");
    eval->add_option("--name", eval_name, "model name for the report");
    eval->add_option("--scenario", eval_scenario, "scenario tag for the report");
    eval->add_option("--scenario-pair", eval_pair,
                     "cross-dataset evaluation 'trainA.csv:testB.csv' (trains, then tests)");
    eval->add_option("--model-kind", eval_pair_kind, "model kind for --scenario-pair");
    eval->add_option("--seed", eval_seed, "seed for --scenario-pair training");

    // quantize
    std::string q_model, q_mode = "drq", q_calib, q_out;
    int q_calib_count = 1000;
    std::uint64_t q_calib_seed = 13;
    auto* quantize = app.add_subcommand("quantize", "Post-training int8 quantization of an mlp model");
    quantize->add_option("--model", q_model, "mlp model file")->required();
    quantize->add_option("--mode", q_mode, "drq|fiq (default drq)");
    quantize->add_option("--calib", q_calib, "calibration dataset CSV (fiq)");
    quantize->add_option("--calib-count", q_calib_count, "calibration rows (default 1000)");
    quantize->add_option("--calib-seed", q_calib_seed, "calibration sampling seed (default 13)");
    quantize->add_option("--out", q_out, "output quantized model file")->required();

    // bench
    std::string b_model, b_data, b_out;
    std::vector<int> b_threads = {1, 2, 4};
    int b_samples = 64, b_warmup = 8;
    auto* bench = app.add_subcommand("bench", "Measure single-row inference latency");
    bench->add_option("--model", b_model, "model file (mlp or quantized)")->required();
    bench->add_option("--data", b_data, "dataset CSV supplying the sample rows")->required();
    bench->add_option("--out", b_out, "benchmark CSV output");
    bench->add_option("--threads", b_threads, "thread counts (default 1 2 4)");
    bench->add_option("--samples", b_samples, "rows to time (default 64)");
    bench->add_option("--warmup", b_warmup, "unmeasured warmup inferences (default 8)");

    // pipeline
    PipelineOptions popt;
    bool desk_scale = false;
    auto* pipeline = app.add_subcommand("pipeline", "Run S1-S4 end to end and emit the metrics table");
    pipeline->add_flag("--desk-scale", desk_scale, "desk-scale defaults (7500 UEs, 50 RAOs, seeds 7 11 13)");
    pipeline->add_option("--out-dir", popt.out_dir, "artifact directory (default pipeline_out)");
    pipeline->add_option("--seeds", popt.seeds, "seeds (default 7 11 13)");
    pipeline->add_option("--ues", popt.ues, "UEs per scenario (default 7500)");
    pipeline->add_option("--raos", popt.raos, "random access opportunities (default 50)");
    pipeline->add_option("--jobs", popt.jobs, "worker threads (default 1)");
    pipeline->add_option("--mlp-epochs", popt.mlp_epochs, "mlp training epochs (default 50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(sim_config, sim_seed, sim_seed_opt->count() > 0, sim_out, sim_jobs, sim_dump);
        if (balance->parsed()) return cmd_balance(bal_in, bal_out, bal_k, bal_seed);
        if (train->parsed()) return cmd_train(train_in, train_out, topt, train_seed, train_jobs);
        if (eval->parsed()) {
            if (!eval_pair.empty()) {
                const auto sep = eval_pair.find(':');
                if (sep == std::string::npos)
                    throw CLI::ValidationError("--scenario-pair expects 'trainA.csv:testB.csv'");
                const std::string train_csv = eval_pair.substr(0, sep);
                const std::string test_csv = eval_pair.substr(sep + 1);
                const std::string tmp_model = eval_out.empty() ? "scenario_pair_model.json"
                                                               : eval_out + ".model.json";
                TrainOptions pair_opt;
                pair_opt.model = eval_pair_kind;
                cmd_train(train_csv, tmp_model, pair_opt, eval_seed, 1);
                return cmd_eval(tmp_model, test_csv, eval_out, eval_pair_kind, eval_scenario);
            }
            if (eval_model.empty() || eval_test.empty())
                throw CLI::ValidationError("eval needs --model and --test (or --scenario-pair)");
            return cmd_eval(eval_model, eval_test, eval_out, eval_name, eval_scenario);
        }
        if (quantize->parsed())
            return cmd_quantize(q_model, q_mode, q_calib, q_out, q_calib_count, q_calib_seed);
        if (bench->parsed()) return cmd_bench(b_model, b_data, b_out, b_threads, b_samples, b_warmup);
        if (pipeline->parsed()) {
            (void)desk_scale;  // desk scale is the default parameterization
            return cmd_pipeline(popt);
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMissingFile;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSchema;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
