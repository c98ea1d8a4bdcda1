#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mchd/dataset.hpp"
#include "mchd/metrics.hpp"
#include "mchd/model.hpp"
#include "mchd/reduction.hpp"

namespace mchd {

enum class ModelVariant { two_class, multi_centroid, mc_removal, mc_clustering };

const char* variant_name(ModelVariant v);
ModelVariant variant_from_name(const std::string& name);

struct ExperimentConfig {
    std::filesystem::path dataset_dir;
    std::vector<std::string> subjects;  // empty = every subject in the dataset
    std::uint64_t master_seed = 1;
    std::uint64_t dim = 10240;
    std::uint32_t num_levels = 20;
    double wlen_seconds = 8.0;
    double wstep_seconds = 1.0;
    int smooth_len = 5;
    double margin = 0.0;
    double reduction_step_fraction = 0.10;
    double reduction_tolerance = 0.03;
    std::vector<ModelVariant> variants{ModelVariant::two_class, ModelVariant::multi_centroid,
                                       ModelVariant::mc_removal, ModelVariant::mc_clustering};
    std::filesystem::path out_dir;
    int threads = 1;
    bool save_models = false;

    void validate() const;
    std::string to_json() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

// --- report rows ---

struct ScoreRow {
    std::string subject;
    int fold = 0;  // -1: per-subject average over folds
    ModelVariant variant = ModelVariant::two_class;
    bool smoothed = false;
    ScoreSet scores;
    double n_seizure_subclasses = 0.0;      // averaged in aggregate rows
    double n_non_seizure_subclasses = 0.0;
};

struct SubclassRow {
    std::string subject;
    int fold = 0;
    ModelVariant variant = ModelVariant::two_class;
    std::uint32_t subclass_id = 0;
    GlobalLabel label = GlobalLabel::non_seizure;
    std::uint64_t count = 0;
    double data_fraction = 0.0;  // of the windows absorbed by this label
};

struct TraceRow {
    std::string subject;
    int fold = 0;
    ModelVariant variant = ModelVariant::mc_removal;
    ReductionTraceRow row;
};

struct Report {
    std::vector<ScoreRow> scores;          // folds, then per-subject averages, then ALL
    std::vector<SubclassRow> subclasses;
    std::vector<TraceRow> reduction_trace;
    std::vector<std::string> warnings;
    std::string config_json;
};

// Leave-one-seizure-out: for every subject and every held-out file,
// calibration is fitted on the training files only, all requested variants
// are trained on the training windows, and raw + smoothed predictions are
// scored on the held-out file. Deterministic for a fixed master seed,
// independent of the thread count.
Report run_crossvalidation(const ExperimentConfig& cfg, const Dataset& dataset);

// scores.csv, subclasses.csv, reduction_trace.csv, summary.csv, config.json,
// warnings.txt (when any).
void emit_report(const Report& report, const std::filesystem::path& dir);

// Prediction dump for one file (time, raw, smoothed, sub-class, distance).
struct PredictionRow {
    double time = 0.0;
    GlobalLabel raw = GlobalLabel::non_seizure;
    GlobalLabel smoothed = GlobalLabel::non_seizure;
    std::uint32_t subclass_id = 0;
    double distance = 0.0;
};
void write_predictions_csv(const std::filesystem::path& path, std::span<const PredictionRow> rows);

}  // namespace mchd
