#include "mchd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <thread>

#include <nlohmann/json.hpp>

#include "mchd/encoder.hpp"
#include "mchd/features.hpp"
#include "mchd/inference.hpp"
#include "mchd/training.hpp"

namespace mchd {

const char* variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::two_class: return "2C";
        case ModelVariant::multi_centroid: return "MC";
        case ModelVariant::mc_removal: return "MCr";
        case ModelVariant::mc_clustering: return "MCc";
    }
    return "?";
}

ModelVariant variant_from_name(const std::string& name) {
    if (name == "2C") return ModelVariant::two_class;
    if (name == "MC") return ModelVariant::multi_centroid;
    if (name == "MCr") return ModelVariant::mc_removal;
    if (name == "MCc") return ModelVariant::mc_clustering;
    throw ConfigError("unknown model variant '" + name + "' (expected 2C, MC, MCr or MCc)");
}

void ExperimentConfig::validate() const {
    if (dim < 64) throw ConfigError("dim must be at least 64");
    if (num_levels < 2) throw ConfigError("need at least 2 discretization levels");
    if (wlen_seconds <= 0.0 || wstep_seconds <= 0.0) {
        throw ConfigError("window length and step must be positive");
    }
    if (smooth_len < 1 || smooth_len % 2 == 0) {
        throw ConfigError("smooth_len must be odd and positive");
    }
    if (margin < 0.0) throw ConfigError("margin must be non-negative");
    if (reduction_step_fraction <= 0.0 || reduction_step_fraction >= 1.0) {
        throw ConfigError("reduction step fraction must be in (0, 1)");
    }
    if (reduction_tolerance < 0.0) throw ConfigError("reduction tolerance must be non-negative");
    if (variants.empty()) throw ConfigError("no model variants requested");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["dataset"] = dataset_dir.generic_string();
    j["subjects"] = subjects;
    j["seed"] = master_seed;
    j["dim"] = dim;
    j["levels"] = num_levels;
    j["wlen_seconds"] = wlen_seconds;
    j["wstep_seconds"] = wstep_seconds;
    j["smooth_len"] = smooth_len;
    j["margin"] = margin;
    j["reduction"] = {{"step_fraction", reduction_step_fraction},
                      {"tolerance", reduction_tolerance}};
    j["variants"] = nlohmann::json::array();
    for (auto v : variants) j["variants"].push_back(variant_name(v));
    j["out"] = out_dir.generic_string();
    j["threads"] = threads;
    j["save_models"] = save_models;
    return j.dump(2);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("dataset")) cfg.dataset_dir = j["dataset"].get<std::string>();
        if (j.contains("subjects")) cfg.subjects = j["subjects"].get<std::vector<std::string>>();
        if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
        if (j.contains("dim")) cfg.dim = j["dim"].get<std::uint64_t>();
        if (j.contains("levels")) cfg.num_levels = j["levels"].get<std::uint32_t>();
        if (j.contains("wlen_seconds")) cfg.wlen_seconds = j["wlen_seconds"].get<double>();
        if (j.contains("wstep_seconds")) cfg.wstep_seconds = j["wstep_seconds"].get<double>();
        if (j.contains("smooth_len")) cfg.smooth_len = j["smooth_len"].get<int>();
        if (j.contains("margin")) cfg.margin = j["margin"].get<double>();
        if (j.contains("reduction")) {
            const auto& r = j["reduction"];
            if (r.contains("step_fraction")) cfg.reduction_step_fraction = r["step_fraction"].get<double>();
            if (r.contains("tolerance")) cfg.reduction_tolerance = r["tolerance"].get<double>();
        }
        if (j.contains("variants")) {
            cfg.variants.clear();
            for (const auto& v : j["variants"]) cfg.variants.push_back(variant_from_name(v.get<std::string>()));
        }
        if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
        if (j.contains("save_models")) cfg.save_models = j["save_models"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_experiment_config(text);
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Windowed view of one subject file: per-window features and truth labels.
struct FileFeatures {
    Eigen::Index n_channels = 0;
    std::vector<Eigen::MatrixXd> windows;  // channels x 46 each
    std::vector<GlobalLabel> truth;
};

FileFeatures extract_file_features(const SubjectFile& file, const WindowSpec& spec) {
    FileFeatures out;
    out.n_channels = file.signal.n_channels();
    const std::size_t n = num_windows(file.signal.n_samples(), file.signal.fs, spec);
    const std::vector<SeizureAnnotation> anns{file.annotation()};
    out.truth = window_labels(file.signal.n_samples(), file.signal.fs, anns, spec);
    out.windows.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
        out.windows.push_back(
            extract_window_features(window_samples(file.signal, w, spec), file.signal.fs));
    }
    return out;
}

struct FoldOutput {
    std::vector<ScoreRow> scores;
    std::vector<SubclassRow> subclasses;
    std::vector<TraceRow> traces;
};

bool wants(const ExperimentConfig& cfg, ModelVariant v) {
    return std::find(cfg.variants.begin(), cfg.variants.end(), v) != cfg.variants.end();
}

void append_subclass_rows(FoldOutput& out, const std::string& subject, int fold, ModelVariant v,
                          const ModelMC& model) {
    std::array<std::uint64_t, 2> totals{0, 0};
    for (const auto& sc : model.subclasses) {
        totals[static_cast<std::size_t>(sc.label)] += sc.count();
    }
    for (const auto& sc : model.subclasses) {
        const auto total = totals[static_cast<std::size_t>(sc.label)];
        out.subclasses.push_back({subject, fold, v, sc.id, sc.label, sc.count(),
                                  total == 0 ? 0.0
                                             : static_cast<double>(sc.count()) /
                                                   static_cast<double>(total)});
    }
}

void append_score_rows(FoldOutput& out, const std::string& subject, int fold, ModelVariant v,
                       const ModelMC& model, std::span<const Hypervector> test_windows,
                       const LabelSequence& truth, int smooth_len) {
    const LabelSequence raw = classify_sequence(model, test_windows);
    const LabelSequence smoothed = smooth_labels(raw, smooth_len);
    const auto n_seiz = static_cast<double>(model.count_for_label(GlobalLabel::seizure));
    const auto n_non = static_cast<double>(model.count_for_label(GlobalLabel::non_seizure));
    out.scores.push_back(
        {subject, fold, v, false, score_sequences(raw, truth), n_seiz, n_non});
    out.scores.push_back(
        {subject, fold, v, true, score_sequences(smoothed, truth), n_seiz, n_non});
}

}  // namespace

Report run_crossvalidation(const ExperimentConfig& cfg, const Dataset& dataset) {
    cfg.validate();
    const WindowSpec spec{cfg.wlen_seconds, cfg.wstep_seconds};

    std::vector<std::string> subjects = cfg.subjects;
    if (subjects.empty()) subjects = dataset.subjects();

    Report report;
    report.config_json = cfg.to_json();

    for (const auto& subject : subjects) {
        const auto files = dataset.files_of(subject);
        if (files.empty()) {
            throw DataError("subject " + subject + " is not in the dataset");
        }
        if (files.size() < 2) {
            report.warnings.push_back("subject " + subject +
                                      " skipped: needs at least 2 seizure files for "
                                      "leave-one-seizure-out");
            continue;
        }

        // Features are fold-independent; extract each file once, in parallel.
        std::vector<FileFeatures> features(files.size());
        parallel_for(files.size(), cfg.threads,
                     [&](std::size_t i) { features[i] = extract_file_features(*files[i], spec); });

        const auto n_channels = static_cast<std::size_t>(features[0].n_channels);
        const std::size_t n_folds = files.size();
        std::vector<FoldOutput> folds(n_folds);

        parallel_for(n_folds, cfg.threads, [&](std::size_t fold) {
            FoldOutput& out = folds[fold];
            const auto fold_seed = derive_seed(cfg.master_seed, subject, fold);
            const auto ctx = make_encoder_context(cfg.dim, cfg.num_levels, n_channels,
                                                  kNumFeatures, fold_seed);

            // Calibration sees training files only.
            std::vector<Eigen::MatrixXd> train_feature_pool;
            for (std::size_t i = 0; i < n_folds; ++i) {
                if (i == fold) continue;
                train_feature_pool.insert(train_feature_pool.end(), features[i].windows.begin(),
                                          features[i].windows.end());
            }
            const auto cal = Calibration::fit(train_feature_pool);

            auto encode_file = [&](const FileFeatures& ff) {
                std::vector<Hypervector> out_vecs;
                out_vecs.reserve(ff.windows.size());
                for (const auto& fm : ff.windows) {
                    out_vecs.push_back(encode_window(cal.discretize(fm, static_cast<int>(cfg.num_levels)), ctx));
                }
                return out_vecs;
            };

            std::vector<LabeledVector> train_stream;
            std::vector<EvalSegment> train_segments;
            for (std::size_t i = 0; i < n_folds; ++i) {
                if (i == fold) continue;
                EvalSegment seg;
                seg.windows = encode_file(features[i]);
                seg.truth = features[i].truth;
                for (std::size_t w = 0; w < seg.windows.size(); ++w) {
                    train_stream.push_back({seg.windows[w], seg.truth[w]});
                }
                train_segments.push_back(std::move(seg));
            }
            const auto test_windows = encode_file(features[fold]);
            LabelSequence truth;
            truth.labels = features[fold].truth;

            const bool need_mc = wants(cfg, ModelVariant::multi_centroid) ||
                                 wants(cfg, ModelVariant::mc_removal) ||
                                 wants(cfg, ModelVariant::mc_clustering);

            auto maybe_save = [&](const ModelMC& model, ModelVariant v) {
                if (!cfg.save_models) return;
                TrainedModel tm;
                tm.params.dim = cfg.dim;
                tm.params.num_levels = cfg.num_levels;
                tm.params.n_channels = static_cast<std::uint32_t>(n_channels);
                tm.params.n_features = kNumFeatures;
                tm.params.seed = fold_seed;
                tm.params.fs = files[fold]->signal.fs;
                tm.params.wlen_seconds = cfg.wlen_seconds;
                tm.params.wstep_seconds = cfg.wstep_seconds;
                tm.params.smooth_len = static_cast<std::uint32_t>(cfg.smooth_len);
                tm.calibration = cal;
                tm.model = model;
                const auto dir = cfg.out_dir / "models";
                std::filesystem::create_directories(dir);
                const auto base = subject + "_fold" + std::to_string(fold) + "_" + variant_name(v);
                save_model(tm, dir / (base + ".mchd"));
                std::ofstream manifest(dir / (base + ".manifest.json"));
                manifest << feature_manifest_json() << "\n";
            };

            if (wants(cfg, ModelVariant::two_class)) {
                const auto m2c = train_two_class(train_stream, ctx.tiebreak);
                append_score_rows(out, subject, static_cast<int>(fold), ModelVariant::two_class,
                                  m2c, test_windows, truth, cfg.smooth_len);
                append_subclass_rows(out, subject, static_cast<int>(fold),
                                     ModelVariant::two_class, m2c);
                maybe_save(m2c, ModelVariant::two_class);
            }
            if (need_mc) {
                const auto mc =
                    train_multicentroid(train_stream, ctx.tiebreak, {.margin = cfg.margin});
                if (wants(cfg, ModelVariant::multi_centroid)) {
                    append_score_rows(out, subject, static_cast<int>(fold),
                                      ModelVariant::multi_centroid, mc, test_windows, truth,
                                      cfg.smooth_len);
                    append_subclass_rows(out, subject, static_cast<int>(fold),
                                         ModelVariant::multi_centroid, mc);
                    maybe_save(mc, ModelVariant::multi_centroid);
                }
                for (auto [variant, strategy] :
                     {std::pair{ModelVariant::mc_removal, ReductionStrategy::removal},
                      std::pair{ModelVariant::mc_clustering, ReductionStrategy::clustering}}) {
                    if (!wants(cfg, variant)) continue;
                    ReductionConfig rcfg;
                    rcfg.step_fraction = cfg.reduction_step_fraction;
                    rcfg.tolerance = cfg.reduction_tolerance;
                    rcfg.strategy = strategy;
                    rcfg.smooth_len = cfg.smooth_len;
                    const auto reduced = reduce(mc, train_segments, rcfg);
                    append_score_rows(out, subject, static_cast<int>(fold), variant,
                                      reduced.model, test_windows, truth, cfg.smooth_len);
                    append_subclass_rows(out, subject, static_cast<int>(fold), variant,
                                         reduced.model);
                    for (const auto& row : reduced.trace) {
                        out.traces.push_back({subject, static_cast<int>(fold), variant, row});
                    }
                    maybe_save(reduced.model, variant);
                }
            }
        });

        // Ordered merge keeps the report deterministic regardless of threads.
        for (auto& fold : folds) {
            report.scores.insert(report.scores.end(), fold.scores.begin(), fold.scores.end());
            report.subclasses.insert(report.subclasses.end(), fold.subclasses.begin(),
                                     fold.subclasses.end());
            report.reduction_trace.insert(report.reduction_trace.end(), fold.traces.begin(),
                                          fold.traces.end());
        }

        // Per-subject averages over folds.
        for (auto v : cfg.variants) {
            for (bool smoothed : {false, true}) {
                std::vector<ScoreSet> per_fold;
                double n_seiz = 0.0, n_non = 0.0;
                for (const auto& row : report.scores) {
                    if (row.subject == subject && row.fold >= 0 && row.variant == v &&
                        row.smoothed == smoothed) {
                        per_fold.push_back(row.scores);
                        n_seiz += row.n_seizure_subclasses;
                        n_non += row.n_non_seizure_subclasses;
                    }
                }
                if (per_fold.empty()) continue;
                const auto n = static_cast<double>(per_fold.size());
                report.scores.push_back({subject, -1, v, smoothed, aggregate_scores(per_fold),
                                         n_seiz / n, n_non / n});
            }
        }
    }

    // Overall averages across subjects, equal weight per subject.
    for (auto v : cfg.variants) {
        for (bool smoothed : {false, true}) {
            std::vector<ScoreSet> per_subject;
            double n_seiz = 0.0, n_non = 0.0;
            for (const auto& row : report.scores) {
                if (row.fold == -1 && row.subject != "ALL" && row.variant == v &&
                    row.smoothed == smoothed) {
                    per_subject.push_back(row.scores);
                    n_seiz += row.n_seizure_subclasses;
                    n_non += row.n_non_seizure_subclasses;
                }
            }
            if (per_subject.empty()) continue;
            const auto n = static_cast<double>(per_subject.size());
            report.scores.push_back({"ALL", -1, v, smoothed, aggregate_scores(per_subject),
                                     n_seiz / n, n_non / n});
        }
    }
    return report;
}

}  // namespace mchd
