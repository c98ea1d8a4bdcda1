// mchd: multi-centroid hyperdimensional computing pipeline for EEG seizure
// detection. Subcommands: synth, prepare, crossval, reduce, classify,
// inspect.
#include <CLI11.hpp>

#include <iostream>

#include "mchd/dataset.hpp"
#include "mchd/encoder.hpp"
#include "mchd/experiment.hpp"
#include "mchd/features.hpp"
#include "mchd/inference.hpp"
#include "mchd/signal_io.hpp"
#include "mchd/synthetic.hpp"

namespace {

using namespace mchd;

// Rebuilds the encoder context of a saved model and encodes a recording.
struct ModelRuntime {
    TrainedModel tm;
    EncoderContext ctx;
    WindowSpec spec;

    explicit ModelRuntime(TrainedModel model)
        : tm(std::move(model)),
          ctx(make_encoder_context(tm.params.dim, tm.params.num_levels, tm.params.n_channels,
                                   tm.params.n_features, tm.params.seed)),
          spec{tm.params.wlen_seconds, tm.params.wstep_seconds} {}

    std::vector<Hypervector> encode(const Recording& rec) const {
        if (rec.n_channels() != static_cast<Eigen::Index>(tm.params.n_channels)) {
            throw DataError("signal has " + std::to_string(rec.n_channels()) +
                            " channels, model expects " + std::to_string(tm.params.n_channels));
        }
        if (rec.fs != tm.params.fs) {
            throw DataError("signal sampled at " + std::to_string(rec.fs) +
                            " Hz, model was trained at " + std::to_string(tm.params.fs) + " Hz");
        }
        std::vector<Hypervector> out;
        const std::size_t n = num_windows(rec.n_samples(), rec.fs, spec);
        out.reserve(n);
        for (std::size_t w = 0; w < n; ++w) {
            const auto fm = extract_window_features(window_samples(rec, w, spec), rec.fs);
            out.push_back(
                encode_window(tm.calibration.discretize(fm, static_cast<int>(tm.params.num_levels)), ctx));
        }
        return out;
    }
};

int cmd_synth(const std::string& out_dir, SyntheticSubjectConfig cfg) {
    const auto subject = generate_synthetic_subject(cfg);
    std::filesystem::create_directories(out_dir);
    std::vector<AnnotationLine> lines;
    for (const auto& rec : subject.recordings) {
        write_columnar(std::filesystem::path(out_dir) / (rec.id + ".csv"), rec);
    }
    for (const auto& ann : subject.annotations) lines.push_back({cfg.subject, ann});
    write_annotations(std::filesystem::path(out_dir) / "annotations.txt", lines);
    std::cout << "wrote " << subject.recordings.size() << " recording(s) and "
              << subject.annotations.size() << " seizure annotations to " << out_dir << "\n";
    return 0;
}

int cmd_prepare(const std::vector<std::string>& signal_paths, const std::string& annotations_path,
                const std::string& montage_path, bool montage18, int factor, std::uint64_t seed,
                const std::string& out_dir) {
    std::vector<std::string> montage;
    if (montage18) {
        montage.assign(default_montage18().begin(), default_montage18().end());
    } else if (!montage_path.empty()) {
        montage = read_channel_list(montage_path);
    }

    std::vector<Recording> recordings;
    for (const auto& p : signal_paths) {
        Recording rec = read_signal(p);
        if (!montage.empty()) rec = select_montage(rec, montage);
        recordings.push_back(std::move(rec));
    }

    const auto annotations = read_annotations(annotations_path);
    std::vector<std::string> subjects;
    for (const auto& a : annotations) {
        if (std::find(subjects.begin(), subjects.end(), a.subject) == subjects.end()) {
            subjects.push_back(a.subject);
        }
    }

    Dataset ds;
    ds.factor = factor;
    ds.seed = seed;
    for (const auto& subject : subjects) {
        std::vector<SeizureAnnotation> anns;
        std::vector<Recording> recs;
        for (const auto& a : annotations) {
            if (a.subject == subject) anns.push_back(a.annotation);
        }
        for (const auto& rec : recordings) {
            const bool referenced = std::any_of(anns.begin(), anns.end(), [&](const auto& a) {
                return a.recording_id == rec.id;
            });
            if (referenced) recs.push_back(rec);
        }
        auto files = build_subject_files(subject, recs, anns, factor, seed);
        for (auto& f : files) ds.files.push_back(std::move(f));
    }
    save_dataset(ds, out_dir);
    std::cout << "prepared " << ds.files.size() << " subject file(s) in " << out_dir << "\n";
    return 0;
}

int cmd_crossval(ExperimentConfig cfg) {
    const auto dataset = load_dataset(cfg.dataset_dir);
    const auto report = run_crossvalidation(cfg, dataset);
    emit_report(report, cfg.out_dir);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& row : report.scores) {
        if (row.subject == "ALL" && row.smoothed) {
            std::cout << variant_name(row.variant)
                      << " smoothed F1DEgmean: " << row.scores.f1de_gmean << "\n";
        }
    }
    std::cout << "report written to " << cfg.out_dir.string() << "\n";
    return 0;
}

int cmd_reduce(const std::string& model_path, const std::string& data_dir,
               const std::string& subject_arg, int exclude_fold, const std::string& strategy,
               double step, double tolerance, const std::string& out_path) {
    ModelRuntime rt(load_model(model_path));
    const auto dataset = load_dataset(data_dir);

    std::string subject = subject_arg;
    if (subject.empty()) {
        const auto subjects = dataset.subjects();
        if (subjects.size() != 1) {
            throw ConfigError("dataset has several subjects; pass --subject");
        }
        subject = subjects.front();
    }

    std::vector<EvalSegment> segments;
    for (const auto* file : dataset.files_of(subject)) {
        if (file->index == exclude_fold) continue;
        EvalSegment seg;
        seg.windows = rt.encode(file->signal);
        const std::vector<SeizureAnnotation> anns{file->annotation()};
        seg.truth = window_labels(file->signal.n_samples(), file->signal.fs, anns, rt.spec);
        segments.push_back(std::move(seg));
    }

    ReductionConfig rcfg;
    rcfg.step_fraction = step;
    rcfg.tolerance = tolerance;
    rcfg.smooth_len = static_cast<int>(rt.tm.params.smooth_len);
    rcfg.strategy = strategy == "clustering" ? ReductionStrategy::clustering
                                             : ReductionStrategy::removal;
    if (strategy != "clustering" && strategy != "removal") {
        throw ConfigError("strategy must be 'removal' or 'clustering'");
    }

    const auto result = reduce(rt.tm.model, segments, rcfg);
    TrainedModel out = rt.tm;
    out.model = result.model;
    save_model(out, out_path);
    std::cout << "sub-classes: " << rt.tm.model.subclasses.size() << " -> "
              << result.model.subclasses.size() << ", training F1DEgmean " << result.baseline_score
              << " -> " << result.final_score << "\n";
    std::cout << "reduced model written to " << out_path << "\n";
    return 0;
}

int cmd_classify(const std::string& model_path, const std::string& input_path,
                 const std::string& out_path) {
    ModelRuntime rt(load_model(model_path));
    const Recording rec = read_signal(input_path);
    const auto windows = rt.encode(rec);
    if (windows.empty()) throw DataError("signal shorter than one analysis window");

    const auto detailed = classify_detailed(rt.tm.model, windows);
    LabelSequence raw;
    for (const auto& d : detailed) raw.labels.push_back(d.label);
    const auto smoothed = smooth_labels(raw, static_cast<int>(rt.tm.params.smooth_len));

    std::vector<PredictionRow> rows;
    rows.reserve(detailed.size());
    for (std::size_t i = 0; i < detailed.size(); ++i) {
        rows.push_back({static_cast<double>(i) * rt.spec.wstep_seconds, detailed[i].label,
                        smoothed.labels[i], detailed[i].subclass_id, detailed[i].distance});
    }
    write_predictions_csv(out_path, rows);

    std::size_t positives = 0;
    for (const auto& l : smoothed.labels) positives += l == GlobalLabel::seizure;
    std::cout << windows.size() << " windows, " << positives << " smoothed seizure labels; "
              << "predictions written to " << out_path << "\n";
    return 0;
}

int cmd_inspect(const std::string& model_path) {
    const auto tm = load_model(model_path);
    std::cout << "dim " << tm.params.dim << ", levels " << tm.params.num_levels << ", channels "
              << tm.params.n_channels << ", features " << tm.params.n_features << ", seed "
              << tm.params.seed << "\n";
    std::array<std::uint64_t, 2> totals{0, 0};
    for (const auto& sc : tm.model.subclasses) totals[static_cast<std::size_t>(sc.label)] += sc.count();
    std::cout << "subclass_id,label,count,data_fraction\n";
    for (const auto& sc : tm.model.subclasses) {
        const auto total = totals[static_cast<std::size_t>(sc.label)];
        std::cout << sc.id << ',' << label_name(sc.label) << ',' << sc.count() << ','
                  << (total ? static_cast<double>(sc.count()) / static_cast<double>(total) : 0.0)
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-centroid hyperdimensional EEG seizure detection"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic test subject");
    SyntheticSubjectConfig synth_cfg;
    std::string synth_out = "synth_data";
    synth->add_option("--subject", synth_cfg.subject, "subject name");
    synth->add_option("--seizure-modes", synth_cfg.n_seizure_modes, "number of seizure regimes");
    synth->add_option("--non-seizure-modes", synth_cfg.n_non_seizure_modes,
                      "number of background regimes");
    synth->add_option("--seizures", synth_cfg.n_seizures, "number of seizures");
    synth->add_option("--factor", synth_cfg.factor, "interictal budget sizing factor");
    synth->add_option("--fs", synth_cfg.fs, "sampling rate (Hz)");
    synth->add_option("--channels", synth_cfg.n_channels, "number of channels");
    synth->add_option("--seizure-duration", synth_cfg.seizure_duration_seconds,
                      "seizure duration (s)");
    synth->add_option("--seed", synth_cfg.seed, "random seed");
    synth->add_option("--out", synth_out, "output directory");

    // prepare
    auto* prepare = app.add_subcommand("prepare", "build per-seizure balanced subject files");
    std::vector<std::string> prep_signals;
    std::string prep_annotations, prep_montage, prep_out = "dataset";
    bool prep_montage18 = false;
    int prep_factor = 10;
    std::uint64_t prep_seed = 1;
    prepare->add_option("--signals", prep_signals, "signal files (.edf or columnar)")->required();
    prepare->add_option("--annotations", prep_annotations, "annotation file")->required();
    prepare->add_option("--montage", prep_montage, "channel list file");
    prepare->add_flag("--montage18", prep_montage18, "use the built-in 18-channel bipolar montage");
    prepare->add_option("--factor", prep_factor, "interictal:ictal balance factor (1, 5 or 10)");
    prepare->add_option("--seed", prep_seed, "random seed");
    prepare->add_option("--out", prep_out, "dataset output directory");

    // crossval
    auto* crossval = app.add_subcommand("crossval", "run leave-one-seizure-out cross-validation");
    std::string cv_config;
    std::string cv_data, cv_out;
    std::uint64_t cv_seed = 0;
    int cv_threads = 0;
    bool cv_seed_set = false, cv_threads_set = false;
    crossval->add_option("--config", cv_config, "experiment config (JSON)")->required();
    crossval->add_option("--data", cv_data, "dataset directory (overrides config)");
    crossval->add_option("--out", cv_out, "output directory (overrides config)");
    crossval->add_option("--seed", cv_seed, "master seed (overrides config)")
        ->each([&](const std::string&) { cv_seed_set = true; });
    crossval->add_option("--threads", cv_threads, "worker threads (overrides config)")
        ->each([&](const std::string&) { cv_threads_set = true; });

    // reduce
    auto* red = app.add_subcommand("reduce", "apply sub-class reduction to a saved model");
    std::string red_model, red_data, red_subject, red_strategy = "removal", red_out;
    int red_exclude = -1;
    double red_step = 0.10, red_tol = 0.03;
    red->add_option("--model", red_model, "model file")->required();
    red->add_option("--data", red_data, "dataset directory with the training files")->required();
    red->add_option("--subject", red_subject, "subject to draw training files from");
    red->add_option("--exclude-fold", red_exclude, "file index to leave out (the test fold)");
    red->add_option("--strategy", red_strategy, "removal or clustering");
    red->add_option("--step", red_step, "fraction of sub-classes per step");
    red->add_option("--tolerance", red_tol, "allowed relative training-score drop");
    red->add_option("--out", red_out, "output model file")->required();

    // classify
    auto* cls = app.add_subcommand("classify", "score one signal file with a saved model");
    std::string cls_model, cls_input, cls_out = "predictions.csv";
    cls->add_option("--model", cls_model, "model file")->required();
    cls->add_option("--input", cls_input, "signal file")->required();
    cls->add_option("--out", cls_out, "predictions CSV path");

    // inspect
    auto* ins = app.add_subcommand("inspect", "dump sub-class statistics of a saved model");
    std::string ins_model;
    ins->add_option("--model", ins_model, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return cmd_synth(synth_out, synth_cfg);
        if (*prepare) {
            return cmd_prepare(prep_signals, prep_annotations, prep_montage, prep_montage18,
                               prep_factor, prep_seed, prep_out);
        }
        if (*crossval) {
            ExperimentConfig cfg = load_experiment_config(cv_config);
            if (!cv_data.empty()) cfg.dataset_dir = cv_data;
            if (!cv_out.empty()) cfg.out_dir = cv_out;
            if (cv_seed_set) cfg.master_seed = cv_seed;
            if (cv_threads_set) cfg.threads = cv_threads;
            if (cfg.out_dir.empty()) throw mchd::ConfigError("no output directory configured");
            cfg.validate();
            return cmd_crossval(std::move(cfg));
        }
        if (*red) {
            return cmd_reduce(red_model, red_data, red_subject, red_exclude, red_strategy,
                              red_step, red_tol, red_out);
        }
        if (*cls) return cmd_classify(cls_model, cls_input, cls_out);
        if (*ins) return cmd_inspect(ins_model);
    } catch (const mchd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const mchd::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
