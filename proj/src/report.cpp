#include "mchd/experiment.hpp"

#include <cstdio>
#include <fstream>

namespace mchd {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    return out;
}

void write_score_fields(std::ofstream& out, const ScoreSet& s) {
    out << fmt(s.duration.tpr) << ',' << fmt(s.duration.ppv) << ',' << fmt(s.duration.f1) << ','
        << fmt(s.episode.tpr) << ',' << fmt(s.episode.ppv) << ',' << fmt(s.episode.f1) << ','
        << fmt(s.f1de_gmean);
}

constexpr const char* kScoreHeader =
    "tpr_duration,ppv_duration,f1_duration,tpr_episode,ppv_episode,f1_episode,f1de_gmean";

}  // namespace

void emit_report(const Report& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        auto out = open_out(dir / "scores.csv");
        out << "subject,fold,variant,smoothing," << kScoreHeader
            << ",n_seizure_subclasses,n_non_seizure_subclasses\n";
        for (const auto& row : report.scores) {
            out << row.subject << ',' << (row.fold < 0 ? std::string("avg") : std::to_string(row.fold))
                << ',' << variant_name(row.variant) << ',' << (row.smoothed ? "smoothed" : "raw")
                << ',';
            write_score_fields(out, row.scores);
            out << ',' << fmt(row.n_seizure_subclasses) << ',' << fmt(row.n_non_seizure_subclasses)
                << '\n';
        }
    }

    {
        auto out = open_out(dir / "subclasses.csv");
        out << "subject,fold,variant,subclass_id,label,count,data_fraction\n";
        for (const auto& row : report.subclasses) {
            out << row.subject << ',' << row.fold << ',' << variant_name(row.variant) << ','
                << row.subclass_id << ',' << label_name(row.label) << ',' << row.count << ','
                << fmt(row.data_fraction) << '\n';
        }
    }

    {
        auto out = open_out(dir / "reduction_trace.csv");
        out << "subject,fold,variant,step,n_seizure,n_non_seizure,train_f1de_gmean,accepted\n";
        for (const auto& row : report.reduction_trace) {
            out << row.subject << ',' << row.fold << ',' << variant_name(row.variant) << ','
                << row.row.step << ',' << row.row.n_seizure << ',' << row.row.n_non_seizure << ','
                << fmt(row.row.train_score) << ',' << (row.row.accepted ? 1 : 0) << '\n';
        }
    }

    {
        auto out = open_out(dir / "summary.csv");
        out << "variant,smoothing," << kScoreHeader
            << ",n_seizure_subclasses,n_non_seizure_subclasses\n";
        for (const auto& row : report.scores) {
            if (row.subject != "ALL" || row.fold != -1) continue;
            out << variant_name(row.variant) << ',' << (row.smoothed ? "smoothed" : "raw") << ',';
            write_score_fields(out, row.scores);
            out << ',' << fmt(row.n_seizure_subclasses) << ',' << fmt(row.n_non_seizure_subclasses)
                << '\n';
        }
    }

    {
        auto out = open_out(dir / "config.json");
        out << report.config_json << '\n';
    }

    if (!report.warnings.empty()) {
        auto out = open_out(dir / "warnings.txt");
        for (const auto& w : report.warnings) out << w << '\n';
    }
}

void write_predictions_csv(const std::filesystem::path& path,
                           std::span<const PredictionRow> rows) {
    auto out = open_out(path);
    out << "time,raw_label,smoothed_label,subclass_id,distance\n";
    for (const auto& row : rows) {
        out << fmt(row.time) << ',' << static_cast<int>(row.raw) << ','
            << static_cast<int>(row.smoothed) << ',' << row.subclass_id << ','
            << fmt(row.distance) << '\n';
    }
}

}  // namespace mchd
