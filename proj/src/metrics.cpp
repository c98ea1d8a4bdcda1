#include "mchd/metrics.hpp"

#include <cmath>

#include "mchd/errors.hpp"

namespace mchd {

namespace {

void require_equal_length(const LabelSequence& pred, const LabelSequence& truth) {
    if (pred.size() != truth.size()) {
        throw UsageError("prediction/truth length mismatch: " + std::to_string(pred.size()) +
                         " vs " + std::to_string(truth.size()));
    }
}

struct Episode {
    std::size_t begin;
    std::size_t end;  // one past the last positive sample
};

std::vector<Episode> positive_runs(const LabelSequence& seq) {
    std::vector<Episode> runs;
    std::size_t i = 0;
    while (i < seq.size()) {
        if (seq.labels[i] == GlobalLabel::seizure) {
            std::size_t j = i;
            while (j < seq.size() && seq.labels[j] == GlobalLabel::seizure) ++j;
            runs.push_back({i, j});
            i = j;
        } else {
            ++i;
        }
    }
    return runs;
}

bool overlaps_positive(const Episode& ep, const LabelSequence& other) {
    for (std::size_t i = ep.begin; i < ep.end; ++i) {
        if (other.labels[i] == GlobalLabel::seizure) return true;
    }
    return false;
}

}  // namespace

LevelScores scores_from_counts(const BinaryCounts& c) {
    LevelScores s;
    const std::uint64_t pos = c.tp + c.fn;
    const std::uint64_t det = c.tp + c.fp;
    s.tpr = pos == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(pos);
    s.ppv = det == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(det);
    s.f1 = (s.tpr + s.ppv) > 0.0 ? 2.0 * s.tpr * s.ppv / (s.tpr + s.ppv) : 0.0;
    return s;
}

BinaryCounts duration_counts(const LabelSequence& pred, const LabelSequence& truth) {
    require_equal_length(pred, truth);
    BinaryCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool p = pred.labels[i] == GlobalLabel::seizure;
        const bool t = truth.labels[i] == GlobalLabel::seizure;
        c.tp += p && t;
        c.fp += p && !t;
        c.fn += !p && t;
    }
    return c;
}

BinaryCounts episode_counts(const LabelSequence& pred, const LabelSequence& truth) {
    require_equal_length(pred, truth);
    BinaryCounts c;
    for (const auto& ep : positive_runs(truth)) {
        if (overlaps_positive(ep, pred)) {
            ++c.tp;
        } else {
            ++c.fn;
        }
    }
    for (const auto& ep : positive_runs(pred)) {
        if (!overlaps_positive(ep, truth)) ++c.fp;
    }
    return c;
}

LevelScores duration_scores(const LabelSequence& pred, const LabelSequence& truth) {
    return scores_from_counts(duration_counts(pred, truth));
}

LevelScores episode_scores(const LabelSequence& pred, const LabelSequence& truth) {
    return scores_from_counts(episode_counts(pred, truth));
}

double f1de_gmean(double f1_duration, double f1_episode) {
    return std::sqrt(f1_duration * f1_episode);
}

ScoreSet score_sequences(const LabelSequence& pred, const LabelSequence& truth) {
    ScoreSet s;
    s.duration = duration_scores(pred, truth);
    s.episode = episode_scores(pred, truth);
    s.f1de_gmean = f1de_gmean(s.duration.f1, s.episode.f1);
    return s;
}

ScoreSet score_pooled(std::span<const SequencePair> pairs) {
    BinaryCounts dur, ep;
    for (const auto& pair : pairs) {
        dur += duration_counts(pair.pred, pair.truth);
        ep += episode_counts(pair.pred, pair.truth);
    }
    ScoreSet s;
    s.duration = scores_from_counts(dur);
    s.episode = scores_from_counts(ep);
    s.f1de_gmean = f1de_gmean(s.duration.f1, s.episode.f1);
    return s;
}

ScoreSet aggregate_scores(std::span<const ScoreSet> folds) {
    if (folds.empty()) throw UsageError("cannot aggregate an empty score list");
    ScoreSet mean;
    for (const auto& s : folds) {
        mean.duration.tpr += s.duration.tpr;
        mean.duration.ppv += s.duration.ppv;
        mean.duration.f1 += s.duration.f1;
        mean.episode.tpr += s.episode.tpr;
        mean.episode.ppv += s.episode.ppv;
        mean.episode.f1 += s.episode.f1;
        mean.f1de_gmean += s.f1de_gmean;
    }
    const double n = static_cast<double>(folds.size());
    mean.duration.tpr /= n;
    mean.duration.ppv /= n;
    mean.duration.f1 /= n;
    mean.episode.tpr /= n;
    mean.episode.ppv /= n;
    mean.episode.f1 /= n;
    mean.f1de_gmean /= n;
    return mean;
}

}  // namespace mchd
