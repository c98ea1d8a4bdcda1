#pragma once

#include <cstdint>
#include <span>

#include "mchd/errors.hpp"
#include "mchd/labels.hpp"

namespace mchd {

struct LevelScores {
    double tpr = 0.0;
    double ppv = 0.0;
    double f1 = 0.0;
};

struct ScoreSet {
    LevelScores duration;
    LevelScores episode;
    double f1de_gmean = 0.0;
};

// Raw confusion counts, summable across files for pooled scoring.
struct BinaryCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    BinaryCounts& operator+=(const BinaryCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

// Degenerate conventions: TP+FN == 0 -> TPR = 0, TP+FP == 0 -> PPV = 0,
// TPR+PPV == 0 -> F1 = 0, so averaging across folds never divides by zero.
LevelScores scores_from_counts(const BinaryCounts& c);

// Sample-wise counts with seizure as the positive class.
BinaryCounts duration_counts(const LabelSequence& pred, const LabelSequence& truth);

// Episode counts: episodes are maximal runs of positive labels. A true
// episode counts as detected iff it overlaps at least one predicted positive
// sample; a predicted episode is false iff it overlaps no true positive.
BinaryCounts episode_counts(const LabelSequence& pred, const LabelSequence& truth);

LevelScores duration_scores(const LabelSequence& pred, const LabelSequence& truth);
LevelScores episode_scores(const LabelSequence& pred, const LabelSequence& truth);

double f1de_gmean(double f1_duration, double f1_episode);

ScoreSet score_sequences(const LabelSequence& pred, const LabelSequence& truth);

// Pooled score over several (pred, truth) files: confusion counts are summed
// before the ratios are taken. Used as the reduction stopping signal.
struct SequencePair {
    LabelSequence pred;
    LabelSequence truth;
};
ScoreSet score_pooled(std::span<const SequencePair> pairs);

// Per-fold aggregation: arithmetic mean of every field; the per-fold
// f1de_gmean values are averaged directly rather than recomputed from the
// averaged F1 components.
ScoreSet aggregate_scores(std::span<const ScoreSet> folds);

}  // namespace mchd
