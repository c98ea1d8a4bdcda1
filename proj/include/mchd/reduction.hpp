#pragma once

#include <span>
#include <vector>

#include "mchd/inference.hpp"
#include "mchd/metrics.hpp"
#include "mchd/model.hpp"

namespace mchd {

enum class ReductionStrategy { removal, clustering };

constexpr const char* reduction_strategy_name(ReductionStrategy s) {
    return s == ReductionStrategy::removal ? "removal" : "clustering";
}

struct ReductionConfig {
    double step_fraction = 0.10;   // fraction of the current sub-class count per step
    double tolerance = 0.03;       // allowed relative drop in training F1DEgmean
    ReductionStrategy strategy = ReductionStrategy::removal;
    int smooth_len = 5;            // label smoothing used by the stopping signal
};

// One contiguous training file: encoded windows and their truth labels.
struct EvalSegment {
    std::vector<Hypervector> windows;
    std::vector<GlobalLabel> truth;
};

// Smoothed, pooled training-set score of a model over the given segments.
ScoreSet evaluate_on_segments(const ModelMC& model, std::span<const EvalSegment> segments,
                              int smooth_len);

struct ReductionTraceRow {
    int step = 0;  // 0 is the unreduced baseline
    std::size_t n_seizure = 0;
    std::size_t n_non_seizure = 0;
    double train_score = 0.0;
    bool accepted = true;
};

struct ReductionResult {
    ModelMC model;
    std::vector<ReductionTraceRow> trace;
    double baseline_score = 0.0;
    double final_score = 0.0;
};

// Iteratively shrinks the model from the least-populated sub-classes while
// the smoothed training F1DEgmean stays within (1 - tolerance) of the
// unreduced baseline; the violating step is reverted, so the bound holds on
// the returned model by construction. The last sub-class of a label is never
// selected.
ReductionResult reduce(const ModelMC& model, std::span<const EvalSegment> train,
                       const ReductionConfig& cfg);

}  // namespace mchd
