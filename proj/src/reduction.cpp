#include "mchd/reduction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace mchd {

namespace {

ReductionTraceRow trace_row(int step, const ModelMC& m, double score, bool accepted) {
    return {step, m.count_for_label(GlobalLabel::seizure),
            m.count_for_label(GlobalLabel::non_seizure), score, accepted};
}

// Indices of the k least-populated sub-classes (count ascending, then higher
// id first), never draining a label completely.
std::vector<std::size_t> select_least_populated(const ModelMC& model, std::size_t k) {
    std::vector<std::size_t> order(model.subclasses.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& sa = model.subclasses[a];
        const auto& sb = model.subclasses[b];
        if (sa.count() != sb.count()) return sa.count() < sb.count();
        return sa.id > sb.id;
    });

    std::array<std::size_t, 2> remaining{model.count_for_label(GlobalLabel::non_seizure),
                                         model.count_for_label(GlobalLabel::seizure)};
    std::vector<std::size_t> selected;
    for (std::size_t idx : order) {
        if (selected.size() == k) break;
        auto& left = remaining[static_cast<std::size_t>(model.subclasses[idx].label)];
        if (left <= 1) continue;
        --left;
        selected.push_back(idx);
    }
    return selected;
}

// Applies one reduction step to a copy of the model.
ModelMC apply_step(const ModelMC& model, const std::vector<std::size_t>& selected,
                   ReductionStrategy strategy) {
    std::vector<bool> removed(model.subclasses.size(), false);
    for (std::size_t idx : selected) removed[idx] = true;

    ModelMC next;
    next.dim = model.dim;
    next.tiebreak = model.tiebreak;
    next.next_id = model.next_id;

    if (strategy == ReductionStrategy::removal) {
        for (std::size_t i = 0; i < model.subclasses.size(); ++i) {
            if (!removed[i]) next.subclasses.push_back(model.subclasses[i]);
        }
        return next;
    }

    // Clustering: merge every selected sub-class into its nearest same-label
    // survivor, measured against the pre-step prototypes; ties to lowest id.
    std::vector<std::size_t> merge_target(model.subclasses.size(), 0);
    for (std::size_t idx : selected) {
        std::size_t best = std::numeric_limits<std::size_t>::max();
        std::size_t target = model.subclasses.size();
        for (std::size_t j = 0; j < model.subclasses.size(); ++j) {
            if (removed[j] || model.subclasses[j].label != model.subclasses[idx].label) continue;
            const std::size_t d =
                hamming_distance(model.subclasses[idx].prototype, model.subclasses[j].prototype);
            if (d < best) {
                best = d;
                target = j;
            }
        }
        assert(target < model.subclasses.size());
        merge_target[idx] = target;
    }

    std::vector<SubClass> merged(model.subclasses);
    std::vector<bool> dirty(model.subclasses.size(), false);
    for (std::size_t idx : selected) {
        merged[merge_target[idx]].acc.merge(model.subclasses[idx].acc);
        dirty[merge_target[idx]] = true;
    }
    for (std::size_t i = 0; i < merged.size(); ++i) {
        if (removed[i]) continue;
        if (dirty[i]) merged[i].prototype = merged[i].acc.binarize(model.tiebreak);
        next.subclasses.push_back(std::move(merged[i]));
    }
    return next;
}

}  // namespace

ScoreSet evaluate_on_segments(const ModelMC& model, std::span<const EvalSegment> segments,
                              int smooth_len) {
    std::vector<SequencePair> pairs;
    pairs.reserve(segments.size());
    for (const auto& seg : segments) {
        if (seg.windows.size() != seg.truth.size()) {
            throw UsageError("segment window/truth size mismatch");
        }
        SequencePair p;
        p.pred = smooth_labels(classify_sequence(model, seg.windows), smooth_len);
        p.truth.labels = seg.truth;
        pairs.push_back(std::move(p));
    }
    return score_pooled(pairs);
}

ReductionResult reduce(const ModelMC& model, std::span<const EvalSegment> train,
                       const ReductionConfig& cfg) {
    if (cfg.step_fraction <= 0.0 || cfg.step_fraction >= 1.0) {
        throw ConfigError("reduction step fraction must be in (0, 1)");
    }
    if (cfg.tolerance < 0.0) throw ConfigError("reduction tolerance must be non-negative");
    if (!model.has_label(GlobalLabel::seizure) || !model.has_label(GlobalLabel::non_seizure)) {
        throw UsageError("reduction needs at least one sub-class per label");
    }
    if (train.empty()) throw UsageError("reduction needs a non-empty training set");
    bool seen[2] = {false, false};
    for (const auto& seg : train) {
        for (auto l : seg.truth) seen[static_cast<std::size_t>(l)] = true;
    }
    if (!seen[0] || !seen[1]) throw UsageError("training set is missing a label");

    ReductionResult result;
    result.model = model;
    result.baseline_score =
        evaluate_on_segments(result.model, train, cfg.smooth_len).f1de_gmean;
    result.final_score = result.baseline_score;
    result.trace.push_back(trace_row(0, result.model, result.baseline_score, true));

    const double floor_score = (1.0 - cfg.tolerance) * result.baseline_score;
    int step = 1;
    while (true) {
        const std::size_t current = result.model.subclasses.size();
        const auto k = static_cast<std::size_t>(
            std::ceil(cfg.step_fraction * static_cast<double>(current)));
        const auto selected = select_least_populated(result.model, k);
        if (selected.empty()) break;

        ModelMC candidate = apply_step(result.model, selected, cfg.strategy);
        const double score = evaluate_on_segments(candidate, train, cfg.smooth_len).f1de_gmean;
        if (score < floor_score) {
            // Revert: keep the previous model, record the rejected step.
            result.trace.push_back(trace_row(step, candidate, score, false));
            break;
        }
        result.model = std::move(candidate);
        result.final_score = score;
        result.trace.push_back(trace_row(step, result.model, score, true));
        ++step;
    }

    assert(result.final_score >= floor_score);
    return result;
}

}  // namespace mchd
