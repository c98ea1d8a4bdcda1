#pragma once

#include <span>

#include "mchd/labels.hpp"
#include "mchd/training.hpp"

namespace mchd {

struct Classification {
    GlobalLabel label = GlobalLabel::non_seizure;
    std::uint32_t subclass_id = 0;
    double distance = 0.0;
};

// Label of the nearest sub-class; exact distance ties prefer non_seizure,
// then the lowest id. The sub-class id is returned for interpretability.
Classification classify_window(const ModelMC& model, const Hypervector& hv);

// One decision per window, in stream order.
LabelSequence classify_sequence(const ModelMC& model, std::span<const Hypervector> windows);
std::vector<Classification> classify_detailed(const ModelMC& model,
                                              std::span<const Hypervector> windows);

enum class SmoothingAlignment { causal, centered };

// Majority vote over a trailing window of window_len labels (window_len must
// be odd); the first window_len-1 positions use the shorter available
// prefix. Majority ties resolve to non_seizure. Centered alignment looks
// (window_len-1)/2 labels ahead instead.
LabelSequence smooth_labels(const LabelSequence& seq, int window_len = 5,
                            SmoothingAlignment alignment = SmoothingAlignment::causal);

}  // namespace mchd
