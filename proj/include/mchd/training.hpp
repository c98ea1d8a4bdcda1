#pragma once

#include <optional>
#include <span>

#include "mchd/model.hpp"

namespace mchd {

struct LabeledVector {
    Hypervector hv;
    GlobalLabel label;
};

struct TrainOptions {
    // Extra margin (normalized Hamming) a wrong-class prototype must win by
    // before a new sub-class is created. 0 reproduces the plain
    // nearest-prototype-is-wrong-class rule.
    double margin = 0.0;
};

// Classical single-pass baseline: one accumulator per label absorbs every
// vector of that label; prototypes are binarized once at the end.
Model2C train_two_class(std::span<const LabeledVector> stream, const TieBreaker& tiebreak);

// Semi-supervised multi-centroid trainer. Single pass, order-sensitive:
// a vector founds a new sub-class of its label when the nearest prototype
// across all sub-classes belongs to a wrong label, otherwise it is absorbed
// into the nearest correct-label sub-class (tie goes to the correct label,
// then to the lowest id).
ModelMC train_multicentroid(std::span<const LabeledVector> stream, const TieBreaker& tiebreak,
                            const TrainOptions& options = {});

struct Nearest {
    std::size_t index = 0;       // position in model.subclasses
    std::size_t distance_bits = 0;
    double distance = 0.0;       // normalized
};

// Global argmin by Hamming distance over all sub-classes. Exact integer
// distance ties are broken toward prefer_label (when set), then toward the
// lowest id.
Nearest nearest_subclass(const ModelMC& model, const Hypervector& hv,
                         std::optional<GlobalLabel> prefer_label = std::nullopt);

}  // namespace mchd
