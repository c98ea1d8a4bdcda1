#include "mchd/training.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace mchd {

namespace {

void require_stream(std::span<const LabeledVector> stream) {
    if (stream.empty()) throw UsageError("training stream is empty");
    for (const auto& lv : stream) require_same_dim(stream[0].hv, lv.hv);
}

}  // namespace

Model2C train_two_class(std::span<const LabeledVector> stream, const TieBreaker& tiebreak) {
    require_stream(stream);
    const std::size_t dim = stream[0].hv.dim();
    if (tiebreak.bits.dim() != dim) throw UsageError("tie-breaker dimension mismatch");

    ModelMC model;
    model.dim = dim;
    model.tiebreak = tiebreak;

    // One accumulator per label, created on first encounter; binarized once
    // after the pass.
    std::array<std::optional<std::size_t>, 2> slot;
    for (const auto& [hv, label] : stream) {
        auto& idx = slot[static_cast<std::size_t>(label)];
        if (!idx.has_value()) {
            idx = model.subclasses.size();
            SubClass sc;
            sc.id = model.next_id++;
            sc.label = label;
            sc.acc = BitAccumulator(dim);
            sc.acc.add(hv);
            model.subclasses.push_back(std::move(sc));
        } else {
            model.subclasses[*idx].acc.add(hv);
        }
    }
    if (model.subclasses.size() != 2) {
        throw DataError("two-class training requires both labels in the stream");
    }
    for (auto& sc : model.subclasses) sc.prototype = sc.acc.binarize(tiebreak);
    return model;
}

ModelMC train_multicentroid(std::span<const LabeledVector> stream, const TieBreaker& tiebreak,
                            const TrainOptions& options) {
    require_stream(stream);
    const std::size_t dim = stream[0].hv.dim();
    if (tiebreak.bits.dim() != dim) throw UsageError("tie-breaker dimension mismatch");

    const auto margin_bits =
        static_cast<std::size_t>(std::llround(options.margin * static_cast<double>(dim)));

    ModelMC model;
    model.dim = dim;
    model.tiebreak = tiebreak;

    constexpr std::size_t kNoDistance = std::numeric_limits<std::size_t>::max();
    for (const auto& [hv, label] : stream) {
        if (!model.has_label(label)) {
            model.add_subclass(label, hv);
            continue;
        }
        std::size_t best_correct = kNoDistance, best_wrong = kNoDistance;
        std::size_t correct_index = 0;
        for (std::size_t i = 0; i < model.subclasses.size(); ++i) {
            const std::size_t d = hamming_distance(hv, model.subclasses[i].prototype);
            if (model.subclasses[i].label == label) {
                if (d < best_correct) {
                    best_correct = d;
                    correct_index = i;
                }
            } else {
                best_wrong = std::min(best_wrong, d);
            }
        }
        // A wrong prototype must beat the best correct one strictly (plus
        // the optional margin) before a new sub-class is founded; exact ties
        // favor the correct label.
        if (best_wrong != kNoDistance && best_wrong + margin_bits < best_correct) {
            model.add_subclass(label, hv);
        } else {
            model.absorb(correct_index, hv);
        }
    }
    return model;
}

Nearest nearest_subclass(const ModelMC& model, const Hypervector& hv,
                         std::optional<GlobalLabel> prefer_label) {
    if (model.subclasses.empty()) throw UsageError("nearest_subclass on an empty model");

    Nearest best;
    std::size_t best_distance = std::numeric_limits<std::size_t>::max();
    int best_rank = 2;
    for (std::size_t i = 0; i < model.subclasses.size(); ++i) {
        const std::size_t d = hamming_distance(hv, model.subclasses[i].prototype);
        const int rank = prefer_label && model.subclasses[i].label == *prefer_label ? 0 : 1;
        // Scan order is ascending id, so on full ties the lowest id wins.
        if (d < best_distance || (d == best_distance && rank < best_rank)) {
            best_distance = d;
            best_rank = rank;
            best.index = i;
        }
    }
    best.distance_bits = best_distance;
    best.distance = static_cast<double>(best_distance) / static_cast<double>(model.dim);
    return best;
}

}  // namespace mchd
