#include "mchd/inference.hpp"

namespace mchd {

Classification classify_window(const ModelMC& model, const Hypervector& hv) {
    const auto nearest = nearest_subclass(model, hv, GlobalLabel::non_seizure);
    const auto& sc = model.subclasses[nearest.index];
    return {sc.label, sc.id, nearest.distance};
}

LabelSequence classify_sequence(const ModelMC& model, std::span<const Hypervector> windows) {
    LabelSequence seq;
    seq.labels.reserve(windows.size());
    for (const auto& hv : windows) seq.labels.push_back(classify_window(model, hv).label);
    return seq;
}

std::vector<Classification> classify_detailed(const ModelMC& model,
                                              std::span<const Hypervector> windows) {
    std::vector<Classification> out;
    out.reserve(windows.size());
    for (const auto& hv : windows) out.push_back(classify_window(model, hv));
    return out;
}

LabelSequence smooth_labels(const LabelSequence& seq, int window_len,
                            SmoothingAlignment alignment) {
    if (seq.labels.empty()) throw UsageError("cannot smooth an empty label sequence");
    if (window_len < 1 || window_len % 2 == 0) {
        throw UsageError("smoothing window length must be odd and positive");
    }

    const auto n = static_cast<std::ptrdiff_t>(seq.size());
    const std::ptrdiff_t lookahead =
        alignment == SmoothingAlignment::centered ? (window_len - 1) / 2 : 0;

    LabelSequence out;
    out.start_time = seq.start_time;
    out.labels.resize(seq.size());
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        const std::ptrdiff_t hi = std::min(n - 1, t + lookahead);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, hi - (window_len - 1));
        int positives = 0;
        for (std::ptrdiff_t i = lo; i <= hi; ++i) {
            positives += seq.labels[static_cast<std::size_t>(i)] == GlobalLabel::seizure;
        }
        const int width = static_cast<int>(hi - lo + 1);
        // Strict majority; ties fall to non_seizure.
        out.labels[static_cast<std::size_t>(t)] =
            2 * positives > width ? GlobalLabel::seizure : GlobalLabel::non_seizure;
    }
    return out;
}

}  // namespace mchd
