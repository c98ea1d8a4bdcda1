#pragma once

#include <cstdint>
#include <vector>

namespace mchd {

enum class GlobalLabel : std::uint8_t { non_seizure = 0, seizure = 1 };

constexpr const char* label_name(GlobalLabel l) {
    return l == GlobalLabel::seizure ? "seizure" : "non_seizure";
}

// One classifier decision per second (window step), contiguous.
struct LabelSequence {
    std::vector<GlobalLabel> labels;
    double start_time = 0.0;  // seconds offset of the first label

    std::size_t size() const { return labels.size(); }
};

}  // namespace mchd
