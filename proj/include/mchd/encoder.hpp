#pragma once

#include "mchd/calibration.hpp"
#include "mchd/item_memory.hpp"

namespace mchd {

// Static memories consulted while encoding; initialized once per model from
// a single seed and shared read-only across windows.
struct EncoderContext {
    LevelMemory levels;
    ChFeatMemory chfeat;
    TieBreaker tiebreak;

    std::size_t dim() const { return levels.dim; }
    std::size_t num_levels() const { return levels.num_levels(); }
    std::size_t n_channels() const { return chfeat.n_channels; }
    std::size_t n_features() const { return chfeat.n_features; }
};

// Deterministic context: level memory, channel-feature memory and the
// tie-breaker are drawn from one seeded stream in a fixed order.
EncoderContext make_encoder_context(std::size_t dim, std::size_t num_levels,
                                    std::size_t n_channels, std::size_t n_features,
                                    std::uint64_t seed);

// One window -> one hypervector: every (channel, feature) slot vector is
// bound (XOR) to the level vector of its discretized value, and all N*M
// bound vectors are bundled in a single flat majority vote.
Hypervector encode_window(const Eigen::Ref<const DiscretizedFeatures>& levels,
                          const EncoderContext& ctx);

}  // namespace mchd
