#include "mchd/encoder.hpp"

#include <string>
#include <vector>

namespace mchd {

EncoderContext make_encoder_context(std::size_t dim, std::size_t num_levels,
                                    std::size_t n_channels, std::size_t n_features,
                                    std::uint64_t seed) {
    Rng rng(seed);
    EncoderContext ctx;
    ctx.levels = generate_level_memory(dim, num_levels, rng);
    ctx.chfeat = generate_chfeat_memory(n_channels, n_features, dim, rng);
    ctx.tiebreak = TieBreaker::generate(dim, rng);
    return ctx;
}

Hypervector encode_window(const Eigen::Ref<const DiscretizedFeatures>& levels,
                          const EncoderContext& ctx) {
    const auto n_channels = static_cast<Eigen::Index>(ctx.n_channels());
    const auto n_features = static_cast<Eigen::Index>(ctx.n_features());
    if (levels.rows() != n_channels || levels.cols() != n_features) {
        throw UsageError("discretized feature shape does not match the encoder context");
    }

    std::vector<Hypervector> bound;
    bound.reserve(static_cast<std::size_t>(n_channels * n_features));
    for (Eigen::Index c = 0; c < n_channels; ++c) {
        for (Eigen::Index f = 0; f < n_features; ++f) {
            const int level = levels(c, f);
            if (level < 0 || static_cast<std::size_t>(level) >= ctx.num_levels()) {
                throw UsageError("level " + std::to_string(level) + " out of range at channel " +
                                 std::to_string(c) + ", feature " + std::to_string(f));
            }
            bound.push_back(bind(ctx.chfeat.at(static_cast<std::size_t>(c), static_cast<std::size_t>(f)),
                                 ctx.levels.at(static_cast<std::size_t>(level))));
        }
    }
    return bundle(bound, ctx.tiebreak);
}

}  // namespace mchd
