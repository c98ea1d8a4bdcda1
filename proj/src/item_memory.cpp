#include "mchd/item_memory.hpp"

#include <string>

namespace mchd {

const Hypervector& LevelMemory::at(std::size_t level) const {
    if (level >= vectors.size()) {
        throw UsageError("level " + std::to_string(level) + " out of range (L=" +
                         std::to_string(vectors.size()) + ")");
    }
    return vectors[level];
}

const Hypervector& ChFeatMemory::at(std::size_t channel, std::size_t feature) const {
    if (channel >= n_channels || feature >= n_features) {
        throw UsageError("channel/feature index out of range");
    }
    return vectors[channel * n_features + feature];
}

LevelMemory generate_level_memory(std::size_t dim, std::size_t num_levels, Rng& rng) {
    require_valid_dim(dim);
    if (num_levels < 2) throw ConfigError("level memory needs at least 2 levels");
    const std::size_t d = dim / (2 * (num_levels - 1));
    if (d == 0) {
        throw ConfigError("too many levels (" + std::to_string(num_levels) + ") for dimension " +
                          std::to_string(dim));
    }

    LevelMemory mem;
    mem.dim = dim;
    mem.block_bits = d;
    mem.vectors.reserve(num_levels);
    mem.vectors.push_back(Hypervector::random(dim, rng));
    for (std::size_t k = 1; k < num_levels; ++k) {
        HypervectorBuilder next(mem.vectors.back());
        next.flip_range((k - 1) * d, k * d);
        mem.vectors.push_back(std::move(next).finish());
    }
    return mem;
}

ChFeatMemory generate_chfeat_memory(std::size_t n_channels, std::size_t n_features, std::size_t dim,
                                    Rng& rng) {
    require_valid_dim(dim);
    if (n_channels < 1 || n_features < 1) {
        throw ConfigError("channel-feature memory needs at least one channel and one feature");
    }
    ChFeatMemory mem;
    mem.dim = dim;
    mem.n_channels = n_channels;
    mem.n_features = n_features;
    mem.vectors.reserve(n_channels * n_features);
    for (std::size_t i = 0; i < n_channels * n_features; ++i) {
        mem.vectors.push_back(Hypervector::random(dim, rng));
    }
    return mem;
}

}  // namespace mchd
