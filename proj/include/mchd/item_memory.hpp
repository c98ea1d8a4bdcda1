#pragma once

#include <cstdint>
#include <vector>

#include "mchd/hypervector.hpp"

namespace mchd {

// Ordered family of value vectors: vectors[k] is vectors[k-1] with the k-th
// block of block_bits bits complemented, so normalized Hamming distance grows
// exactly linearly with the level difference:
//   normalized_hamming(vectors[i], vectors[j]) == |i-j| * block_bits / dim.
struct LevelMemory {
    std::size_t dim = 0;
    std::size_t block_bits = 0;  // d
    std::vector<Hypervector> vectors;

    std::size_t num_levels() const { return vectors.size(); }
    const Hypervector& at(std::size_t level) const;
};

// One independent random vector per (channel, feature) slot.
struct ChFeatMemory {
    std::size_t dim = 0;
    std::size_t n_channels = 0;
    std::size_t n_features = 0;
    std::vector<Hypervector> vectors;  // row-major: channel * n_features + feature

    const Hypervector& at(std::size_t channel, std::size_t feature) const;
};

// Block size d = floor(dim / (2*(L-1))): the extreme levels differ in
// (L-1)*d bits, close to dim/2 (quasi-orthogonal).
LevelMemory generate_level_memory(std::size_t dim, std::size_t num_levels, Rng& rng);

ChFeatMemory generate_chfeat_memory(std::size_t n_channels, std::size_t n_features, std::size_t dim,
                                    Rng& rng);

}  // namespace mchd
