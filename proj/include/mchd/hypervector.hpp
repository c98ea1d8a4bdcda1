#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mchd/errors.hpp"
#include "mchd/rng.hpp"

namespace mchd {

// Packed binary hypervector. Bits are stored in little-endian 64-bit words;
// bits at positions >= dim() in the last word are kept zero. Values are
// immutable after construction: all operations return new vectors.
class Hypervector {
public:
    static constexpr std::size_t kWordBits = 64;
    static constexpr std::size_t kMinDim = 64;

    Hypervector() = default;

    static Hypervector zeros(std::size_t dim);
    static Hypervector random(std::size_t dim, Rng& rng);
    static Hypervector from_words(std::size_t dim, std::vector<std::uint64_t> words);

    std::size_t dim() const { return dim_; }
    std::size_t num_words() const { return words_.size(); }
    bool empty() const { return dim_ == 0; }

    bool bit(std::size_t i) const {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
    }

    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const Hypervector&, const Hypervector&) = default;

private:
    Hypervector(std::size_t dim, std::vector<std::uint64_t> words)
        : dim_(dim), words_(std::move(words)) {}

    std::size_t dim_ = 0;
    std::vector<std::uint64_t> words_;

    friend class HypervectorBuilder;
};

// Mutable staging buffer for constructing hypervectors bit by bit or
// block by block; finish() seals the value and clears the tail bits.
class HypervectorBuilder {
public:
    explicit HypervectorBuilder(std::size_t dim);
    explicit HypervectorBuilder(const Hypervector& hv);

    void set_bit(std::size_t i, bool value);
    void flip_range(std::size_t begin, std::size_t end);
    std::uint64_t& word(std::size_t w) { return words_[w]; }

    Hypervector finish() &&;

private:
    std::size_t dim_;
    std::vector<std::uint64_t> words_;
};

// Number of 64-bit words needed for dim bits.
constexpr std::size_t words_for_dim(std::size_t dim) {
    return (dim + Hypervector::kWordBits - 1) / Hypervector::kWordBits;
}

void require_valid_dim(std::size_t dim);
void require_same_dim(const Hypervector& a, const Hypervector& b);

// XOR binding: associates a value with a slot; self-inverse and
// distance-preserving.
Hypervector bind(const Hypervector& a, const Hypervector& b);

// Number of differing bits.
std::size_t hamming_distance(const Hypervector& a, const Hypervector& b);

// Hamming distance divided by dim, in [0, 1].
double normalized_hamming(const Hypervector& a, const Hypervector& b);

// Fixed random vector used to resolve exact majority ties deterministically.
struct TieBreaker {
    Hypervector bits;

    static TieBreaker generate(std::size_t dim, Rng& rng) {
        return TieBreaker{Hypervector::random(dim, rng)};
    }
};

// Per-position bit counters for incremental bundling: sums[i] counts how many
// added vectors had bit i set, n counts the added vectors.
class BitAccumulator {
public:
    BitAccumulator() = default;
    explicit BitAccumulator(std::size_t dim);
    BitAccumulator(std::size_t dim, std::vector<std::uint32_t> sums, std::uint64_t n);

    std::size_t dim() const { return dim_; }
    std::uint64_t count() const { return n_; }
    std::span<const std::uint32_t> sums() const { return sums_; }

    void add(const Hypervector& hv);
    void merge(const BitAccumulator& other);

    // Majority vote: bit i is 1 iff 2*sums[i] > n, exact ties take the
    // tie-breaker bit. Adding nothing first is a usage error.
    Hypervector binarize(const TieBreaker& tiebreak) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint32_t> sums_;
    std::uint64_t n_ = 0;
};

// Per-position majority vote over a non-empty list of equal-dim vectors.
// Implemented as a bit-sliced carry-save adder, independently of
// BitAccumulator, so the two routes can cross-check each other.
Hypervector bundle(std::span<const Hypervector> vs, const TieBreaker& tiebreak);

}  // namespace mchd
