#include "mchd/hypervector.hpp"

#include <bit>
#include <string>

namespace mchd {

namespace {

// Mask selecting the valid bits of the last word (all-ones when dim is a
// multiple of 64).
std::uint64_t tail_mask(std::size_t dim) {
    const std::size_t rem = dim % Hypervector::kWordBits;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

void require_valid_dim(std::size_t dim) {
    if (dim < Hypervector::kMinDim) {
        throw ConfigError("hypervector dimension must be at least 64, got " + std::to_string(dim));
    }
}

void require_same_dim(const Hypervector& a, const Hypervector& b) {
    if (a.dim() != b.dim()) {
        throw UsageError("hypervector dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
    }
}

Hypervector Hypervector::zeros(std::size_t dim) {
    require_valid_dim(dim);
    return Hypervector(dim, std::vector<std::uint64_t>(words_for_dim(dim), 0));
}

Hypervector Hypervector::random(std::size_t dim, Rng& rng) {
    require_valid_dim(dim);
    std::vector<std::uint64_t> words(words_for_dim(dim));
    for (auto& w : words) w = rng();
    words.back() &= tail_mask(dim);
    return Hypervector(dim, std::move(words));
}

Hypervector Hypervector::from_words(std::size_t dim, std::vector<std::uint64_t> words) {
    require_valid_dim(dim);
    if (words.size() != words_for_dim(dim)) {
        throw UsageError("word count does not match dimension");
    }
    words.back() &= tail_mask(dim);
    return Hypervector(dim, std::move(words));
}

HypervectorBuilder::HypervectorBuilder(std::size_t dim) : dim_(dim), words_(words_for_dim(dim), 0) {
    require_valid_dim(dim);
}

HypervectorBuilder::HypervectorBuilder(const Hypervector& hv)
    : dim_(hv.dim()), words_(hv.words().begin(), hv.words().end()) {}

void HypervectorBuilder::set_bit(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i % Hypervector::kWordBits);
    if (value) {
        words_[i / Hypervector::kWordBits] |= mask;
    } else {
        words_[i / Hypervector::kWordBits] &= ~mask;
    }
}

void HypervectorBuilder::flip_range(std::size_t begin, std::size_t end) {
    for (std::size_t w = begin / Hypervector::kWordBits; w * Hypervector::kWordBits < end; ++w) {
        const std::size_t lo = w * Hypervector::kWordBits;
        std::uint64_t mask = ~std::uint64_t{0};
        if (begin > lo) mask &= ~std::uint64_t{0} << (begin - lo);
        if (end < lo + Hypervector::kWordBits) mask &= (std::uint64_t{1} << (end - lo)) - 1;
        words_[w] ^= mask;
    }
}

Hypervector HypervectorBuilder::finish() && {
    words_.back() &= tail_mask(dim_);
    return Hypervector::from_words(dim_, std::move(words_));
}

Hypervector bind(const Hypervector& a, const Hypervector& b) {
    require_same_dim(a, b);
    std::vector<std::uint64_t> words(a.num_words());
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t i = 0; i < words.size(); ++i) words[i] = wa[i] ^ wb[i];
    return Hypervector::from_words(a.dim(), std::move(words));
}

std::size_t hamming_distance(const Hypervector& a, const Hypervector& b) {
    require_same_dim(a, b);
    const auto wa = a.words();
    const auto wb = b.words();
    std::size_t dist = 0;
    for (std::size_t i = 0; i < wa.size(); ++i) dist += std::popcount(wa[i] ^ wb[i]);
    return dist;
}

double normalized_hamming(const Hypervector& a, const Hypervector& b) {
    return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.dim());
}

BitAccumulator::BitAccumulator(std::size_t dim) : dim_(dim), sums_(dim, 0) {
    require_valid_dim(dim);
}

BitAccumulator::BitAccumulator(std::size_t dim, std::vector<std::uint32_t> sums, std::uint64_t n)
    : dim_(dim), sums_(std::move(sums)), n_(n) {
    require_valid_dim(dim);
    if (sums_.size() != dim_) throw UsageError("accumulator sums size does not match dimension");
}

void BitAccumulator::add(const Hypervector& hv) {
    if (hv.dim() != dim_) throw UsageError("accumulator/hypervector dimension mismatch");
    const auto words = hv.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        const std::uint64_t x = words[w];
        std::uint32_t* s = sums_.data() + w * Hypervector::kWordBits;
        const std::size_t nbits = std::min<std::size_t>(Hypervector::kWordBits, dim_ - w * Hypervector::kWordBits);
        for (std::size_t b = 0; b < nbits; ++b) s[b] += (x >> b) & 1u;
    }
    ++n_;
}

void BitAccumulator::merge(const BitAccumulator& other) {
    if (other.dim_ != dim_) throw UsageError("accumulator dimension mismatch");
    for (std::size_t i = 0; i < dim_; ++i) sums_[i] += other.sums_[i];
    n_ += other.n_;
}

Hypervector BitAccumulator::binarize(const TieBreaker& tiebreak) const {
    if (n_ == 0) throw UsageError("cannot binarize an empty accumulator");
    if (tiebreak.bits.dim() != dim_) throw UsageError("tie-breaker dimension mismatch");
    HypervectorBuilder out(dim_);
    for (std::size_t w = 0; w * Hypervector::kWordBits < dim_; ++w) {
        const std::size_t base = w * Hypervector::kWordBits;
        const std::size_t nbits = std::min<std::size_t>(Hypervector::kWordBits, dim_ - base);
        const std::uint64_t tb = tiebreak.bits.words()[w];
        std::uint64_t word = 0;
        for (std::size_t b = 0; b < nbits; ++b) {
            const std::uint64_t twice = 2ull * sums_[base + b];
            std::uint64_t bit;
            if (twice > n_) {
                bit = 1;
            } else if (twice == n_) {
                bit = (tb >> b) & 1u;
            } else {
                bit = 0;
            }
            word |= bit << b;
        }
        out.word(w) = word;
    }
    return std::move(out).finish();
}

Hypervector bundle(std::span<const Hypervector> vs, const TieBreaker& tiebreak) {
    if (vs.empty()) throw UsageError("cannot bundle an empty list");
    const std::size_t dim = vs[0].dim();
    for (const auto& v : vs) require_same_dim(vs[0], v);
    if (tiebreak.bits.dim() != dim) throw UsageError("tie-breaker dimension mismatch");

    // Bit-sliced counters: planes[p] holds bit p of the per-position count.
    const std::size_t nw = vs[0].num_words();
    std::vector<std::vector<std::uint64_t>> planes;
    std::vector<std::uint64_t> carry(nw);
    for (const auto& v : vs) {
        const auto words = v.words();
        std::copy(words.begin(), words.end(), carry.begin());
        for (std::size_t p = 0; p < planes.size(); ++p) {
            bool any = false;
            for (std::size_t w = 0; w < nw; ++w) {
                const std::uint64_t next_carry = planes[p][w] & carry[w];
                planes[p][w] ^= carry[w];
                carry[w] = next_carry;
                any |= next_carry != 0;
            }
            if (!any) {
                carry.assign(nw, 0);
                break;
            }
        }
        if (std::any_of(carry.begin(), carry.end(), [](std::uint64_t c) { return c != 0; })) {
            planes.push_back(carry);
        }
    }

    const std::uint64_t n = vs.size();
    HypervectorBuilder out(dim);
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t base = w * Hypervector::kWordBits;
        const std::size_t nbits = std::min<std::size_t>(Hypervector::kWordBits, dim - base);
        const std::uint64_t tb = tiebreak.bits.words()[w];
        std::uint64_t word = 0;
        for (std::size_t b = 0; b < nbits; ++b) {
            std::uint64_t cnt = 0;
            for (std::size_t p = 0; p < planes.size(); ++p) cnt |= ((planes[p][w] >> b) & 1u) << p;
            const std::uint64_t twice = 2 * cnt;
            std::uint64_t bit;
            if (twice > n) {
                bit = 1;
            } else if (twice == n) {
                bit = (tb >> b) & 1u;
            } else {
                bit = 0;
            }
            word |= bit << b;
        }
        out.word(w) = word;
    }
    return std::move(out).finish();
}

}  // namespace mchd
