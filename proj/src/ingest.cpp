#include "mchd/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace mchd {

std::string normalize_channel_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

Recording select_montage(const Recording& rec, std::span<const std::string> channel_list) {
    std::map<std::string, Eigen::Index> by_name;
    for (Eigen::Index c = 0; c < rec.n_channels(); ++c) {
        by_name.emplace(normalize_channel_name(rec.channels[static_cast<std::size_t>(c)]), c);
    }
    Recording out;
    out.id = rec.id;
    out.fs = rec.fs;
    out.samples.resize(static_cast<Eigen::Index>(channel_list.size()), rec.n_samples());
    for (std::size_t i = 0; i < channel_list.size(); ++i) {
        const auto it = by_name.find(normalize_channel_name(channel_list[i]));
        if (it == by_name.end()) {
            throw DataError("recording " + rec.id + " is missing channel " + channel_list[i]);
        }
        out.channels.push_back(channel_list[i]);
        out.samples.row(static_cast<Eigen::Index>(i)) = rec.samples.row(it->second);
    }
    return out;
}

std::size_t num_windows(Eigen::Index n_samples, double fs, const WindowSpec& spec) {
    const auto wlen = static_cast<Eigen::Index>(std::lround(spec.wlen_seconds * fs));
    const auto wstep = static_cast<Eigen::Index>(std::lround(spec.wstep_seconds * fs));
    if (wlen <= 0 || wstep <= 0) throw ConfigError("window length/step must be positive");
    if (n_samples < wlen) return 0;
    return static_cast<std::size_t>((n_samples - wlen) / wstep) + 1;
}

Eigen::MatrixXd window_samples(const Recording& rec, std::size_t index, const WindowSpec& spec) {
    const auto wlen = static_cast<Eigen::Index>(std::lround(spec.wlen_seconds * rec.fs));
    const auto wstep = static_cast<Eigen::Index>(std::lround(spec.wstep_seconds * rec.fs));
    const auto start = static_cast<Eigen::Index>(index) * wstep;
    if (start + wlen > rec.n_samples()) {
        throw UsageError("window " + std::to_string(index) + " exceeds the recording");
    }
    return rec.samples.middleCols(start, wlen);
}

std::vector<GlobalLabel> window_labels(Eigen::Index n_samples, double fs,
                                       std::span<const SeizureAnnotation> seizures,
                                       const WindowSpec& spec) {
    const auto wlen = static_cast<Eigen::Index>(std::lround(spec.wlen_seconds * fs));
    const auto wstep = static_cast<Eigen::Index>(std::lround(spec.wstep_seconds * fs));
    const std::size_t n = num_windows(n_samples, fs, spec);

    std::vector<GlobalLabel> labels(n, GlobalLabel::non_seizure);
    for (std::size_t i = 0; i < n; ++i) {
        const auto w0 = static_cast<Eigen::Index>(i) * wstep;
        const auto w1 = w0 + wlen;
        Eigen::Index inside = 0;
        for (const auto& ann : seizures) {
            const auto s0 = static_cast<Eigen::Index>(std::lround(ann.onset_seconds * fs));
            const auto s1 = static_cast<Eigen::Index>(std::lround(ann.offset_seconds * fs));
            inside += std::max<Eigen::Index>(0, std::min(w1, s1) - std::max(w0, s0));
        }
        if (2 * inside >= wlen) labels[i] = GlobalLabel::seizure;
    }
    return labels;
}

namespace {

struct FreeInterval {
    std::size_t recording;  // index into the recordings span
    Eigen::Index begin;     // samples
    Eigen::Index end;
};

// Exclusion-respecting intervals across all recordings, in sample units.
std::vector<FreeInterval> eligible_intervals(std::span<const Recording> recordings,
                                             std::span<const SeizureAnnotation> annotations) {
    std::vector<FreeInterval> free;
    for (std::size_t r = 0; r < recordings.size(); ++r) {
        const auto& rec = recordings[r];
        std::vector<std::pair<Eigen::Index, Eigen::Index>> excluded;
        for (const auto& ann : annotations) {
            if (ann.recording_id != rec.id) continue;
            const double lo = ann.onset_seconds - kExclusionBeforeOnset;
            const double hi = ann.offset_seconds + kExclusionAfterOffset;
            excluded.emplace_back(
                std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor(lo * rec.fs))),
                std::min<Eigen::Index>(rec.n_samples(),
                                       static_cast<Eigen::Index>(std::ceil(hi * rec.fs))));
        }
        std::sort(excluded.begin(), excluded.end());
        Eigen::Index cursor = 0;
        for (const auto& [lo, hi] : excluded) {
            if (lo > cursor) free.push_back({r, cursor, lo});
            cursor = std::max(cursor, hi);
        }
        if (cursor < rec.n_samples()) free.push_back({r, cursor, rec.n_samples()});
    }
    return free;
}

}  // namespace

std::vector<SubjectFile> build_subject_files(const std::string& subject,
                                             std::span<const Recording> recordings,
                                             std::span<const SeizureAnnotation> annotations,
                                             int factor, std::uint64_t seed) {
    if (factor < 1) throw ConfigError("balancing factor must be >= 1");
    if (recordings.empty()) throw DataError("no recordings for subject " + subject);
    if (annotations.size() < 2) {
        throw DataError("subject " + subject +
                        " needs at least 2 seizures for leave-one-seizure-out");
    }
    const double fs = recordings[0].fs;
    const auto n_channels = recordings[0].n_channels();
    for (const auto& rec : recordings) {
        if (rec.fs != fs || rec.n_channels() != n_channels) {
            throw DataError("recordings of subject " + subject +
                            " disagree on sampling rate or channel count");
        }
    }

    auto free_pool = eligible_intervals(recordings, annotations);

    // Stable seizure order: by recording position, then onset.
    std::vector<SeizureAnnotation> seizures(annotations.begin(), annotations.end());
    std::map<std::string, std::size_t> rec_order;
    for (std::size_t r = 0; r < recordings.size(); ++r) rec_order[recordings[r].id] = r;
    std::stable_sort(seizures.begin(), seizures.end(), [&](const auto& a, const auto& b) {
        const auto ra = rec_order.find(a.recording_id);
        const auto rb = rec_order.find(b.recording_id);
        if (ra == rec_order.end() || rb == rec_order.end()) {
            throw DataError("annotation references unknown recording");
        }
        if (ra->second != rb->second) return ra->second < rb->second;
        return a.onset_seconds < b.onset_seconds;
    });

    const auto min_chunk = static_cast<Eigen::Index>(std::lround(kMinChunkSeconds * fs));

    std::vector<SubjectFile> files;
    for (std::size_t k = 0; k < seizures.size(); ++k) {
        const auto& ann = seizures[k];
        const auto& src = recordings[rec_order.at(ann.recording_id)];
        const auto s0 = static_cast<Eigen::Index>(std::lround(ann.onset_seconds * fs));
        const auto s1 = static_cast<Eigen::Index>(std::lround(ann.offset_seconds * fs));
        if (s0 >= s1 || s1 > src.n_samples()) {
            throw DataError("seizure annotation outside recording " + ann.recording_id);
        }

        SubjectFile file;
        file.subject = subject;
        file.index = static_cast<int>(k);
        file.seed = derive_seed(seed, subject + "/file", k);
        Rng rng(file.seed);

        // Draw interictal chunks without replacement until the balance
        // target is met.
        struct Chunk {
            std::size_t recording;
            Eigen::Index begin;
            Eigen::Index length;
        };
        std::vector<Chunk> chunks;
        Eigen::Index remaining = static_cast<Eigen::Index>(factor) * (s1 - s0);
        while (remaining > 0) {
            const Eigen::Index want = std::min(remaining, min_chunk);
            Eigen::Index candidate_total = 0;
            for (const auto& iv : free_pool) {
                if (iv.end - iv.begin >= want) candidate_total += iv.end - iv.begin;
            }
            if (candidate_total == 0) {
                throw DataError("insufficient eligible interictal data for subject " + subject);
            }
            // Interval chosen with probability proportional to its length.
            std::uint64_t target = uniform_below(rng, static_cast<std::uint64_t>(candidate_total));
            std::size_t chosen = free_pool.size();
            for (std::size_t i = 0; i < free_pool.size(); ++i) {
                const auto len = free_pool[i].end - free_pool[i].begin;
                if (len < want) continue;
                if (target < static_cast<std::uint64_t>(len)) {
                    chosen = i;
                    break;
                }
                target -= static_cast<std::uint64_t>(len);
            }
            FreeInterval& iv = free_pool[chosen];
            const auto slack = iv.end - iv.begin - want;
            const auto start =
                iv.begin + static_cast<Eigen::Index>(uniform_below(rng, static_cast<std::uint64_t>(slack) + 1));
            chunks.push_back({iv.recording, start, want});
            remaining -= want;

            // Split the interval around the consumed chunk. The reference
            // into free_pool must not be used once the vector is modified.
            const FreeInterval right{iv.recording, start + want, iv.end};
            iv.end = start;
            const bool left_empty = iv.end - iv.begin <= 0;
            if (left_empty) free_pool.erase(free_pool.begin() + static_cast<std::ptrdiff_t>(chosen));
            if (right.end - right.begin > 0) free_pool.push_back(right);
        }

        // The seizure goes at a random position among the chunks.
        const auto seizure_slot =
            static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(chunks.size()) + 1));

        Eigen::Index total = s1 - s0;
        for (const auto& c : chunks) total += c.length;
        file.signal.id = subject + "_f" + std::to_string(k);
        file.signal.fs = fs;
        file.signal.channels = recordings[0].channels;
        file.signal.samples.resize(n_channels, total);

        Eigen::Index cursor = 0;
        auto append = [&](const Recording& rec, Eigen::Index begin, Eigen::Index len, bool is_seizure) {
            file.signal.samples.middleCols(cursor, len) = rec.samples.middleCols(begin, len);
            file.provenance.push_back({rec.id, static_cast<double>(begin) / fs,
                                       static_cast<double>(len) / fs, is_seizure});
            if (is_seizure) {
                file.seizure_onset = static_cast<double>(cursor) / fs;
                file.seizure_offset = static_cast<double>(cursor + len) / fs;
            }
            cursor += len;
        };
        for (std::size_t i = 0; i <= chunks.size(); ++i) {
            if (i == seizure_slot) append(src, s0, s1 - s0, true);
            if (i < chunks.size()) {
                append(recordings[chunks[i].recording], chunks[i].begin, chunks[i].length, false);
            }
        }
        files.push_back(std::move(file));
    }
    return files;
}

}  // namespace mchd
