#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mchd/errors.hpp"
#include "mchd/labels.hpp"
#include "mchd/rng.hpp"

namespace mchd {

struct Recording {
    std::string id;
    std::vector<std::string> channels;
    double fs = 0.0;
    Eigen::MatrixXd samples;  // channels x samples

    Eigen::Index n_channels() const { return samples.rows(); }
    Eigen::Index n_samples() const { return samples.cols(); }
    double duration_seconds() const { return static_cast<double>(n_samples()) / fs; }
};

struct SeizureAnnotation {
    std::string recording_id;
    double onset_seconds = 0.0;
    double offset_seconds = 0.0;
};

// Channel names are matched after normalization (uppercase, whitespace
// stripped), and the result is reordered to the requested canonical order.
std::string normalize_channel_name(std::string_view name);
Recording select_montage(const Recording& rec, std::span<const std::string> channel_list);

// --- windowing ---

struct WindowSpec {
    double wlen_seconds = 8.0;
    double wstep_seconds = 1.0;
};

std::size_t num_windows(Eigen::Index n_samples, double fs, const WindowSpec& spec);

// Samples of window i: [i*wstep, i*wstep + wlen) in sample units.
Eigen::MatrixXd window_samples(const Recording& rec, std::size_t index, const WindowSpec& spec);

// A window is seizure-labeled iff at least 50% of its samples lie inside a
// seizure interval.
std::vector<GlobalLabel> window_labels(Eigen::Index n_samples, double fs,
                                       std::span<const SeizureAnnotation> seizures,
                                       const WindowSpec& spec);

// --- balanced per-seizure files ---

struct SegmentProvenance {
    std::string source_recording;
    double source_offset_seconds = 0.0;
    double duration_seconds = 0.0;
    bool is_seizure = false;
};

// One seizure plus factor x (seizure duration) of interictal data assembled
// into a continuous recording; every sample is traceable to its source.
struct SubjectFile {
    std::string subject;
    int index = 0;
    Recording signal;
    double seizure_onset = 0.0;   // within the assembled signal
    double seizure_offset = 0.0;
    std::vector<SegmentProvenance> provenance;
    std::uint64_t seed = 0;

    SeizureAnnotation annotation() const { return {signal.id, seizure_onset, seizure_offset}; }
};

// Seconds excluded around every seizure when sampling interictal data.
inline constexpr double kExclusionBeforeOnset = 60.0;
inline constexpr double kExclusionAfterOffset = 900.0;
// Interictal data is drawn as contiguous chunks of at least this length
// (shorter only when the remaining need is smaller).
inline constexpr double kMinChunkSeconds = 60.0;

// Builds one file per seizure. Interictal chunks are drawn without
// replacement from the exclusion-respecting regions of all recordings, so no
// sample is shared between files; the seizure segment is placed at a seeded
// random position among the chunks.
std::vector<SubjectFile> build_subject_files(const std::string& subject,
                                             std::span<const Recording> recordings,
                                             std::span<const SeizureAnnotation> annotations,
                                             int factor, std::uint64_t seed);

}  // namespace mchd
