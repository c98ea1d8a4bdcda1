#pragma once

#include "mchd/ingest.hpp"

namespace mchd {

// One planted signal regime: a dominant oscillation with a harmonic plus
// broadband noise. Modes are made distinguishable by disjoint dominant
// bands and amplitude scales.
struct SignalMode {
    double base_freq_hz = 10.0;
    double amplitude = 20.0;
    double harmonic_amplitude = 5.0;
    double noise_amplitude = 5.0;
};

struct SyntheticSubjectConfig {
    std::string subject = "synth01";
    int n_seizure_modes = 2;
    int n_non_seizure_modes = 3;
    int n_seizures = 6;
    int factor = 10;  // sizes the eligible interictal budget
    double fs = 128.0;
    int n_channels = 4;
    double seizure_duration_seconds = 24.0;
    double regime_block_seconds = 30.0;
    double lead_in_seconds = 400.0;
    // Eligible interictal seconds between consecutive exclusion zones;
    // 0 sizes it automatically from factor and the seizure duration.
    double eligible_gap_seconds = 0.0;
    std::uint64_t seed = 1;
    // Overrides for the built-in mode tables (first n entries are used).
    std::vector<SignalMode> seizure_modes;
    std::vector<SignalMode> non_seizure_modes;
};

struct SyntheticSubject {
    std::vector<Recording> recordings;
    std::vector<SeizureAnnotation> annotations;
};

// Deterministic multi-regime EEG-like test signal. Non-seizure time cycles
// through the non-seizure modes in fixed blocks; seizure k is drawn from
// seizure mode k mod n_seizure_modes. Seizures are spaced so that the
// interictal exclusion zones leave enough eligible data for
// build_subject_files at the configured factor.
SyntheticSubject generate_synthetic_subject(const SyntheticSubjectConfig& cfg);

}  // namespace mchd
