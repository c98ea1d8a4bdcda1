#include "mchd/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace mchd {

namespace {

// Pinned Box-Muller so synthetic data does not depend on the standard
// library's normal_distribution implementation.
double gaussian(Rng& rng) {
    double u1 = uniform_unit(rng);
    if (u1 <= 0.0) u1 = 1e-300;
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// The third background mode is a deliberate spectral near-twin of the second
// seizure mode (13 vs 13.2 Hz): a single blended prototype cannot keep them
// apart, which is the regime where per-mode centroids pay off.
const std::vector<SignalMode>& default_non_seizure_modes() {
    static const std::vector<SignalMode> modes{
        {9.0, 20.0, 5.0, 6.0},   // resting alpha
        {2.5, 40.0, 10.0, 8.0},  // slow-wave
        {13.0, 25.0, 8.0, 7.0},  // beta-band activity
        {6.0, 25.0, 6.0, 6.0},   // theta
        {11.0, 15.0, 4.0, 5.0},
    };
    return modes;
}

const std::vector<SignalMode>& default_seizure_modes() {
    static const std::vector<SignalMode> modes{
        {5.0, 120.0, 50.0, 15.0},  // high-amplitude spike-wave
        {13.2, 60.0, 20.0, 10.0},  // rhythmic beta activity
        {3.5, 90.0, 30.0, 12.0},
    };
    return modes;
}

std::vector<SignalMode> pick_modes(const std::vector<SignalMode>& overrides,
                                   const std::vector<SignalMode>& defaults, int n,
                                   const char* what) {
    if (n < 1) throw ConfigError(std::string("need at least one ") + what + " mode");
    const auto& source = overrides.empty() ? defaults : overrides;
    std::vector<SignalMode> out;
    for (int i = 0; i < n; ++i) {
        SignalMode m = source[static_cast<std::size_t>(i) % source.size()];
        // Wrapping past the table shifts the band to keep modes distinct.
        m.base_freq_hz += 1.7 * static_cast<double>(i / static_cast<int>(source.size()));
        out.push_back(m);
    }
    return out;
}

}  // namespace

SyntheticSubject generate_synthetic_subject(const SyntheticSubjectConfig& cfg) {
    if (cfg.n_seizures < 2) throw ConfigError("need at least 2 seizures for leave-one-out");
    if (cfg.n_channels < 1) throw ConfigError("need at least one channel");
    if (cfg.fs < 90.0) throw ConfigError("synthetic sampling rate must be >= 90 Hz");

    const auto seiz_modes =
        pick_modes(cfg.seizure_modes, default_seizure_modes(), cfg.n_seizure_modes, "seizure");
    const auto non_modes = pick_modes(cfg.non_seizure_modes, default_non_seizure_modes(),
                                      cfg.n_non_seizure_modes, "non-seizure");

    const double dur = cfg.seizure_duration_seconds;
    double gap_eligible = cfg.eligible_gap_seconds;
    if (gap_eligible <= 0.0) {
        gap_eligible = std::max(180.0, 1.4 * static_cast<double>(cfg.factor) * dur);
    }
    const double gap = kExclusionAfterOffset + gap_eligible + kExclusionBeforeOnset;

    std::vector<double> onsets;
    for (int k = 0; k < cfg.n_seizures; ++k) {
        onsets.push_back(cfg.lead_in_seconds + static_cast<double>(k) * (dur + gap));
    }
    const double total_seconds = onsets.back() + dur + kExclusionAfterOffset + gap_eligible;
    const auto n_samples = static_cast<Eigen::Index>(std::llround(total_seconds * cfg.fs));

    Rng rng(derive_seed(cfg.seed, cfg.subject + "/signal"));

    // Per-channel gain and per-(channel, mode) phases, fixed up front.
    const std::size_t n_modes_total = seiz_modes.size() + non_modes.size();
    std::vector<double> channel_gain(static_cast<std::size_t>(cfg.n_channels));
    std::vector<double> phase(static_cast<std::size_t>(cfg.n_channels) * n_modes_total);
    std::vector<double> phase2(phase.size());
    for (auto& g : channel_gain) g = uniform_real(rng, 0.85, 1.15);
    for (auto& p : phase) p = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
    for (auto& p : phase2) p = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);

    Recording rec;
    rec.id = cfg.subject + "_r0";
    rec.fs = cfg.fs;
    for (int c = 0; c < cfg.n_channels; ++c) rec.channels.push_back("CH" + std::to_string(c + 1));
    rec.samples.resize(cfg.n_channels, n_samples);

    // During a seizure the seizure rhythm is superimposed on the ongoing
    // background regime (seizures do not silence the background EEG). This
    // also makes window features interpolate monotonically across seizure
    // edges instead of forming a third signal family.
    auto seizure_at = [&](double t) -> std::ptrdiff_t {
        for (std::size_t k = 0; k < onsets.size(); ++k) {
            if (t >= onsets[k] && t < onsets[k] + dur) {
                return static_cast<std::ptrdiff_t>(k % seiz_modes.size());
            }
        }
        return -1;
    };

    const double two_pi = 2.0 * std::numbers::pi;
    auto mode_signal = [&](const SignalMode& mode, std::size_t mode_idx, int c, double t) {
        const std::size_t pi_idx = static_cast<std::size_t>(c) * n_modes_total + mode_idx;
        return mode.amplitude * std::sin(two_pi * mode.base_freq_hz * t + phase[pi_idx]) +
               mode.harmonic_amplitude *
                   std::sin(two_pi * 2.0 * mode.base_freq_hz * t + phase2[pi_idx]);
    };

    for (Eigen::Index i = 0; i < n_samples; ++i) {
        const double t = static_cast<double>(i) / cfg.fs;
        const auto block = static_cast<std::size_t>(t / cfg.regime_block_seconds);
        const std::size_t bg = block % non_modes.size();
        const std::ptrdiff_t seiz = seizure_at(t);
        for (int c = 0; c < cfg.n_channels; ++c) {
            double value = mode_signal(non_modes[bg], seiz_modes.size() + bg, c, t);
            double noise_amp = non_modes[bg].noise_amplitude;
            if (seiz >= 0) {
                const auto m = static_cast<std::size_t>(seiz);
                value += mode_signal(seiz_modes[m], m, c, t);
                noise_amp = std::max(noise_amp, seiz_modes[m].noise_amplitude);
            }
            rec.samples(c, i) = channel_gain[static_cast<std::size_t>(c)] * value +
                                noise_amp * gaussian(rng);
        }
    }

    SyntheticSubject out;
    out.annotations.reserve(onsets.size());
    for (double onset : onsets) out.annotations.push_back({rec.id, onset, onset + dur});
    out.recordings.push_back(std::move(rec));
    return out;
}

}  // namespace mchd
