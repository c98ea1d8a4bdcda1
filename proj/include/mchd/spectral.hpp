#pragma once

#include <Eigen/Dense>

#include "mchd/errors.hpp"

namespace mchd {

// One-sided power spectral density. Scaled so that psd.sum() * df
// approximates the mean square of the input (Welch density convention).
struct PowerSpectrum {
    Eigen::VectorXd freq;  // Hz, freq[k] = k * df
    Eigen::VectorXd psd;   // power density per Hz
    double df = 0.0;

    // Integrated power over [lo, hi]; hi_inclusive widens the upper edge to
    // f <= hi instead of f < hi.
    double band_power(double lo, double hi, bool hi_inclusive = false) const;
    double total_power() const { return psd.sum() * df; }
};

// Welch's method: Hann-windowed segments of segment_seconds with the given
// fractional overlap, periodogram average. Segments longer than the signal
// are clamped to the signal length.
PowerSpectrum welch_psd(const Eigen::Ref<const Eigen::VectorXd>& x, double fs,
                        double segment_seconds = 2.0, double overlap = 0.5);

}  // namespace mchd
