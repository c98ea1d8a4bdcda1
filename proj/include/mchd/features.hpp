#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <string_view>

#include "mchd/errors.hpp"
#include "mchd/spectral.hpp"

namespace mchd {

// Per-channel feature vector layout, fixed across the entire pipeline:
//   [0]      mean absolute amplitude
//   [1..37]  entropy bank (37 values, see feature_names() for the order)
//   [38..45] frequency bank: 6 relative band powers (LF, delta, theta,
//            alpha, beta, gamma), total power in [0, 45] Hz, spectral edge
//            frequency at 90% of total power
inline constexpr int kNumFeatures = 46;
inline constexpr int kEntropyBankSize = 37;
inline constexpr int kFrequencyBankSize = 8;

const std::array<std::string_view, kNumFeatures>& feature_names();

// Machine-readable description of the feature ordering and every parameter
// of the bank; written alongside trained models for reproducibility.
std::string feature_manifest_json();

// --- individual features (exposed for direct testing) ---

// Richman-Moorman sample entropy with Chebyshev template distance.
// Conventions for finiteness: zero variance or B == 0 -> 0;
// A == 0 -> ln((N-m)(N-m-1)/2).
double sample_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int m, double r);

// Pincus approximate entropy (self-matches included).
double approximate_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int m, double r);

// Ordinal-pattern entropy in bits; ties are broken by position.
double permutation_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int order, int delay);

// Shannon entropy (bits) of a num_bins histogram over [min, max].
double histogram_shannon_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins);

// Renyi / Tsallis entropies over the same histogram.
double histogram_renyi_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins, double alpha);
double histogram_tsallis_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins, double q);

// Entropies of an explicit discrete distribution (must sum to ~1).
double shannon_entropy(const Eigen::Ref<const Eigen::VectorXd>& p);
double renyi_entropy(const Eigen::Ref<const Eigen::VectorXd>& p, double alpha);
double tsallis_entropy(const Eigen::Ref<const Eigen::VectorXd>& p, double q);

// Entropy of the normalized singular spectrum of the delay-embedded signal.
double svd_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int embedding, int delay);

// Shannon entropy of the normalized PSD divided by log2(#bins), in [0, 1].
double normalized_spectral_entropy(const PowerSpectrum& ps);

// Fisher information of the normalized singular spectrum.
double fisher_information(const Eigen::Ref<const Eigen::VectorXd>& x, int embedding, int delay);

double katz_fractal_dimension(const Eigen::Ref<const Eigen::VectorXd>& x);

// --- banks ---

// 8 frequency-domain features. Band relative powers are taken against the
// total power in [0, 45] Hz; zero total power yields the degenerate
// convention of 1/6 per band. Requires fs >= 90 to resolve the gamma edge.
Eigen::VectorXd frequency_bank(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

// The 6-band relative power distribution used by the band entropies.
Eigen::VectorXd band_distribution(const PowerSpectrum& ps);

// 37 entropy features in the documented order.
Eigen::VectorXd entropy_bank(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

// All 46 features for one channel.
Eigen::VectorXd extract_channel_features(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

// channels x 46 feature matrix for one window (rows are channels).
Eigen::MatrixXd extract_window_features(const Eigen::Ref<const Eigen::MatrixXd>& window, double fs);

}  // namespace mchd
