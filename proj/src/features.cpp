#include "mchd/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

namespace mchd {

namespace {

constexpr int kHistogramBins = 20;
constexpr double kTemplateRadiusSigma = 0.2;
constexpr std::array<int, 5> kPermutationOrders{3, 4, 5, 6, 7};
constexpr std::array<int, 3> kPermutationDelays{1, 2, 3};
constexpr std::array<double, 5> kRenyiAlphas{0.5, 2.0, 3.0, 4.0, 5.0};
constexpr std::array<double, 5> kTsallisQs{0.5, 2.0, 3.0, 4.0, 5.0};
constexpr int kEmbeddingDim = 3;
constexpr int kEmbeddingDelay = 1;
constexpr double kSpectralEdgeFraction = 0.9;
constexpr double kAnalysisBandHz = 45.0;

struct Band {
    const char* name;
    double lo;
    double hi;
    bool hi_inclusive;
};
constexpr std::array<Band, 6> kBands{{{"lf", 0.0, 0.5, false},
                                      {"delta", 0.5, 4.0, false},
                                      {"theta", 4.0, 8.0, false},
                                      {"alpha", 8.0, 12.0, false},
                                      {"beta", 12.0, 30.0, false},
                                      {"gamma", 30.0, 45.0, true}}};

double population_std(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double mean = x.mean();
    return std::sqrt((x.array() - mean).square().sum() / static_cast<double>(x.size()));
}

double log2_safe(double p) { return std::log2(p); }

// Histogram probabilities over [min, max]; constant input puts all mass in
// one bin.
Eigen::VectorXd histogram_probs(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(num_bins);
    const double lo = x.minCoeff();
    const double hi = x.maxCoeff();
    if (!(hi > lo)) {
        p[0] = 1.0;
        return p;
    }
    const double scale = static_cast<double>(num_bins) / (hi - lo);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        int bin = static_cast<int>((x[i] - lo) * scale);
        bin = std::clamp(bin, 0, num_bins - 1);
        p[bin] += 1.0;
    }
    p /= static_cast<double>(x.size());
    return p;
}

// Normalized singular spectrum of the (n - (e-1)*d) x e delay embedding,
// descending. Empty when the embedding is degenerate.
Eigen::VectorXd normalized_singular_spectrum(const Eigen::Ref<const Eigen::VectorXd>& x,
                                             int embedding, int delay) {
    const Eigen::Index rows = x.size() - static_cast<Eigen::Index>(embedding - 1) * delay;
    if (rows < embedding) return Eigen::VectorXd();
    Eigen::MatrixXd y(rows, embedding);
    for (int c = 0; c < embedding; ++c) y.col(c) = x.segment(c * delay, rows);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(y.transpose() * y);
    Eigen::VectorXd sv = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
    const double total = sv.sum();
    if (!(total > 0.0)) return Eigen::VectorXd();
    return sv / total;
}

// Pair-counting kernel shared by the template entropies: counts, for every
// template start i in [0, n_templates), how many j != i match to length m
// under the Chebyshev distance r (early exit on the first mismatch).
std::vector<std::uint32_t> template_match_counts(const double* x, Eigen::Index n_templates, int m,
                                                 double r) {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(n_templates), 0);
    for (Eigen::Index i = 0; i + 1 < n_templates; ++i) {
        for (Eigen::Index j = i + 1; j < n_templates; ++j) {
            bool match = true;
            for (int k = 0; k < m; ++k) {
                if (std::abs(x[i + k] - x[j + k]) > r) {
                    match = false;
                    break;
                }
            }
            if (match) {
                ++counts[static_cast<std::size_t>(i)];
                ++counts[static_cast<std::size_t>(j)];
            }
        }
    }
    return counts;
}

}  // namespace

double sample_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int m, double r) {
    const Eigen::Index n = x.size();
    if (n < m + 2) return 0.0;
    if (!(r > 0.0)) return 0.0;

    // Both template lengths are counted over the first n - m start indices.
    std::uint64_t b_count = 0, a_count = 0;
    const double* d = x.data();
    for (Eigen::Index i = 0; i + 1 < n - m; ++i) {
        for (Eigen::Index j = i + 1; j < n - m; ++j) {
            bool match = true;
            for (int k = 0; k < m; ++k) {
                if (std::abs(d[i + k] - d[j + k]) > r) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            ++b_count;
            if (std::abs(d[i + m] - d[j + m]) <= r) ++a_count;
        }
    }
    if (b_count == 0) return 0.0;
    const double nm = static_cast<double>(n - m);
    if (a_count == 0) return std::log(nm * (nm - 1.0) / 2.0);
    return -std::log(static_cast<double>(a_count) / static_cast<double>(b_count));
}

double approximate_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int m, double r) {
    const Eigen::Index n = x.size();
    if (n < m + 2) return 0.0;
    if (!(r > 0.0)) return 0.0;

    auto phi = [&](int mm) {
        const Eigen::Index nt = n - mm + 1;
        const auto counts = template_match_counts(x.data(), nt, mm, r);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < nt; ++i) {
            // +1 for the self-match, so the argument is never zero.
            acc += std::log(static_cast<double>(counts[static_cast<std::size_t>(i)] + 1) /
                            static_cast<double>(nt));
        }
        return acc / static_cast<double>(nt);
    };
    const double apen = phi(m) - phi(m + 1);
    return apen > 0.0 ? apen : 0.0;
}

double permutation_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int order, int delay) {
    const Eigen::Index span = static_cast<Eigen::Index>(order - 1) * delay;
    const Eigen::Index n_patterns = x.size() - span;
    if (n_patterns < 1) return 0.0;

    std::size_t factorial = 1;
    for (int k = 2; k <= order; ++k) factorial *= static_cast<std::size_t>(k);
    std::vector<std::uint32_t> counts(factorial, 0);

    std::array<int, 8> idx{};
    for (Eigen::Index t = 0; t < n_patterns; ++t) {
        for (int k = 0; k < order; ++k) idx[static_cast<std::size_t>(k)] = k;
        std::stable_sort(idx.begin(), idx.begin() + order, [&](int a, int b) {
            return x[t + static_cast<Eigen::Index>(a) * delay] <
                   x[t + static_cast<Eigen::Index>(b) * delay];
        });
        // Lehmer code of the rank permutation.
        std::size_t code = 0;
        for (int k = 0; k < order; ++k) {
            int smaller = 0;
            for (int l = k + 1; l < order; ++l) smaller += idx[static_cast<std::size_t>(l)] < idx[static_cast<std::size_t>(k)];
            code = code * static_cast<std::size_t>(order - k) + static_cast<std::size_t>(smaller);
        }
        ++counts[code];
    }

    double h = 0.0;
    for (std::uint32_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n_patterns);
        h -= p * log2_safe(p);
    }
    return h;
}

double shannon_entropy(const Eigen::Ref<const Eigen::VectorXd>& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) h -= p[i] * log2_safe(p[i]);
    }
    return h;
}

double renyi_entropy(const Eigen::Ref<const Eigen::VectorXd>& p, double alpha) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) s += std::pow(p[i], alpha);
    }
    if (!(s > 0.0)) return 0.0;
    return log2_safe(s) / (1.0 - alpha);
}

double tsallis_entropy(const Eigen::Ref<const Eigen::VectorXd>& p, double q) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) s += std::pow(p[i], q);
    }
    return (1.0 - s) / (q - 1.0);
}

double histogram_shannon_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins) {
    return shannon_entropy(histogram_probs(x, num_bins));
}

double histogram_renyi_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins,
                               double alpha) {
    return renyi_entropy(histogram_probs(x, num_bins), alpha);
}

double histogram_tsallis_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int num_bins,
                                 double q) {
    return tsallis_entropy(histogram_probs(x, num_bins), q);
}

double svd_entropy(const Eigen::Ref<const Eigen::VectorXd>& x, int embedding, int delay) {
    const Eigen::VectorXd sv = normalized_singular_spectrum(x, embedding, delay);
    if (sv.size() == 0) return 0.0;
    return shannon_entropy(sv);
}

double normalized_spectral_entropy(const PowerSpectrum& ps) {
    const double total = ps.psd.sum();
    if (!(total > 0.0) || ps.psd.size() < 2) return 0.0;
    const Eigen::VectorXd p = ps.psd / total;
    return shannon_entropy(p) / log2_safe(static_cast<double>(p.size()));
}

double fisher_information(const Eigen::Ref<const Eigen::VectorXd>& x, int embedding, int delay) {
    const Eigen::VectorXd sv = normalized_singular_spectrum(x, embedding, delay);
    double fi = 0.0;
    for (Eigen::Index i = 0; i + 1 < sv.size(); ++i) {
        if (sv[i] > 0.0) fi += (sv[i + 1] - sv[i]) * (sv[i + 1] - sv[i]) / sv[i];
    }
    return fi;
}

double katz_fractal_dimension(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::Index n = x.size();
    if (n < 2) return 0.0;
    double length = 0.0, extent = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
        length += std::abs(x[i] - x[i - 1]);
        extent = std::max(extent, std::abs(x[i] - x[0]));
    }
    if (!(length > 0.0) || !(extent > 0.0)) return 0.0;
    const double log_n = std::log10(static_cast<double>(n - 1));
    const double denom = log_n + std::log10(extent / length);
    if (!(denom > 0.0)) return 0.0;
    return log_n / denom;
}

Eigen::VectorXd band_distribution(const PowerSpectrum& ps) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(kBands.size()));
    double total = 0.0;
    for (std::size_t b = 0; b < kBands.size(); ++b) {
        p[static_cast<Eigen::Index>(b)] = ps.band_power(kBands[b].lo, kBands[b].hi, kBands[b].hi_inclusive);
        total += p[static_cast<Eigen::Index>(b)];
    }
    if (!(total > 0.0)) {
        p.setConstant(1.0 / static_cast<double>(kBands.size()));
        return p;
    }
    return p / total;
}

Eigen::VectorXd frequency_bank(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
    if (fs < 2.0 * kAnalysisBandHz) {
        throw ConfigError("sampling rate " + std::to_string(fs) +
                          " Hz cannot resolve the 45 Hz gamma band edge");
    }
    const PowerSpectrum ps = welch_psd(x, fs);
    Eigen::VectorXd out(kFrequencyBankSize);
    out.head<6>() = band_distribution(ps);
    const double total = ps.band_power(0.0, kAnalysisBandHz, true);
    out[6] = total;

    // Spectral edge: smallest frequency below which 90% of the analysis-band
    // power lies. Zero power -> edge 0.
    double edge = 0.0;
    if (total > 0.0) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < ps.freq.size() && ps.freq[k] <= kAnalysisBandHz + 1e-9; ++k) {
            acc += ps.psd[k] * ps.df;
            if (acc >= kSpectralEdgeFraction * total) {
                edge = ps.freq[k];
                break;
            }
        }
    }
    out[7] = edge;
    return out;
}

Eigen::VectorXd entropy_bank(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
    Eigen::VectorXd out(kEntropyBankSize);
    Eigen::Index at = 0;

    const double sigma = population_std(x);
    const double r = kTemplateRadiusSigma * sigma;
    out[at++] = sample_entropy(x, 2, r);
    out[at++] = sample_entropy(x, 3, r);

    for (int order : kPermutationOrders) {
        for (int delay : kPermutationDelays) {
            out[at++] = permutation_entropy(x, order, delay);
        }
    }

    out[at++] = histogram_shannon_entropy(x, kHistogramBins);
    for (double alpha : kRenyiAlphas) out[at++] = histogram_renyi_entropy(x, kHistogramBins, alpha);
    for (double q : kTsallisQs) out[at++] = histogram_tsallis_entropy(x, kHistogramBins, q);

    const PowerSpectrum ps = welch_psd(x, fs);
    const Eigen::VectorXd bands = band_distribution(ps);
    out[at++] = shannon_entropy(bands);
    out[at++] = renyi_entropy(bands, 2.0);
    out[at++] = tsallis_entropy(bands, 2.0);

    out[at++] = approximate_entropy(x, 2, r);
    out[at++] = approximate_entropy(x, 3, r);

    out[at++] = svd_entropy(x, kEmbeddingDim, kEmbeddingDelay);
    out[at++] = normalized_spectral_entropy(ps);
    out[at++] = fisher_information(x, kEmbeddingDim, kEmbeddingDelay);
    out[at++] = katz_fractal_dimension(x);

    return out;
}

Eigen::VectorXd extract_channel_features(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
    if (x.size() < 16) throw DataError("window too short for feature extraction");
    Eigen::VectorXd out(kNumFeatures);
    out[0] = x.cwiseAbs().mean();
    out.segment(1, kEntropyBankSize) = entropy_bank(x, fs);
    out.segment(1 + kEntropyBankSize, kFrequencyBankSize) = frequency_bank(x, fs);
    return out;
}

Eigen::MatrixXd extract_window_features(const Eigen::Ref<const Eigen::MatrixXd>& window, double fs) {
    Eigen::MatrixXd out(window.rows(), kNumFeatures);
    for (Eigen::Index c = 0; c < window.rows(); ++c) {
        out.row(c) = extract_channel_features(window.row(c).transpose(), fs);
    }
    return out;
}

const std::array<std::string_view, kNumFeatures>& feature_names() {
    static const std::array<std::string_view, kNumFeatures> names = [] {
        static std::vector<std::string> storage;
        storage.reserve(kNumFeatures);
        storage.emplace_back("mean_amplitude");
        storage.emplace_back("sample_entropy_m2");
        storage.emplace_back("sample_entropy_m3");
        for (int order : kPermutationOrders) {
            for (int delay : kPermutationDelays) {
                storage.push_back("perm_entropy_o" + std::to_string(order) + "_d" +
                                  std::to_string(delay));
            }
        }
        storage.emplace_back("shannon_entropy_hist20");
        for (double alpha : kRenyiAlphas) {
            std::string a = alpha == 0.5 ? "05" : std::to_string(static_cast<int>(alpha));
            storage.push_back("renyi_entropy_a" + a);
        }
        for (double q : kTsallisQs) {
            std::string s = q == 0.5 ? "05" : std::to_string(static_cast<int>(q));
            storage.push_back("tsallis_entropy_q" + s);
        }
        storage.emplace_back("shannon_entropy_bands");
        storage.emplace_back("renyi_entropy_a2_bands");
        storage.emplace_back("tsallis_entropy_q2_bands");
        storage.emplace_back("approx_entropy_m2");
        storage.emplace_back("approx_entropy_m3");
        storage.emplace_back("svd_entropy");
        storage.emplace_back("spectral_entropy_norm");
        storage.emplace_back("fisher_information");
        storage.emplace_back("katz_fractal_dim");
        for (const auto& band : kBands) storage.push_back(std::string("relpow_") + band.name);
        storage.emplace_back("total_power_0_45");
        storage.emplace_back("spectral_edge_90");

        std::array<std::string_view, kNumFeatures> out{};
        for (int i = 0; i < kNumFeatures; ++i) out[static_cast<std::size_t>(i)] = storage[static_cast<std::size_t>(i)];
        return out;
    }();
    return names;
}

std::string feature_manifest_json() {
    nlohmann::json j;
    j["num_features"] = kNumFeatures;
    j["order"] = nlohmann::json::array();
    for (auto name : feature_names()) j["order"].push_back(std::string(name));
    j["mean_amplitude"] = {{"kind", "mean absolute value"}};
    j["sample_entropy"] = {{"m", {2, 3}}, {"r", "0.2 * std"}};
    j["approximate_entropy"] = {{"m", {2, 3}}, {"r", "0.2 * std"}};
    j["permutation_entropy"] = {{"orders", kPermutationOrders}, {"delays", kPermutationDelays}, {"units", "bits"}};
    j["histogram"] = {{"bins", kHistogramBins}, {"range", "min..max"}};
    j["renyi_alphas"] = kRenyiAlphas;
    j["tsallis_qs"] = kTsallisQs;
    j["svd_embedding"] = {{"dim", kEmbeddingDim}, {"delay", kEmbeddingDelay}};
    j["welch"] = {{"segment_seconds", 2.0}, {"overlap", 0.5}, {"window", "hann"}};
    j["bands_hz"] = nlohmann::json::array();
    for (const auto& b : kBands) j["bands_hz"].push_back({{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
    j["analysis_band_hz"] = kAnalysisBandHz;
    j["spectral_edge_fraction"] = kSpectralEdgeFraction;
    return j.dump(2);
}

}  // namespace mchd
