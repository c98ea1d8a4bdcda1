#include "mchd/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mchd/errors.hpp"

namespace mchd {

double PowerSpectrum::band_power(double lo, double hi, bool hi_inclusive) const {
    double acc = 0.0;
    // Small tolerance so band edges that coincide with bin frequencies are
    // assigned consistently despite floating-point rounding.
    const double eps = 1e-9 * df;
    for (Eigen::Index k = 0; k < freq.size(); ++k) {
        const double f = freq[k];
        const bool above = f >= lo - eps;
        const bool below = hi_inclusive ? f <= hi + eps : f < hi - eps;
        if (above && below) acc += psd[k];
    }
    return acc * df;
}

PowerSpectrum welch_psd(const Eigen::Ref<const Eigen::VectorXd>& x, double fs,
                        double segment_seconds, double overlap) {
    if (x.size() == 0) throw UsageError("welch_psd on an empty signal");
    if (fs <= 0.0) throw ConfigError("sampling rate must be positive");
    if (overlap < 0.0 || overlap >= 1.0) throw ConfigError("overlap must be in [0, 1)");

    const Eigen::Index n = x.size();
    Eigen::Index nseg = static_cast<Eigen::Index>(std::lround(segment_seconds * fs));
    nseg = std::min(nseg, n);
    if (nseg < 2) nseg = std::min<Eigen::Index>(2, n);
    const Eigen::Index hop =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround((1.0 - overlap) * static_cast<double>(nseg))));

    // Periodic Hann window.
    Eigen::VectorXd window(nseg);
    for (Eigen::Index i = 0; i < nseg; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(nseg)));
    }
    const double win_power = window.squaredNorm();

    const Eigen::Index nbins = nseg / 2 + 1;
    Eigen::VectorXd psd = Eigen::VectorXd::Zero(nbins);

    Eigen::FFT<double> fft;
    std::vector<double> seg(static_cast<std::size_t>(nseg));
    std::vector<std::complex<double>> spectrum;
    Eigen::Index nsegments = 0;
    for (Eigen::Index start = 0; start + nseg <= n; start += hop) {
        for (Eigen::Index i = 0; i < nseg; ++i) {
            seg[static_cast<std::size_t>(i)] = x[start + i] * window[i];
        }
        fft.fwd(spectrum, seg);
        for (Eigen::Index k = 0; k < nbins; ++k) {
            double p = std::norm(spectrum[static_cast<std::size_t>(k)]);
            // One-sided: double everything except DC and (for even nseg) Nyquist.
            if (k != 0 && !(nseg % 2 == 0 && k == nbins - 1)) p *= 2.0;
            psd[k] += p;
        }
        ++nsegments;
    }
    psd /= static_cast<double>(nsegments) * fs * win_power;

    PowerSpectrum out;
    out.df = fs / static_cast<double>(nseg);
    out.freq = Eigen::VectorXd::LinSpaced(nbins, 0.0, out.df * static_cast<double>(nbins - 1));
    out.psd = std::move(psd);
    return out;
}

}  // namespace mchd
