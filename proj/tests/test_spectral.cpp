#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mchd/spectral.hpp"

using namespace mchd;

namespace {

Eigen::VectorXd sine(double freq_hz, double fs, double seconds, double amplitude = 1.0) {
    const Eigen::Index n = static_cast<Eigen::Index>(seconds * fs);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / fs);
    }
    return x;
}

Eigen::VectorXd gaussian_noise(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
    return x;
}

}  // namespace

TEST_CASE("sine power concentrates at its frequency") {
    const double fs = 256.0;
    const auto ps = welch_psd(sine(10.0, fs, 8.0), fs);
    Eigen::Index peak;
    ps.psd.maxCoeff(&peak);
    CHECK(ps.freq[peak] == doctest::Approx(10.0).epsilon(0.05));
    // Most of the power sits in a narrow band around 10 Hz.
    CHECK(ps.band_power(8.0, 12.0) / ps.total_power() > 0.95);
}

TEST_CASE("welch total power matches time-domain variance on white noise") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = gaussian_noise(rng, 2048);
        x.array() -= x.mean();
        const double variance = x.squaredNorm() / static_cast<double>(x.size());
        const auto ps = welch_psd(x, 256.0);
        CHECK(ps.total_power() == doctest::Approx(variance).epsilon(0.10));
    }
}

TEST_CASE("sine mean-square power is recovered") {
    // A unit sine has mean square 0.5.
    const auto ps = welch_psd(sine(16.0, 256.0, 8.0), 256.0);
    CHECK(ps.total_power() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("band edges partition the spectrum") {
    std::mt19937_64 rng(7);
    const auto ps = welch_psd(gaussian_noise(rng, 2048), 256.0);
    const double parts = ps.band_power(0.0, 0.5) + ps.band_power(0.5, 4.0) +
                         ps.band_power(4.0, 8.0) + ps.band_power(8.0, 12.0) +
                         ps.band_power(12.0, 30.0) + ps.band_power(30.0, 45.0, true);
    CHECK(parts == doctest::Approx(ps.band_power(0.0, 45.0, true)));
}

TEST_CASE("degenerate inputs") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2048);
    const auto ps = welch_psd(zero, 256.0);
    CHECK(ps.total_power() == 0.0);

    Eigen::VectorXd empty(0);
    CHECK_THROWS_AS(welch_psd(empty, 256.0), UsageError);
    CHECK_THROWS_AS(welch_psd(zero, -1.0), ConfigError);

    // Signal shorter than a segment still produces a spectrum.
    Eigen::VectorXd tiny = sine(4.0, 64.0, 1.0);
    const auto small = welch_psd(tiny, 64.0);
    CHECK(small.psd.size() > 0);
}
