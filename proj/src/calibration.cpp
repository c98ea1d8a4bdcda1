#include "mchd/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace mchd {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw UsageError("percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

Calibration::Calibration(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) throw UsageError("calibration bound size mismatch");
}

Calibration Calibration::fit(std::span<const Eigen::MatrixXd> train, double lower_quantile,
                             double upper_quantile) {
    if (train.empty()) throw UsageError("calibration needs a non-empty training set");
    const Eigen::Index n_features = train[0].cols();
    Eigen::VectorXd lower(n_features), upper(n_features);
    std::vector<double> pool;
    for (Eigen::Index f = 0; f < n_features; ++f) {
        pool.clear();
        for (const auto& fm : train) {
            if (fm.cols() != n_features) throw UsageError("inconsistent feature counts in training set");
            for (Eigen::Index c = 0; c < fm.rows(); ++c) pool.push_back(fm(c, f));
        }
        lower[f] = percentile(pool, lower_quantile);
        upper[f] = percentile(pool, upper_quantile);
    }
    return Calibration(std::move(lower), std::move(upper));
}

int Calibration::discretize_value(double v, Eigen::Index feature, int num_levels) const {
    const double lo = lower_[feature];
    const double hi = upper_[feature];
    if (!(hi > lo)) return num_levels / 2;
    const double scaled = (v - lo) / (hi - lo) * static_cast<double>(num_levels);
    const int level = static_cast<int>(std::floor(scaled));
    return std::clamp(level, 0, num_levels - 1);
}

DiscretizedFeatures Calibration::discretize(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                            int num_levels) const {
    if (features.cols() != lower_.size()) {
        throw UsageError("feature matrix does not match calibration width");
    }
    if (num_levels < 2) throw ConfigError("discretization needs at least 2 levels");
    DiscretizedFeatures out(features.rows(), features.cols());
    for (Eigen::Index c = 0; c < features.rows(); ++c) {
        for (Eigen::Index f = 0; f < features.cols(); ++f) {
            out(c, f) = discretize_value(features(c, f), f, num_levels);
        }
    }
    return out;
}

}  // namespace mchd
