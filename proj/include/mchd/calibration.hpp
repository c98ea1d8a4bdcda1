#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "mchd/errors.hpp"

namespace mchd {

using DiscretizedFeatures = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

// Per-feature clamp bounds fitted on training windows only: lower/upper are
// the 1st/99th percentiles pooled over all training windows and channels.
// Features that are constant on the training set map to level L/2.
class Calibration {
public:
    Calibration() = default;
    Calibration(Eigen::VectorXd lower, Eigen::VectorXd upper);

    // train: one channels x features matrix per window.
    static Calibration fit(std::span<const Eigen::MatrixXd> train, double lower_quantile = 0.01,
                           double upper_quantile = 0.99);

    Eigen::Index num_features() const { return lower_.size(); }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }

    // level = clamp(floor((v - lo) / (hi - lo) * L), 0, L-1)
    int discretize_value(double v, Eigen::Index feature, int num_levels) const;
    DiscretizedFeatures discretize(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                   int num_levels) const;

private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

// Linear-interpolation percentile of unsorted values (sorts a copy).
double percentile(std::vector<double> values, double q);

}  // namespace mchd
