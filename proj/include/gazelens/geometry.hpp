// Scalar-generic statistics over 2xN point blocks.
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>

namespace gazelens {

template <typename Scalar>
using Points2T = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

using Points2 = Points2T<double>;

/// Column mean of a non-empty 2xN block.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> centroid(const Eigen::MatrixBase<Derived>& pts) {
    return pts.rowwise().mean();
}

/// I-DT dispersion: x-range plus y-range.
template <typename Derived>
typename Derived::Scalar dispersion(const Eigen::MatrixBase<Derived>& pts) {
    if (pts.cols() == 0) return typename Derived::Scalar(0);
    return (pts.rowwise().maxCoeff() - pts.rowwise().minCoeff()).sum();
}

/// Per-axis population standard deviation.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> population_stddev(const Eigen::MatrixBase<Derived>& pts) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Matrix<Scalar, 2, 1> mean = centroid(pts);
    const auto centered = pts.colwise() - mean;
    return (centered.array().square().rowwise().sum() / Scalar(pts.cols())).sqrt().matrix();
}

/// Euclidean displacement divided by elapsed seconds. Zero elapsed time
/// yields +infinity.
template <typename Scalar>
Scalar displacement_velocity(const Eigen::Matrix<Scalar, 2, 1>& from, const Eigen::Matrix<Scalar, 2, 1>& to,
                             Scalar elapsed_ms) {
    if (elapsed_ms == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    return (to - from).norm() / (elapsed_ms / Scalar(1000));
}

}  // namespace gazelens
