#pragma once

#include <Eigen/Dense>

#include "poitrack/geometry.hpp"

namespace poitrack {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

// Noise scales for the constant-velocity box filter. Position and size
// uncertainties are proportional to object height (SORT-family convention);
// aspect-ratio uncertainties are absolute.
struct KalmanConfig {
    double std_weight_position = 1.0 / 20.0;   // measurement/process std per px of height
    double std_weight_velocity = 1.0 / 160.0;  // process velocity std per px of height
    double init_position_factor = 2.0;         // initial position std multiplier
    double init_velocity_factor = 10.0;        // initial velocity std multiplier
    double init_aspect_std = 1e-2;
    double init_aspect_velocity_std = 1e-5;
    double process_aspect_std = 1e-2;
    double process_aspect_velocity_std = 1e-5;
    double measure_aspect_std = 1e-1;
};

// State mean is (cx, cy, aspect, height, and their velocities).
// Covariance is kept symmetric after every operation; aspect and height are
// clamped to sane ranges so degenerate detections cannot blow the filter up.
struct KalmanState {
    Vec8 mean = Vec8::Zero();
    Mat8 covariance = Mat8::Identity();
};

KalmanState kf_init(const Box& measurement, const KalmanConfig& cfg = {});

// Advances the state dt whole frames (dt >= 1). Composition holds exactly:
// kf_predict(s, 2) == kf_predict(kf_predict(s, 1), 1).
KalmanState kf_predict(const KalmanState& state, int dt = 1, const KalmanConfig& cfg = {});

KalmanState kf_update(const KalmanState& state, const Box& measurement,
                      const KalmanConfig& cfg = {});

// The predicted/estimated box for the current mean.
Box state_box(const KalmanState& state);

}  // namespace poitrack
