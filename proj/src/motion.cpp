#include "poitrack/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace poitrack {

namespace {

constexpr double kMinAspect = 1e-3;
constexpr double kMaxAspect = 1e3;
constexpr double kMinHeight = 1.0;

Vec4 box_to_measurement(const Box& b) {
    Vec4 z;
    z << b.cx(), b.cy(), b.width() / b.height(), b.height();
    return z;
}

void clamp_shape(Vec8& mean) {
    mean(2) = std::clamp(mean(2), kMinAspect, kMaxAspect);
    mean(3) = std::max(mean(3), kMinHeight);
}

void symmetrize(Mat8& m) { m = 0.5 * (m + m.transpose()).eval(); }

Mat8 transition(int dt) {
    Mat8 f = Mat8::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = static_cast<double>(dt);
    return f;
}

}  // namespace

KalmanState kf_init(const Box& measurement, const KalmanConfig& cfg) {
    if (!measurement.valid() || measurement.width() <= 0.0 || measurement.height() <= 0.0) {
        throw std::invalid_argument("kf_init: degenerate measurement box");
    }
    KalmanState s;
    s.mean.head<4>() = box_to_measurement(measurement);
    s.mean.tail<4>().setZero();
    clamp_shape(s.mean);

    const double h = s.mean(3);
    Vec8 std;
    std << cfg.init_position_factor * cfg.std_weight_position * h,
        cfg.init_position_factor * cfg.std_weight_position * h,
        cfg.init_aspect_std,
        cfg.init_position_factor * cfg.std_weight_position * h,
        cfg.init_velocity_factor * cfg.std_weight_velocity * h,
        cfg.init_velocity_factor * cfg.std_weight_velocity * h,
        cfg.init_aspect_velocity_std,
        cfg.init_velocity_factor * cfg.std_weight_velocity * h;
    s.covariance = std.array().square().matrix().asDiagonal();
    return s;
}

KalmanState kf_predict(const KalmanState& state, int dt, const KalmanConfig& cfg) {
    if (dt < 1) throw std::invalid_argument("kf_predict: dt must be >= 1");
    KalmanState s = state;
    const Mat8 f = transition(1);
    // Single-step iteration so multi-frame prediction composes exactly and
    // the height-scaled process noise tracks the evolving mean.
    for (int step = 0; step < dt; ++step) {
        const double h = s.mean(3);
        Vec8 std;
        std << cfg.std_weight_position * h, cfg.std_weight_position * h,
            cfg.process_aspect_std, cfg.std_weight_position * h,
            cfg.std_weight_velocity * h, cfg.std_weight_velocity * h,
            cfg.process_aspect_velocity_std, cfg.std_weight_velocity * h;
        const Mat8 q = std.array().square().matrix().asDiagonal();
        s.mean = f * s.mean;
        s.covariance = f * s.covariance * f.transpose() + q;
        symmetrize(s.covariance);
    }
    return s;
}

KalmanState kf_update(const KalmanState& state, const Box& measurement,
                      const KalmanConfig& cfg) {
    if (!measurement.valid()) {
        throw std::invalid_argument("kf_update: non-finite measurement box");
    }
    const Vec4 z = box_to_measurement(measurement);
    if (!z.allFinite()) {
        throw std::invalid_argument("kf_update: non-finite measurement box");
    }

    Eigen::Matrix<double, 4, 8> hmat = Eigen::Matrix<double, 4, 8>::Zero();
    hmat.block<4, 4>(0, 0).setIdentity();

    const double h = state.mean(3);
    Vec4 std;
    std << cfg.std_weight_position * h, cfg.std_weight_position * h,
        cfg.measure_aspect_std, cfg.std_weight_position * h;
    const Mat4 r = std.array().square().matrix().asDiagonal();

    const Mat4 innovation_cov = hmat * state.covariance * hmat.transpose() + r;
    const Eigen::Matrix<double, 8, 4> gain =
        innovation_cov.llt().solve(hmat * state.covariance).transpose();

    KalmanState s;
    s.mean = state.mean + gain * (z - hmat * state.mean);
    s.covariance = state.covariance - gain * innovation_cov * gain.transpose();
    clamp_shape(s.mean);
    symmetrize(s.covariance);
    return s;
}

Box state_box(const KalmanState& state) {
    const double aspect = state.mean(2);
    const double h = state.mean(3);
    const double w = aspect * h;
    return Box::from_center(state.mean(0), state.mean(1), w, h);
}

}  // namespace poitrack
