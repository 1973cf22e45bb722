#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poitrack/geometry.hpp"

namespace poitrack {

// One detector output: the coarse-grained object cue.
struct Detection {
    Box box;
    double score = 0.0;  // confidence in [0,1]
    int class_id = 0;
};

// Ground-truth object state at one frame, center/size form. visibility is
// the unoccluded fraction of the box in [0,1].
struct ObjectState {
    int id = 0;
    double cx = 0.0, cy = 0.0;
    double w = 0.0, h = 0.0;
    double visibility = 1.0;
    int class_id = 0;

    Box box() const { return Box::from_center(cx, cy, w, h); }
};

// One reported track observation (output row of a tracker, or a GT row when
// evaluating).
struct TrackedBox {
    int id = 0;
    Box box;
    double score = 1.0;
    int class_id = 0;
};

struct FrameOutput {
    int frame = 0;  // 1-indexed
    std::vector<TrackedBox> rows;
};

struct TrackingResult {
    std::vector<FrameOutput> frames;
};

// A simulated or loaded sequence: ground truth (doubling as oracle poses)
// and noisy detections, both 1-indexed by frame.
struct SequenceBundle {
    int n_frames = 0;
    double width = 0.0, height = 0.0;
    std::uint64_t seed = 0;
    std::string name;
    std::vector<std::vector<ObjectState>> truth;       // [frame-1]
    std::vector<std::vector<Detection>> detections;    // [frame-1]

    const std::vector<ObjectState>& truth_at(int frame) const { return truth[frame - 1]; }
    const std::vector<Detection>& detections_at(int frame) const { return detections[frame - 1]; }
};

}  // namespace poitrack
