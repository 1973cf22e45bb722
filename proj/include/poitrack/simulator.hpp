#pragma once

#include <cstdint>

#include "poitrack/geometry.hpp"
#include "poitrack/sequence.hpp"

namespace poitrack {

enum class Layout {
    Scatter,  // random placement, random-walk headings, optional crossings
    Lanes,    // one object per horizontal lane, straight motion, never meet
};

// Knobs for the synthetic arena. Objects bounce inside the canvas with
// bounded random-turn kinematics; deformation oscillates the aspect ratio
// at constant area (wingbeat-like); crossings steer scheduled pairs to a
// shared waypoint so their boxes genuinely overlap mid-sequence.
struct ScenarioConfig {
    int n_objects = 8;
    int frames = 100;
    double width = 1280.0, height = 720.0;

    double speed_min = 2.0, speed_max = 8.0;  // px/frame
    double turn_max = 0.25;                   // rad/frame heading jitter bound
    double speed_jitter = 0.4;                // px/frame^2

    double size_min = 40.0, size_max = 90.0;  // box height range at spawn
    double aspect_base = 1.6;                 // width/height at rest
    double deform_amplitude = 0.0;            // relative aspect swing, < 1
    double deform_freq = 0.25;                // cycles/frame

    double crossing_prob = 0.0;               // per object pair
    int n_occluders = 0;                      // static foreground blocks
    double occluder_size = 120.0;

    double center_jitter = 0.0;               // detection center noise, px
    double size_jitter = 0.0;                 // relative detection size noise
    double miss_prob = 0.0;                   // base missed-detection rate
    double occlusion_miss_boost = 0.7;        // extra miss rate at visibility 0
    double fp_rate = 0.0;                     // Poisson mean false positives/frame
    double conf_mean = 0.88, conf_std = 0.05;

    int n_classes = 1;
    Layout layout = Layout::Scatter;
    int sequences = 12;                       // suite size; generate() ignores it
    std::uint64_t seed = 1;
};

// Builds one full sequence (ground truth + noisy detections) from the
// config's seed. Same config, same bundle, always.
SequenceBundle generate(const ScenarioConfig& cfg);

// Keeps frames 1, 1+factor, 1+2*factor, ... and renumbers them 1..N: the
// frame-rate-drop stressor. factor 1 is the identity.
SequenceBundle decimate(const SequenceBundle& bundle, int factor);

// Fraction of target's area covered by the union of the given boxes,
// computed exactly. Drives ground-truth visibility.
double covered_fraction(const Box& target, const std::vector<Box>& covers);

}  // namespace poitrack
