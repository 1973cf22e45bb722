#pragma once

#include <string>
#include <vector>

#include "poitrack/errors.hpp"
#include "poitrack/pipeline.hpp"
#include "poitrack/points.hpp"
#include "poitrack/sequence.hpp"
#include "poitrack/simulator.hpp"

namespace poitrack {

// One CSV line of the standard tracking interchange format:
// frame,id,bb_left,bb_top,bb_width,bb_height,conf,class,visibility.
// id -1 marks a raw detection row.
struct MotRow {
    int frame = 1;
    int id = -1;
    double left = 0.0, top = 0.0, width = 0.0, height = 0.0;
    double conf = 1.0;
    int class_id = 0;
    double visibility = 0.0;
};

// Strict parser: 9 numeric fields, frame >= 1, visibility in [0,1], and
// positive box sizes on id rows; anything else raises DataError with the
// line number. An empty file is an empty sequence.
std::vector<MotRow> read_mot(const std::string& path);
// Rows are sorted by (frame, id) and numbers written so that reading back
// reproduces the exact doubles.
void write_mot(std::vector<MotRow> rows, const std::string& path);

std::vector<MotRow> mot_from_gt(const SequenceBundle& bundle);
std::vector<MotRow> mot_from_detections(const SequenceBundle& bundle);
std::vector<MotRow> mot_from_result(const TrackingResult& result);

// Per-frame views. n_frames 0 means "up to the last frame present".
std::vector<std::vector<TrackedBox>> group_rows(const std::vector<MotRow>& rows, int n_frames = 0);
std::vector<std::vector<Detection>> detections_from_rows(const std::vector<MotRow>& rows,
                                                         int n_frames = 0);

// Pose CSV (frame,track_id,cx,cy,w,h,visibility): the ground-truth motion
// the oracle point tracker rides on. Reading yields a bundle with truth
// only; canvas size and detections stay empty.
void write_poses(const SequenceBundle& bundle, const std::string& path);
SequenceBundle read_poses(const std::string& path);

// Everything a run needs, resolved from defaults, then a config file, then
// explicit overrides — later layers win.
struct RunConfig {
    TrackMode mode = TrackMode::FineNet;
    PipelineConfig pipeline;
    OracleNoiseConfig oracle;
    ScenarioConfig simulator;
};

// path may be empty (defaults only). Overrides are "section.key=value"
// strings, e.g. "pipeline.stride=4". Unknown keys, type mismatches and
// out-of-range values raise ConfigError naming the key.
RunConfig read_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Applies further "section.key=value" assignments onto an existing config,
// with the same validation as read_config.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

// Full echo with every default materialized; feeding it back through
// read_config reproduces the same RunConfig.
std::string write_config(const RunConfig& cfg);

}  // namespace poitrack
