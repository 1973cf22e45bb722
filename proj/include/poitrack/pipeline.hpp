#pragma once

#include <map>
#include <string>
#include <vector>

#include "poitrack/assoc.hpp"
#include "poitrack/motion.hpp"
#include "poitrack/points.hpp"
#include "poitrack/sampler.hpp"
#include "poitrack/sequence.hpp"

namespace poitrack {

enum class TrackMode {
    FineNet,     // stride-buffered fine matching over POI nets
    CoarseByte,  // per-frame two-stage cascade on overlap alone
    CoarseIou,   // per-frame single-stage overlap matching
};

TrackMode track_mode_from_string(const std::string& name);
std::string to_string(TrackMode mode);

struct PipelineConfig {
    int stride = 8;  // frames buffered per window; 1 disables the fine pass
    // Also seed nets on first-window detections no track claimed, so objects
    // that enter on a weak detection still get fine-matched.
    bool poi_on_unmatched_detections = false;
    AssocConfig assoc;
    SamplerConfig sampler;
    KalmanConfig kalman;
};

struct RunReport {
    int frames = 0;
    int windows = 0;                     // fine windows flushed
    std::vector<int> fallback_windows;   // first frame of each window that fell
                                         // back to the buffered coarse result
    double elapsed_ms = 0.0;
};

// Streaming tracker. Feed frames in order (consecutive numbering), then
// finish(). Output rows appear immediately in coarse modes and at window
// flushes in FineNet mode; either way result() holds one entry per processed
// frame, in order, once finish() returns.
class Pipeline {
  public:
    Pipeline(const PipelineConfig& cfg, TrackMode mode, PointTracker* tracker);

    void process_frame(int frame, const std::vector<Detection>& detections);
    void finish();

    const TrackingResult& result() const { return result_; }
    const RunReport& report() const { return report_; }

  private:
    struct StepOutput {
        std::vector<TrackedBox> rows;                     // sorted by id
        std::map<int, int> births;                        // detection index -> id
        std::vector<int> unclaimed_detections;            // unmatched, not born
        std::vector<std::pair<int, Box>> matched_boxes;   // (id, box), sorted by id
    };
    struct BufferEntry {
        int frame = 0;
        std::vector<Detection> detections;
        StepOutput coarse;
    };

    StepOutput step(std::vector<Track>& tracks, int frame,
                    const std::vector<Detection>& detections, bool single_stage,
                    const std::map<int, std::vector<const PointTrajectory*>>* nets,
                    const std::map<int, int>* adopt_ids);
    void flush();

    PipelineConfig cfg_;
    TrackMode mode_;
    PointTracker* tracker_;
    bool fine_active_;

    std::vector<Track> coarse_tracks_;
    std::vector<Track> fine_tracks_;
    int next_id_ = 1;
    int last_frame_ = -1;
    int emitted_until_ = -1;  // last frame whose rows are final
    std::vector<BufferEntry> buffer_;

    TrackingResult result_;
    RunReport report_;
};

// Runs a whole bundle through a fresh pipeline; wall time lands in the
// report but never in any persisted artifact.
TrackingResult run_tracker(const SequenceBundle& bundle, const PipelineConfig& cfg,
                           TrackMode mode, PointTracker* tracker, RunReport* report = nullptr);

}  // namespace poitrack
