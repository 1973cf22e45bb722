#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "poitrack/geometry.hpp"
#include "poitrack/motion.hpp"
#include "poitrack/points.hpp"
#include "poitrack/sequence.hpp"

namespace poitrack {

// The fine-grained identity cue of one track: its POI trajectories carried
// through the current stride window.
struct Net {
    int track_id = 0;
    std::vector<const PointTrajectory*> pois;
};

enum class TrackStatus { Active, Lost };

struct Track {
    int id = 0;
    KalmanState state;
    Box last_box;            // last matched detection box
    double last_score = 0.0;
    int class_id = 0;
    TrackStatus status = TrackStatus::Active;
    int frames_lost = 0;     // consecutive unmatched frames; 0 iff Active
    int birth_frame = 0;
    int last_frame = 0;      // last matched frame
};

enum class FusionMode { Lambda, Max };

struct AssocConfig {
    double det_high = 0.5;          // first-stage detection gate
    double det_low = 0.1;           // second-stage floor
    double new_track_score = 0.6;   // unmatched detections above this spawn tracks
    double match_threshold = 0.2;   // assignments scoring below this are dropped
    double fusion_lambda = 0.5;     // fine/coarse blend weight
    FusionMode fusion_mode = FusionMode::Lambda;
    int max_lost = 30;              // misses survived before removal
};

// Score matrix over tracks (rows) x detections (cols), plus per-row POI
// visibility so callers can tell a genuine zero from "nothing to score".
struct FineScoreResult {
    Eigen::MatrixXd scores;
    std::vector<int> visible_pois;  // per row, POIs visible at the scored frame
};

// Containment score: fraction of the net's currently visible POIs that fall
// inside the detection box, damped by min(1, area(predicted)/area(detection))
// so a huge box cannot swallow every net for free. Rows with no visible POI
// are all-zero and flagged via visible_pois.
FineScoreResult fine_score_matrix(const std::vector<Net>& nets,
                                  const std::vector<Detection>& detections,
                                  const std::vector<Box>& predicted, int frame);

// Plain IOU between predicted track boxes and detection boxes.
Eigen::MatrixXd coarse_score_matrix(const std::vector<Box>& predicted,
                                    const std::vector<Detection>& detections);

// Blends the two cues: lambda * fine + (1 - lambda) * coarse, or entrywise
// max when cfg.fusion_mode says so.
Eigen::MatrixXd fuse_scores(const Eigen::MatrixXd& fine, const Eigen::MatrixXd& coarse,
                            const AssocConfig& cfg);

// Rows whose net had nothing visible fall back to the coarse row wholesale.
void apply_coarse_fallback(Eigen::MatrixXd& fused, const Eigen::MatrixXd& coarse,
                           const std::vector<int>& visible_pois);

struct AssignmentResult {
    std::vector<std::pair<int, int>> matches;  // (row, col), ascending by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
};

// Optimal score-maximizing assignment (rectangular allowed); pairs scoring
// below threshold are dropped afterwards, ties at the threshold are kept.
AssignmentResult hungarian(const Eigen::MatrixXd& scores, double threshold);

struct CascadeOutcome {
    std::vector<std::pair<int, int>> matches;  // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections;     // every detection left unmatched
    std::vector<int> new_track_detections;     // subset scoring >= new_track_score
};

// Two-stage cascade: high-score detections meet every track on the fused
// scores; leftovers above det_low then meet the still-unmatched *active*
// tracks on overlap alone. Detections below det_low are discarded.
CascadeOutcome byte_cascade(const std::vector<Track>& tracks,
                            const std::vector<Detection>& detections,
                            const Eigen::MatrixXd& first_stage,
                            const Eigen::MatrixXd& overlap, const AssocConfig& cfg);

// One-shot baseline: only high-score detections, matched on overlap alone.
CascadeOutcome single_stage_cascade(const std::vector<Track>& tracks,
                                    const std::vector<Detection>& detections,
                                    const Eigen::MatrixXd& overlap, const AssocConfig& cfg);

struct LifecycleResult {
    std::vector<Track> tracks;                 // updated set, removals applied
    std::vector<std::pair<int, int>> births;   // (detection index, assigned id)
};

// Applies a cascade outcome to the (already predicted) track set: matched
// tracks are measurement-updated, unmatched ones age and eventually drop
// out, qualifying detections found nobody become new tracks. next_id is the
// shared never-reused id source; adopt_ids can pin specific detection
// indices to pre-chosen ids (used when replaying a window whose births were
// already assigned ids by the provisional pass).
LifecycleResult lifecycle_step(const std::vector<Track>& tracks,
                               const std::vector<Detection>& detections,
                               const CascadeOutcome& outcome, const AssocConfig& cfg,
                               const KalmanConfig& kalman_cfg, int frame, int& next_id,
                               const std::map<int, int>* adopt_ids = nullptr);

}  // namespace poitrack
