#include "poitrack/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace poitrack {

FineScoreResult fine_score_matrix(const std::vector<Net>& nets,
                                  const std::vector<Detection>& detections,
                                  const std::vector<Box>& predicted, int frame) {
    if (nets.size() != predicted.size())
        throw std::invalid_argument("assoc: nets and predicted boxes must pair up");
    const int rows = static_cast<int>(nets.size());
    const int cols = static_cast<int>(detections.size());
    FineScoreResult result;
    result.scores = Eigen::MatrixXd::Zero(rows, cols);
    result.visible_pois.assign(static_cast<std::size_t>(rows), 0);

    for (int i = 0; i < rows; ++i) {
        std::vector<Point> pts;
        for (const PointTrajectory* poi : nets[static_cast<std::size_t>(i)].pois) {
            if (poi->visible_at(frame)) pts.push_back(poi->position_at(frame));
        }
        const int visible = static_cast<int>(pts.size());
        result.visible_pois[static_cast<std::size_t>(i)] = visible;
        if (visible == 0) continue;
        const double pred_area = area(predicted[static_cast<std::size_t>(i)]);
        for (int j = 0; j < cols; ++j) {
            const Box& det = detections[static_cast<std::size_t>(j)].box;
            const double det_area = area(det);
            if (det_area <= 0.0) continue;
            int inside = 0;
            for (const Point& p : pts) {
                if (contains(det, p)) ++inside;
            }
            result.scores(i, j) = std::min(1.0, pred_area / det_area) *
                                  (static_cast<double>(inside) / static_cast<double>(visible));
        }
    }
    return result;
}

Eigen::MatrixXd coarse_score_matrix(const std::vector<Box>& predicted,
                                    const std::vector<Detection>& detections) {
    Eigen::MatrixXd m(static_cast<int>(predicted.size()), static_cast<int>(detections.size()));
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            m(i, j) = iou(predicted[static_cast<std::size_t>(i)],
                          detections[static_cast<std::size_t>(j)].box);
        }
    }
    return m;
}

Eigen::MatrixXd fuse_scores(const Eigen::MatrixXd& fine, const Eigen::MatrixXd& coarse,
                            const AssocConfig& cfg) {
    if (fine.rows() != coarse.rows() || fine.cols() != coarse.cols())
        throw std::invalid_argument("assoc: fuse inputs must share shape");
    if (cfg.fusion_mode == FusionMode::Max) return fine.cwiseMax(coarse);
    return cfg.fusion_lambda * fine + (1.0 - cfg.fusion_lambda) * coarse;
}

void apply_coarse_fallback(Eigen::MatrixXd& fused, const Eigen::MatrixXd& coarse,
                           const std::vector<int>& visible_pois) {
    if (fused.rows() != coarse.rows() || fused.cols() != coarse.cols() ||
        static_cast<int>(visible_pois.size()) != fused.rows())
        throw std::invalid_argument("assoc: fallback inputs must share shape");
    for (int i = 0; i < fused.rows(); ++i) {
        if (visible_pois[static_cast<std::size_t>(i)] == 0) fused.row(i) = coarse.row(i);
    }
}

AssignmentResult hungarian(const Eigen::MatrixXd& scores, double threshold) {
    const int rows = static_cast<int>(scores.rows());
    const int cols = static_cast<int>(scores.cols());
    AssignmentResult result;
    if (rows == 0 || cols == 0) {
        for (int i = 0; i < rows; ++i) result.unmatched_rows.push_back(i);
        for (int j = 0; j < cols; ++j) result.unmatched_cols.push_back(j);
        return result;
    }

    // Shortest-augmenting-path assignment on cost = 1 - score, padded square
    // with zero-score cells. Ties always resolve to the lowest column index,
    // so the result is a pure function of the matrix.
    const int n = std::max(rows, cols);
    const double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](int i, int j) {
        return (i < rows && j < cols) ? 1.0 - scores(i, j) : 1.0;
    };
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<char> row_matched(static_cast<std::size_t>(rows), 0);
    std::vector<char> col_matched(static_cast<std::size_t>(cols), 0);
    for (int j = 1; j <= cols; ++j) {
        const int i = p[static_cast<std::size_t>(j)];
        if (i < 1 || i > rows) continue;  // padded row
        if (scores(i - 1, j - 1) < threshold) continue;
        result.matches.emplace_back(i - 1, j - 1);
        row_matched[static_cast<std::size_t>(i - 1)] = 1;
        col_matched[static_cast<std::size_t>(j - 1)] = 1;
    }
    std::sort(result.matches.begin(), result.matches.end());
    for (int i = 0; i < rows; ++i) {
        if (!row_matched[static_cast<std::size_t>(i)]) result.unmatched_rows.push_back(i);
    }
    for (int j = 0; j < cols; ++j) {
        if (!col_matched[static_cast<std::size_t>(j)]) result.unmatched_cols.push_back(j);
    }
    return result;
}

namespace {

Eigen::MatrixXd slice(const Eigen::MatrixXd& m, const std::vector<int>& row_idx,
                      const std::vector<int>& col_idx) {
    Eigen::MatrixXd out(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (int i = 0; i < out.rows(); ++i) {
        for (int j = 0; j < out.cols(); ++j) {
            out(i, j) = m(row_idx[static_cast<std::size_t>(i)], col_idx[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

void finish_outcome(CascadeOutcome& outcome, int n_tracks,
                    const std::vector<int>& candidate_dets,
                    const std::vector<Detection>& detections, const AssocConfig& cfg) {
    std::sort(outcome.matches.begin(), outcome.matches.end());
    std::vector<char> track_matched(static_cast<std::size_t>(n_tracks), 0);
    std::vector<char> det_matched(detections.size(), 0);
    for (const auto& [t, d] : outcome.matches) {
        track_matched[static_cast<std::size_t>(t)] = 1;
        det_matched[static_cast<std::size_t>(d)] = 1;
    }
    for (int t = 0; t < n_tracks; ++t) {
        if (!track_matched[static_cast<std::size_t>(t)]) outcome.unmatched_tracks.push_back(t);
    }
    for (int d : candidate_dets) {
        if (det_matched[static_cast<std::size_t>(d)]) continue;
        outcome.unmatched_detections.push_back(d);
        if (detections[static_cast<std::size_t>(d)].score >= cfg.new_track_score)
            outcome.new_track_detections.push_back(d);
    }
}

}  // namespace

CascadeOutcome byte_cascade(const std::vector<Track>& tracks,
                            const std::vector<Detection>& detections,
                            const Eigen::MatrixXd& first_stage,
                            const Eigen::MatrixXd& overlap, const AssocConfig& cfg) {
    const int n_tracks = static_cast<int>(tracks.size());
    const int n_dets = static_cast<int>(detections.size());
    if (first_stage.rows() != n_tracks || first_stage.cols() != n_dets ||
        overlap.rows() != n_tracks || overlap.cols() != n_dets)
        throw std::invalid_argument("assoc: cascade matrices must cover tracks x detections");

    std::vector<int> high, low, candidates;
    for (int d = 0; d < n_dets; ++d) {
        const double s = detections[static_cast<std::size_t>(d)].score;
        if (s >= cfg.det_high) {
            high.push_back(d);
        } else if (s >= cfg.det_low) {
            low.push_back(d);
        } else {
            continue;  // too weak to even consider
        }
        candidates.push_back(d);
    }

    CascadeOutcome outcome;
    std::vector<int> all_tracks(static_cast<std::size_t>(n_tracks));
    for (int t = 0; t < n_tracks; ++t) all_tracks[static_cast<std::size_t>(t)] = t;

    const AssignmentResult stage1 = hungarian(slice(first_stage, all_tracks, high), cfg.match_threshold);
    for (const auto& [r, c] : stage1.matches) {
        outcome.matches.emplace_back(all_tracks[static_cast<std::size_t>(r)],
                                     high[static_cast<std::size_t>(c)]);
    }

    // Leftover low-score detections only get a shot at active leftover
    // tracks: a lost track re-anchoring on a weak cue is how drift starts.
    std::vector<int> stage2_tracks;
    for (int r : stage1.unmatched_rows) {
        const int t = all_tracks[static_cast<std::size_t>(r)];
        if (tracks[static_cast<std::size_t>(t)].status == TrackStatus::Active) stage2_tracks.push_back(t);
    }
    const AssignmentResult stage2 = hungarian(slice(overlap, stage2_tracks, low), cfg.match_threshold);
    for (const auto& [r, c] : stage2.matches) {
        outcome.matches.emplace_back(stage2_tracks[static_cast<std::size_t>(r)],
                                     low[static_cast<std::size_t>(c)]);
    }

    finish_outcome(outcome, n_tracks, candidates, detections, cfg);
    return outcome;
}

CascadeOutcome single_stage_cascade(const std::vector<Track>& tracks,
                                    const std::vector<Detection>& detections,
                                    const Eigen::MatrixXd& overlap, const AssocConfig& cfg) {
    const int n_tracks = static_cast<int>(tracks.size());
    const int n_dets = static_cast<int>(detections.size());
    if (overlap.rows() != n_tracks || overlap.cols() != n_dets)
        throw std::invalid_argument("assoc: cascade matrix must cover tracks x detections");

    std::vector<int> high;
    for (int d = 0; d < n_dets; ++d) {
        if (detections[static_cast<std::size_t>(d)].score >= cfg.det_high) high.push_back(d);
    }
    std::vector<int> all_tracks(static_cast<std::size_t>(n_tracks));
    for (int t = 0; t < n_tracks; ++t) all_tracks[static_cast<std::size_t>(t)] = t;

    CascadeOutcome outcome;
    const AssignmentResult res = hungarian(slice(overlap, all_tracks, high), cfg.match_threshold);
    for (const auto& [r, c] : res.matches) {
        outcome.matches.emplace_back(all_tracks[static_cast<std::size_t>(r)],
                                     high[static_cast<std::size_t>(c)]);
    }
    finish_outcome(outcome, n_tracks, high, detections, cfg);
    return outcome;
}

LifecycleResult lifecycle_step(const std::vector<Track>& tracks,
                               const std::vector<Detection>& detections,
                               const CascadeOutcome& outcome, const AssocConfig& cfg,
                               const KalmanConfig& kalman_cfg, int frame, int& next_id,
                               const std::map<int, int>* adopt_ids) {
    LifecycleResult result;
    result.tracks = tracks;

    std::vector<char> matched(tracks.size(), 0);
    for (const auto& [t, d] : outcome.matches) {
        Track& track = result.tracks[static_cast<std::size_t>(t)];
        const Detection& det = detections[static_cast<std::size_t>(d)];
        track.state = kf_update(track.state, det.box, kalman_cfg);
        track.last_box = det.box;
        track.last_score = det.score;
        track.status = TrackStatus::Active;
        track.frames_lost = 0;
        track.last_frame = frame;
        matched[static_cast<std::size_t>(t)] = 1;
    }
    for (std::size_t t = 0; t < result.tracks.size(); ++t) {
        if (matched[t]) continue;
        Track& track = result.tracks[t];
        track.status = TrackStatus::Lost;
        ++track.frames_lost;
    }
    result.tracks.erase(std::remove_if(result.tracks.begin(), result.tracks.end(),
                                       [&](const Track& t) { return t.frames_lost > cfg.max_lost; }),
                        result.tracks.end());

    for (int d : outcome.new_track_detections) {
        const Detection& det = detections[static_cast<std::size_t>(d)];
        if (!det.box.valid() || det.box.width() <= 0.0 || det.box.height() <= 0.0) continue;
        Track track;
        if (adopt_ids != nullptr) {
            auto it = adopt_ids->find(d);
            track.id = it != adopt_ids->end() ? it->second : next_id++;
        } else {
            track.id = next_id++;
        }
        track.state = kf_init(det.box, kalman_cfg);
        track.last_box = det.box;
        track.last_score = det.score;
        track.class_id = det.class_id;
        track.status = TrackStatus::Active;
        track.frames_lost = 0;
        track.birth_frame = frame;
        track.last_frame = frame;
        result.tracks.push_back(track);
        result.births.emplace_back(d, track.id);
    }
    return result;
}

}  // namespace poitrack
