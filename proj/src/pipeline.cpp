#include "poitrack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <set>
#include <stdexcept>

namespace poitrack {

TrackMode track_mode_from_string(const std::string& name) {
    if (name == "finenet") return TrackMode::FineNet;
    if (name == "coarse-byte") return TrackMode::CoarseByte;
    if (name == "coarse-iou") return TrackMode::CoarseIou;
    throw std::invalid_argument("pipeline: unknown mode '" + name +
                                "' (expected finenet, coarse-byte or coarse-iou)");
}

std::string to_string(TrackMode mode) {
    switch (mode) {
        case TrackMode::FineNet: return "finenet";
        case TrackMode::CoarseByte: return "coarse-byte";
        case TrackMode::CoarseIou: return "coarse-iou";
    }
    return "?";
}

Pipeline::Pipeline(const PipelineConfig& cfg, TrackMode mode, PointTracker* tracker)
    : cfg_(cfg), mode_(mode), tracker_(tracker) {
    if (cfg.stride < 1) throw std::invalid_argument("pipeline: stride must be >= 1");
    if (cfg.sampler.rows < 1 || cfg.sampler.cols < 1)
        throw std::invalid_argument("pipeline: sampler grid must be >= 1x1");
    fine_active_ = mode == TrackMode::FineNet && cfg.stride > 1;
    if (fine_active_ && tracker == nullptr)
        throw std::invalid_argument("pipeline: finenet mode needs a point tracker");
}

Pipeline::StepOutput Pipeline::step(std::vector<Track>& tracks, int frame,
                                    const std::vector<Detection>& detections, bool single_stage,
                                    const std::map<int, std::vector<const PointTrajectory*>>* nets,
                                    const std::map<int, int>* adopt_ids) {
    for (Track& t : tracks) t.state = kf_predict(t.state, 1, cfg_.kalman);
    std::vector<Box> predicted;
    predicted.reserve(tracks.size());
    for (const Track& t : tracks) predicted.push_back(state_box(t.state));

    const Eigen::MatrixXd coarse = coarse_score_matrix(predicted, detections);
    CascadeOutcome outcome;
    if (single_stage) {
        outcome = single_stage_cascade(tracks, detections, coarse, cfg_.assoc);
    } else {
        Eigen::MatrixXd first_stage = coarse;
        if (nets != nullptr) {
            std::vector<Net> net_rows;
            net_rows.reserve(tracks.size());
            for (const Track& t : tracks) {
                Net net;
                net.track_id = t.id;
                auto it = nets->find(t.id);
                if (it != nets->end()) net.pois = it->second;
                net_rows.push_back(std::move(net));
            }
            const FineScoreResult fine = fine_score_matrix(net_rows, detections, predicted, frame);
            Eigen::MatrixXd fused = fuse_scores(fine.scores, coarse, cfg_.assoc);
            apply_coarse_fallback(fused, coarse, fine.visible_pois);
            first_stage = std::move(fused);
        }
        outcome = byte_cascade(tracks, detections, first_stage, coarse, cfg_.assoc);
    }

    std::vector<int> ids;
    std::vector<int> classes;
    ids.reserve(tracks.size());
    for (const Track& t : tracks) {
        ids.push_back(t.id);
        classes.push_back(t.class_id);
    }
    const LifecycleResult life = lifecycle_step(tracks, detections, outcome, cfg_.assoc,
                                                cfg_.kalman, frame, next_id_, adopt_ids);

    StepOutput out;
    for (const auto& [t, d] : outcome.matches) {
        const Detection& det = detections[static_cast<std::size_t>(d)];
        out.rows.push_back(TrackedBox{ids[static_cast<std::size_t>(t)], det.box, det.score,
                                      classes[static_cast<std::size_t>(t)]});
    }
    std::set<int> born;
    for (const auto& [d, id] : life.births) {
        const Detection& det = detections[static_cast<std::size_t>(d)];
        out.rows.push_back(TrackedBox{id, det.box, det.score, det.class_id});
        out.births[d] = id;
        born.insert(d);
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [](const TrackedBox& a, const TrackedBox& b) { return a.id < b.id; });
    for (const TrackedBox& row : out.rows) out.matched_boxes.emplace_back(row.id, row.box);
    for (int d : outcome.unmatched_detections) {
        if (!born.count(d)) out.unclaimed_detections.push_back(d);
    }
    tracks = life.tracks;
    return out;
}

void Pipeline::process_frame(int frame, const std::vector<Detection>& detections) {
    if (last_frame_ < 0 && frame < 1)
        throw std::invalid_argument("pipeline: frames are numbered from 1");
    if (last_frame_ >= 0 && frame != last_frame_ + 1)
        throw std::invalid_argument("pipeline: frames must arrive consecutively");
    last_frame_ = frame;
    ++report_.frames;

    if (!fine_active_) {
        StepOutput out = step(coarse_tracks_, frame, detections,
                              mode_ == TrackMode::CoarseIou, nullptr, nullptr);
        result_.frames.push_back(FrameOutput{frame, std::move(out.rows)});
        emitted_until_ = frame;
        return;
    }

    StepOutput out = step(coarse_tracks_, frame, detections, false, nullptr, nullptr);
    buffer_.push_back(BufferEntry{frame, detections, std::move(out)});
    if (static_cast<int>(buffer_.size()) == cfg_.stride) flush();
}

void Pipeline::flush() {
    if (buffer_.empty()) return;
    const int window_first = buffer_.front().frame;
    const int window_last = buffer_.back().frame;
    if (window_last <= emitted_until_) return;  // only the already-final seed
    ++report_.windows;

    // POI queries from the coarse box series of every track seen this window,
    // each anchored at its earliest known box.
    const int n = static_cast<int>(buffer_.size());
    std::map<int, std::vector<std::optional<Box>>> series;
    for (int i = 0; i < n; ++i) {
        for (const auto& [id, box] : buffer_[static_cast<std::size_t>(i)].coarse.matched_boxes) {
            auto& v = series[id];
            if (v.empty()) v.assign(static_cast<std::size_t>(n), std::nullopt);
            v[static_cast<std::size_t>(i)] = box;
        }
    }
    std::vector<TrackStrideBoxes> strides;
    strides.reserve(series.size());
    for (auto& [id, boxes] : series) strides.push_back(TrackStrideBoxes{id, std::move(boxes)});
    std::vector<PoiQuery> queries = sample_pois(strides, cfg_.sampler);

    std::vector<Track> replay_tracks = fine_tracks_;
    std::set<int> provisional;
    if (cfg_.poi_on_unmatched_detections) {
        // Detections nobody claimed at the window's first frame get their own
        // tentative track and net; they only survive if the replay confirms
        // them with at least one match.
        const BufferEntry& head = buffer_.front();
        for (int d : head.coarse.unclaimed_detections) {
            const Detection& det = head.detections[static_cast<std::size_t>(d)];
            if (!det.box.valid() || det.box.width() <= 0.0 || det.box.height() <= 0.0) continue;
            Track t;
            t.id = next_id_++;
            t.state = kf_init(det.box, cfg_.kalman);
            t.last_box = det.box;
            t.last_score = det.score;
            t.class_id = det.class_id;
            t.birth_frame = window_first;
            t.last_frame = 0;
            replay_tracks.push_back(t);
            provisional.insert(t.id);
            const std::vector<Point> pts =
                cfg_.sampler.mode == PoiSampleMode::Grid
                    ? sample_grid(det.box, cfg_.sampler)
                    : sample_uniform(det.box, cfg_.sampler.count(),
                                     mix_seed(cfg_.sampler.seed, static_cast<std::uint64_t>(t.id)));
            for (std::size_t i = 0; i < pts.size(); ++i) {
                queries.push_back(PoiQuery{t.id, 0, static_cast<int>(i), pts[i]});
            }
        }
    }

    std::vector<PointTrajectory> trajectories;
    bool tracked = true;
    if (!queries.empty()) {
        try {
            trajectories = tracker_->track(queries, window_first, window_last);
        } catch (const std::exception&) {
            tracked = false;
        }
    }

    if (!tracked) {
        // Keep the provisional per-frame result; the stream must go on.
        for (const BufferEntry& e : buffer_) {
            if (e.frame <= emitted_until_) continue;
            result_.frames.push_back(FrameOutput{e.frame, e.coarse.rows});
        }
        fine_tracks_ = coarse_tracks_;
        report_.fallback_windows.push_back(window_first);
        emitted_until_ = window_last;
        BufferEntry seed = std::move(buffer_.back());
        buffer_.clear();
        buffer_.push_back(std::move(seed));
        return;
    }

    std::map<int, std::vector<const PointTrajectory*>> nets;
    for (const PointTrajectory& t : trajectories) nets[t.track_id].push_back(&t);

    BufferEntry reseed;
    for (BufferEntry& e : buffer_) {
        if (e.frame <= emitted_until_) continue;
        StepOutput out = step(replay_tracks, e.frame, e.detections, false, &nets, &e.coarse.births);
        result_.frames.push_back(FrameOutput{e.frame, out.rows});
        if (e.frame == window_last) {
            reseed.frame = e.frame;
            reseed.detections = std::move(e.detections);
            reseed.coarse = std::move(out);
        }
    }
    if (!provisional.empty()) {
        std::erase_if(replay_tracks, [&](const Track& t) {
            return provisional.count(t.id) != 0 && t.last_frame == 0;
        });
    }

    fine_tracks_ = std::move(replay_tracks);
    coarse_tracks_ = fine_tracks_;
    emitted_until_ = window_last;
    buffer_.clear();
    buffer_.push_back(std::move(reseed));
}

void Pipeline::finish() {
    if (fine_active_) flush();
}

TrackingResult run_tracker(const SequenceBundle& bundle, const PipelineConfig& cfg,
                           TrackMode mode, PointTracker* tracker, RunReport* report) {
    const auto t0 = std::chrono::steady_clock::now();
    Pipeline pipeline(cfg, mode, tracker);
    for (int frame = 1; frame <= bundle.n_frames; ++frame) {
        pipeline.process_frame(frame, bundle.detections_at(frame));
    }
    pipeline.finish();
    const auto t1 = std::chrono::steady_clock::now();
    if (report != nullptr) {
        *report = pipeline.report();
        report->elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return pipeline.result();
}

}  // namespace poitrack
