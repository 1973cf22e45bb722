#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "poitrack/pipeline.hpp"
#include "poitrack/simulator.hpp"

using namespace poitrack;

namespace {

bool results_equal(const TrackingResult& a, const TrackingResult& b) {
    if (a.frames.size() != b.frames.size()) return false;
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        if (a.frames[f].frame != b.frames[f].frame) return false;
        const auto& ra = a.frames[f].rows;
        const auto& rb = b.frames[f].rows;
        if (ra.size() != rb.size()) return false;
        for (std::size_t i = 0; i < ra.size(); ++i) {
            if (ra[i].id != rb[i].id || ra[i].score != rb[i].score ||
                ra[i].class_id != rb[i].class_id || ra[i].box.x1 != rb[i].box.x1 ||
                ra[i].box.y1 != rb[i].box.y1 || ra[i].box.x2 != rb[i].box.x2 ||
                ra[i].box.y2 != rb[i].box.y2)
                return false;
        }
    }
    return true;
}

ScenarioConfig noisy_scenario(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.n_objects = 6;
    cfg.frames = 40;
    cfg.crossing_prob = 1.0;
    cfg.deform_amplitude = 0.4;
    cfg.turn_max = 0.9;
    cfg.speed_min = 6.0;
    cfg.speed_max = 14.0;
    cfg.speed_jitter = 2.0;
    cfg.center_jitter = 1.5;
    cfg.size_jitter = 0.05;
    cfg.miss_prob = 0.1;
    cfg.fp_rate = 0.5;
    cfg.seed = seed;
    return cfg;
}

OracleNoiseConfig mild_noise() {
    OracleNoiseConfig noise;
    noise.sigma = 2.0;
    noise.dropout = 0.1;
    noise.seed = 5;
    return noise;
}

struct ThrowingTracker : PointTracker {
    std::vector<PointTrajectory> track(const std::vector<PoiQuery>&, int, int) override {
        throw std::runtime_error("model exploded");
    }
};

}  // namespace

TEST_CASE("mode names round-trip") {
    for (TrackMode m : {TrackMode::FineNet, TrackMode::CoarseByte, TrackMode::CoarseIou}) {
        CHECK(track_mode_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS(track_mode_from_string("deepsort"), std::invalid_argument);
}

TEST_CASE("stride one reduces the fine pipeline to the coarse cascade") {
    const SequenceBundle b = generate(noisy_scenario(41));
    OraclePointTracker oracle(b, mild_noise());

    PipelineConfig cfg;
    cfg.stride = 1;
    const TrackingResult fine = run_tracker(b, cfg, TrackMode::FineNet, &oracle);
    const TrackingResult coarse = run_tracker(b, cfg, TrackMode::CoarseByte, nullptr);
    CHECK(results_equal(fine, coarse));
}

TEST_CASE("noiseless lanes are tracked perfectly") {
    ScenarioConfig scfg;
    scfg.layout = Layout::Lanes;
    scfg.n_objects = 5;
    scfg.frames = 50;
    scfg.seed = 2;
    const SequenceBundle b = generate(scfg);

    PipelineConfig cfg;
    for (TrackMode mode : {TrackMode::CoarseIou, TrackMode::CoarseByte}) {
        const TrackingResult res = run_tracker(b, cfg, mode, nullptr);
        REQUIRE(res.frames.size() == 50);
        std::map<int, int> id_to_gt;
        for (const FrameOutput& fo : res.frames) {
            REQUIRE(fo.rows.size() == 5);
            for (const TrackedBox& row : fo.rows) {
                // Find the ground-truth object occupying exactly this box.
                int gt_id = -1;
                for (const ObjectState& s : b.truth_at(fo.frame)) {
                    const Box g = s.box();
                    if (g.x1 == row.box.x1 && g.y1 == row.box.y1 && g.x2 == row.box.x2 &&
                        g.y2 == row.box.y2)
                        gt_id = s.id;
                }
                REQUIRE(gt_id >= 0);
                auto [it, fresh] = id_to_gt.emplace(row.id, gt_id);
                CHECK(it->second == gt_id);  // the pairing never changes
            }
        }
        CHECK(id_to_gt.size() == 5);
    }
}

TEST_CASE("cold start births only confident detections") {
    PipelineConfig cfg;
    Pipeline p(cfg, TrackMode::CoarseByte, nullptr);
    std::vector<Detection> dets(3);
    dets[0].box = Box{10, 10, 50, 90};
    dets[0].score = 0.9;
    dets[1].box = Box{200, 10, 240, 90};
    dets[1].score = 0.7;
    dets[1].class_id = 2;
    dets[2].box = Box{400, 10, 440, 90};
    dets[2].score = 0.3;  // below the birth bar
    p.process_frame(1, dets);
    p.finish();

    const TrackingResult& res = p.result();
    REQUIRE(res.frames.size() == 1);
    REQUIRE(res.frames[0].rows.size() == 2);
    const auto& rows = res.frames[0].rows;
    CHECK(rows[0].id != rows[1].id);
    CHECK(rows[0].box.x1 == 10.0);
    CHECK(rows[0].score == 0.9);
    CHECK(rows[1].box.x1 == 200.0);
    CHECK(rows[1].class_id == 2);
}

TEST_CASE("windows close on stride boundaries with a carried seed frame") {
    auto windows_for = [](int frames) {
        ScenarioConfig scfg;
        scfg.n_objects = 2;
        scfg.frames = frames;
        scfg.seed = 9;
        const SequenceBundle b = generate(scfg);
        OraclePointTracker oracle(b, OracleNoiseConfig{});
        PipelineConfig cfg;
        cfg.stride = 8;
        RunReport report;
        run_tracker(b, cfg, TrackMode::FineNet, &oracle, &report);
        CHECK(report.frames == frames);
        return report.windows;
    };
    CHECK(windows_for(8) == 1);
    CHECK(windows_for(10) == 2);   // full window, then the 9-10 tail
    CHECK(windows_for(80) == 12);  // 8 frames, then 7 fresh per window
}

TEST_CASE("frames must arrive consecutively starting at one") {
    PipelineConfig cfg;
    SUBCASE("zero is not a frame") {
        Pipeline p(cfg, TrackMode::CoarseIou, nullptr);
        CHECK_THROWS_WITH_AS(p.process_frame(0, {}), "pipeline: frames are numbered from 1",
                             std::invalid_argument);
    }
    SUBCASE("gaps are rejected") {
        Pipeline p(cfg, TrackMode::CoarseIou, nullptr);
        p.process_frame(1, {});
        CHECK_THROWS_WITH_AS(p.process_frame(3, {}), "pipeline: frames must arrive consecutively",
                             std::invalid_argument);
    }
    SUBCASE("repeats are rejected") {
        Pipeline p(cfg, TrackMode::CoarseIou, nullptr);
        p.process_frame(1, {});
        CHECK_THROWS_AS(p.process_frame(1, {}), std::invalid_argument);
    }
}

TEST_CASE("a failing point tracker falls back to the buffered coarse result") {
    const SequenceBundle b = generate(noisy_scenario(7));
    ThrowingTracker broken;
    PipelineConfig cfg;
    cfg.stride = 8;
    RunReport report;
    const TrackingResult fine = run_tracker(b, cfg, TrackMode::FineNet, &broken, &report);
    const TrackingResult coarse = run_tracker(b, cfg, TrackMode::CoarseByte, nullptr);
    CHECK(results_equal(fine, coarse));
    CHECK(report.fallback_windows.size() == static_cast<std::size_t>(report.windows));
    REQUIRE(report.fallback_windows.size() >= 2);
    CHECK(report.fallback_windows[0] == 1);
    CHECK(report.fallback_windows[1] == 8);
}

TEST_CASE("empty and detection-free inputs are handled") {
    PipelineConfig cfg;
    SUBCASE("zero frames") {
        SequenceBundle empty;
        const TrackingResult res = run_tracker(empty, cfg, TrackMode::CoarseByte, nullptr);
        CHECK(res.frames.empty());
    }
    SUBCASE("frames with nothing detected") {
        SequenceBundle b;
        b.n_frames = 5;
        b.truth.resize(5);
        b.detections.resize(5);
        for (TrackMode mode : {TrackMode::CoarseByte, TrackMode::FineNet}) {
            OraclePointTracker oracle(b, OracleNoiseConfig{});
            cfg.stride = 3;
            const TrackingResult res = run_tracker(b, cfg, mode, &oracle);
            REQUIRE(res.frames.size() == 5);
            for (std::size_t f = 0; f < 5; ++f) {
                CHECK(res.frames[f].frame == static_cast<int>(f) + 1);
                CHECK(res.frames[f].rows.empty());
            }
        }
    }
}

TEST_CASE("tracking runs are deterministic") {
    const SequenceBundle b = generate(noisy_scenario(13));
    PipelineConfig cfg;
    cfg.stride = 8;
    OraclePointTracker o1(b, mild_noise());
    OraclePointTracker o2(b, mild_noise());
    CHECK(results_equal(run_tracker(b, cfg, TrackMode::FineNet, &o1),
                        run_tracker(b, cfg, TrackMode::FineNet, &o2)));
}

TEST_CASE("the fine pass actually changes decisions on erratic scenes") {
    const SequenceBundle b = generate(noisy_scenario(21));
    OraclePointTracker oracle(b, mild_noise());
    PipelineConfig cfg;
    cfg.stride = 8;
    RunReport report;
    const TrackingResult fine = run_tracker(b, cfg, TrackMode::FineNet, &oracle, &report);
    const TrackingResult coarse = run_tracker(b, cfg, TrackMode::CoarseByte, nullptr);
    CHECK_FALSE(results_equal(fine, coarse));
    CHECK(report.fallback_windows.empty());
    CHECK(report.windows > 0);
    CHECK(report.elapsed_ms >= 0.0);
}

TEST_CASE("seeding nets on unclaimed detections is deterministic and sane") {
    const SequenceBundle b = generate(noisy_scenario(33));
    PipelineConfig cfg;
    cfg.stride = 8;
    cfg.poi_on_unmatched_detections = true;
    OraclePointTracker o1(b, mild_noise());
    OraclePointTracker o2(b, mild_noise());
    const TrackingResult r1 = run_tracker(b, cfg, TrackMode::FineNet, &o1);
    const TrackingResult r2 = run_tracker(b, cfg, TrackMode::FineNet, &o2);
    CHECK(results_equal(r1, r2));
    REQUIRE(r1.frames.size() == 40);
    for (const FrameOutput& fo : r1.frames) {
        std::map<int, int> seen;
        for (const TrackedBox& row : fo.rows) {
            CHECK(++seen[row.id] == 1);  // ids unique within a frame
            CHECK(row.box.valid());
        }
    }
}
