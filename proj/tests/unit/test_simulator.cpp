#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "poitrack/geometry.hpp"
#include "poitrack/simulator.hpp"

using namespace poitrack;

namespace {

bool bundles_equal(const SequenceBundle& a, const SequenceBundle& b) {
    if (a.n_frames != b.n_frames) return false;
    for (int f = 0; f < a.n_frames; ++f) {
        const auto& ta = a.truth[static_cast<std::size_t>(f)];
        const auto& tb = b.truth[static_cast<std::size_t>(f)];
        if (ta.size() != tb.size()) return false;
        for (std::size_t i = 0; i < ta.size(); ++i) {
            if (ta[i].id != tb[i].id || ta[i].cx != tb[i].cx || ta[i].cy != tb[i].cy ||
                ta[i].w != tb[i].w || ta[i].h != tb[i].h ||
                ta[i].visibility != tb[i].visibility || ta[i].class_id != tb[i].class_id)
                return false;
        }
        const auto& da = a.detections[static_cast<std::size_t>(f)];
        const auto& db = b.detections[static_cast<std::size_t>(f)];
        if (da.size() != db.size()) return false;
        for (std::size_t i = 0; i < da.size(); ++i) {
            if (da[i].box.x1 != db[i].box.x1 || da[i].box.y1 != db[i].box.y1 ||
                da[i].box.x2 != db[i].box.x2 || da[i].box.y2 != db[i].box.y2 ||
                da[i].score != db[i].score || da[i].class_id != db[i].class_id)
                return false;
        }
    }
    return true;
}

// Mean relative aspect swing |(w'/h')/(w/h) - 1| across consecutive frames.
double mean_aspect_swing(const SequenceBundle& b) {
    double sum = 0.0;
    long long n = 0;
    for (int f = 1; f < b.n_frames; ++f) {
        for (const ObjectState& cur : b.truth[static_cast<std::size_t>(f)]) {
            for (const ObjectState& prev : b.truth[static_cast<std::size_t>(f - 1)]) {
                if (prev.id != cur.id) continue;
                sum += std::abs((cur.w / cur.h) / (prev.w / prev.h) - 1.0);
                ++n;
            }
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double mean_center_step(const SequenceBundle& b) {
    double sum = 0.0;
    long long n = 0;
    for (int f = 1; f < b.n_frames; ++f) {
        for (const ObjectState& cur : b.truth[static_cast<std::size_t>(f)]) {
            for (const ObjectState& prev : b.truth[static_cast<std::size_t>(f - 1)]) {
                if (prev.id != cur.id) continue;
                sum += std::hypot(cur.cx - prev.cx, cur.cy - prev.cy);
                ++n;
            }
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("generation is a pure function of the config") {
    ScenarioConfig cfg;
    cfg.n_objects = 6;
    cfg.frames = 40;
    cfg.crossing_prob = 0.5;
    cfg.deform_amplitude = 0.3;
    cfg.center_jitter = 1.5;
    cfg.size_jitter = 0.05;
    cfg.miss_prob = 0.1;
    cfg.fp_rate = 1.0;
    cfg.n_occluders = 2;
    cfg.seed = 99;
    CHECK(bundles_equal(generate(cfg), generate(cfg)));

    ScenarioConfig other = cfg;
    other.seed = 100;
    CHECK_FALSE(bundles_equal(generate(cfg), generate(other)));
}

TEST_CASE("a noiseless detector reports the truth verbatim") {
    ScenarioConfig cfg;
    cfg.n_objects = 5;
    cfg.frames = 30;
    cfg.occlusion_miss_boost = 0.0;  // chance overlaps must not hide anyone
    cfg.seed = 4;
    const SequenceBundle b = generate(cfg);
    REQUIRE(b.n_frames == 30);
    for (int f = 0; f < b.n_frames; ++f) {
        const auto& truth = b.truth[static_cast<std::size_t>(f)];
        const auto& dets = b.detections[static_cast<std::size_t>(f)];
        REQUIRE(truth.size() == 5);
        REQUIRE(dets.size() == truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const Box g = truth[i].box();
            CHECK(dets[i].box.x1 == g.x1);
            CHECK(dets[i].box.y1 == g.y1);
            CHECK(dets[i].box.x2 == g.x2);
            CHECK(dets[i].box.y2 == g.y2);
            CHECK(dets[i].class_id == truth[i].class_id);
            CHECK(dets[i].score >= 0.05);
            CHECK(dets[i].score <= 1.0);
        }
    }
}

TEST_CASE("zero objects with false positives yields detections over empty truth") {
    ScenarioConfig cfg;
    cfg.n_objects = 0;
    cfg.frames = 50;
    cfg.fp_rate = 2.0;
    cfg.seed = 8;
    const SequenceBundle b = generate(cfg);
    std::size_t total = 0;
    for (int f = 0; f < b.n_frames; ++f) {
        CHECK(b.truth[static_cast<std::size_t>(f)].empty());
        for (const Detection& d : b.detections[static_cast<std::size_t>(f)]) {
            CHECK(d.box.valid());
            // Centers are drawn inside the canvas; the box may cross the edge.
            CHECK(d.box.cx() >= 0.0);
            CHECK(d.box.cx() <= cfg.width);
            CHECK(d.box.cy() >= 0.0);
            CHECK(d.box.cy() <= cfg.height);
            CHECK(d.score >= 0.05);
            CHECK(d.score <= 0.95);
            ++total;
        }
    }
    CHECK(total > 25);  // Poisson(2) over 50 frames
}

TEST_CASE("the deformation dial moves aspect swing monotonically") {
    ScenarioConfig cfg;
    cfg.n_objects = 6;
    cfg.frames = 60;
    cfg.seed = 12;
    double prev = -1.0;
    for (double amp : {0.0, 0.3, 0.6}) {
        cfg.deform_amplitude = amp;
        const double swing = mean_aspect_swing(generate(cfg));
        CHECK(swing > prev);
        prev = swing;
    }
    cfg.deform_amplitude = 0.0;
    CHECK(mean_aspect_swing(generate(cfg)) == 0.0);
}

TEST_CASE("decimation keeps every factor-th frame") {
    ScenarioConfig cfg;
    cfg.n_objects = 4;
    cfg.frames = 80;
    cfg.center_jitter = 1.0;
    cfg.miss_prob = 0.1;
    cfg.seed = 3;
    const SequenceBundle b = generate(cfg);

    CHECK(bundles_equal(decimate(b, 1), b));

    const SequenceBundle d8 = decimate(b, 8);
    REQUIRE(d8.n_frames == 10);
    for (int k = 0; k < 10; ++k) {
        const auto& kept = d8.truth[static_cast<std::size_t>(k)];
        const auto& orig = b.truth[static_cast<std::size_t>(8 * k)];
        REQUIRE(kept.size() == orig.size());
        for (std::size_t i = 0; i < kept.size(); ++i) {
            CHECK(kept[i].id == orig[i].id);
            CHECK(kept[i].cx == orig[i].cx);
            CHECK(kept[i].cy == orig[i].cy);
        }
        CHECK(d8.detections[static_cast<std::size_t>(k)].size() ==
              b.detections[static_cast<std::size_t>(8 * k)].size());
    }
    CHECK_THROWS_AS(decimate(b, 0), std::invalid_argument);
}

TEST_CASE("decimation scales apparent motion by the factor") {
    ScenarioConfig cfg;
    cfg.layout = Layout::Lanes;  // straight constant-speed motion
    cfg.n_objects = 8;
    cfg.frames = 41;
    cfg.width = 3000.0;
    cfg.height = 1600.0;
    cfg.speed_min = 3.0;
    cfg.speed_max = 6.0;
    cfg.seed = 17;
    const SequenceBundle b = generate(cfg);
    const double base = mean_center_step(b);
    const double fast = mean_center_step(decimate(b, 4));
    REQUIRE(base > 0.0);
    const double ratio = fast / base;
    CHECK(ratio > 3.6);   // a stray wall bounce can only shrink it slightly
    CHECK(ratio < 4.05);
}

TEST_CASE("covered_fraction hand cases") {
    const Box target{0, 0, 10, 10};
    CHECK(covered_fraction(target, {}) == 0.0);
    CHECK(covered_fraction(target, {Box{0, 0, 10, 10}}) == 1.0);
    CHECK(covered_fraction(target, {Box{-5, -5, 50, 50}}) == 1.0);
    CHECK(covered_fraction(target, {Box{0, 0, 5, 10}}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(covered_fraction(target, {Box{20, 20, 30, 30}}) == 0.0);
    // Two overlapping halves: union is three quarters, not (0.5 + 0.5).
    CHECK(covered_fraction(target, {Box{0, 0, 5, 10}, Box{2.5, 0, 7.5, 10}}) ==
          doctest::Approx(0.75).epsilon(1e-15));
    CHECK(covered_fraction(Box{0, 0, 0, 10}, {Box{0, 0, 10, 10}}) == 0.0);
}

TEST_CASE("covered_fraction equals unit-cell counting on integer boxes") {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> usz(8, 40), upos(-10, 50), ulen(1, 30), ucnt(1, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const int W = usz(rng), H = usz(rng);
        const Box target{0, 0, static_cast<double>(W), static_cast<double>(H)};
        std::vector<Box> covers;
        const int n = ucnt(rng);
        for (int i = 0; i < n; ++i) {
            const int x = upos(rng), y = upos(rng);
            covers.push_back(Box{static_cast<double>(x), static_cast<double>(y),
                                 static_cast<double>(x + ulen(rng)),
                                 static_cast<double>(y + ulen(rng))});
        }
        long long cells = 0;
        for (int i = 0; i < W; ++i) {
            for (int j = 0; j < H; ++j) {
                const double px = i + 0.5, py = j + 0.5;
                for (const Box& c : covers) {
                    if (c.x1 <= px && px <= c.x2 && c.y1 <= py && py <= c.y2) {
                        ++cells;
                        break;
                    }
                }
            }
        }
        const double expect = static_cast<double>(cells) / static_cast<double>(W * H);
        REQUIRE(covered_fraction(target, covers) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("lane layout keeps objects apart and level") {
    ScenarioConfig cfg;
    cfg.layout = Layout::Lanes;
    cfg.n_objects = 6;
    cfg.frames = 60;
    cfg.seed = 2;
    const SequenceBundle b = generate(cfg);
    std::vector<double> lane_y(7, -1.0);
    for (int f = 0; f < b.n_frames; ++f) {
        const auto& truth = b.truth[static_cast<std::size_t>(f)];
        REQUIRE(truth.size() == 6);
        for (std::size_t i = 0; i < truth.size(); ++i) {
            CHECK(truth[i].visibility == 1.0);
            const int id = truth[i].id;
            if (lane_y[static_cast<std::size_t>(id)] < 0.0) {
                lane_y[static_cast<std::size_t>(id)] = truth[i].cy;
            } else {
                CHECK(truth[i].cy == lane_y[static_cast<std::size_t>(id)]);
            }
            for (std::size_t j = i + 1; j < truth.size(); ++j) {
                CHECK(iou(truth[i].box(), truth[j].box()) == 0.0);
            }
        }
    }
}

TEST_CASE("detector dropout leaves the world untouched") {
    ScenarioConfig clean_cfg;
    clean_cfg.n_objects = 6;
    clean_cfg.frames = 50;
    clean_cfg.crossing_prob = 0.4;
    clean_cfg.deform_amplitude = 0.3;
    clean_cfg.center_jitter = 1.0;
    clean_cfg.seed = 23;
    ScenarioConfig lossy_cfg = clean_cfg;
    lossy_cfg.miss_prob = 0.5;

    const SequenceBundle clean = generate(clean_cfg);
    const SequenceBundle lossy = generate(lossy_cfg);
    std::size_t clean_dets = 0, lossy_dets = 0;
    for (int f = 0; f < clean.n_frames; ++f) {
        const auto& ta = clean.truth[static_cast<std::size_t>(f)];
        const auto& tb = lossy.truth[static_cast<std::size_t>(f)];
        REQUIRE(ta.size() == tb.size());
        for (std::size_t i = 0; i < ta.size(); ++i) {
            CHECK(ta[i].cx == tb[i].cx);
            CHECK(ta[i].cy == tb[i].cy);
            CHECK(ta[i].w == tb[i].w);
            CHECK(ta[i].visibility == tb[i].visibility);
        }
        // Surviving detections are bitwise-identical to their clean twins.
        clean_dets += clean.detections[static_cast<std::size_t>(f)].size();
        lossy_dets += lossy.detections[static_cast<std::size_t>(f)].size();
        for (const Detection& d : lossy.detections[static_cast<std::size_t>(f)]) {
            bool found = false;
            for (const Detection& c : clean.detections[static_cast<std::size_t>(f)]) {
                if (c.box.x1 == d.box.x1 && c.box.y1 == d.box.y1 && c.score == d.score)
                    found = true;
            }
            CHECK(found);
        }
    }
    CHECK(lossy_dets < clean_dets);
}

TEST_CASE("occluders depress visibility") {
    ScenarioConfig cfg;
    cfg.n_objects = 8;
    cfg.frames = 60;
    cfg.n_occluders = 3;
    cfg.occluder_size = 200.0;
    cfg.seed = 5;
    const SequenceBundle b = generate(cfg);
    int dimmed = 0;
    for (int f = 0; f < b.n_frames; ++f) {
        for (const ObjectState& s : b.truth[static_cast<std::size_t>(f)]) {
            REQUIRE(s.visibility >= 0.0);
            REQUIRE(s.visibility <= 1.0);
            if (s.visibility < 0.999) ++dimmed;
        }
    }
    CHECK(dimmed > 0);
}

TEST_CASE("bad scenario configs are rejected") {
    auto bad = [](auto&& tweak) {
        ScenarioConfig cfg;
        tweak(cfg);
        CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    };
    bad([](ScenarioConfig& c) { c.n_objects = -1; });
    bad([](ScenarioConfig& c) { c.frames = 0; });
    bad([](ScenarioConfig& c) { c.width = 50.0; });
    bad([](ScenarioConfig& c) { c.speed_min = 9.0; c.speed_max = 2.0; });
    bad([](ScenarioConfig& c) { c.deform_amplitude = 0.95; });
    bad([](ScenarioConfig& c) { c.crossing_prob = 1.5; });
    bad([](ScenarioConfig& c) { c.miss_prob = -0.1; });
    bad([](ScenarioConfig& c) { c.fp_rate = -1.0; });
    bad([](ScenarioConfig& c) { c.n_classes = 0; });
}
