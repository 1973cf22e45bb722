#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "poitrack/io.hpp"

using namespace poitrack;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

}  // namespace

TEST_CASE("tracking CSV round-trips exact doubles") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> upos(-50.0, 900.0);
    std::uniform_real_distribution<double> usize(0.5, 200.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<MotRow> rows;
    for (int i = 0; i < 200; ++i) {
        MotRow r;
        r.frame = 1 + (i % 25);
        r.id = (i % 7 == 0) ? -1 : (i % 13);
        r.left = upos(rng);
        r.top = upos(rng);
        r.width = usize(rng);
        r.height = usize(rng);
        r.conf = u01(rng);
        r.class_id = i % 3;
        r.visibility = u01(rng);
        rows.push_back(r);
    }
    const std::string path = temp_path("poitrack_mot_roundtrip.csv");
    write_mot(rows, path);
    const std::vector<MotRow> loaded = read_mot(path);
    REQUIRE(loaded.size() == rows.size());
    for (std::size_t i = 1; i < loaded.size(); ++i) {
        const bool ordered = loaded[i - 1].frame < loaded[i].frame ||
                             (loaded[i - 1].frame == loaded[i].frame &&
                              loaded[i - 1].id <= loaded[i].id);
        CHECK(ordered);
    }
    // Sort our copy the same way and compare field-for-field, bitwise.
    std::stable_sort(rows.begin(), rows.end(), [](const MotRow& a, const MotRow& b) {
        return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(loaded[i].frame == rows[i].frame);
        CHECK(loaded[i].id == rows[i].id);
        CHECK(loaded[i].left == rows[i].left);
        CHECK(loaded[i].top == rows[i].top);
        CHECK(loaded[i].width == rows[i].width);
        CHECK(loaded[i].height == rows[i].height);
        CHECK(loaded[i].conf == rows[i].conf);
        CHECK(loaded[i].class_id == rows[i].class_id);
        CHECK(loaded[i].visibility == rows[i].visibility);
    }
    // Writing the loaded rows again reproduces the file byte for byte.
    const std::string path2 = temp_path("poitrack_mot_roundtrip2.csv");
    write_mot(loaded, path2);
    std::ifstream a(path), b(path2);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("tracking CSV parser is strict about its nine fields") {
    const std::string path = temp_path("poitrack_mot_bad.csv");

    write_text(path, "");
    CHECK(read_mot(path).empty());

    write_text(path, "# comment only\n\n");
    CHECK(read_mot(path).empty());

    write_text(path, "1,2,10,20,30,40,0.9,0\n");  // 8 fields
    CHECK_THROWS_WITH_AS(read_mot(path), doctest::Contains(":1: expected 9 fields"), DataError);

    write_text(path, "1,2,10,20,30,40,0.9,0,1\nx,2,10,20,30,40,0.9,0,1\n");
    CHECK_THROWS_WITH_AS(read_mot(path), doctest::Contains(":2: bad frame"), DataError);

    write_text(path, "0,2,10,20,30,40,0.9,0,1\n");  // frame < 1
    CHECK_THROWS_AS(read_mot(path), DataError);

    write_text(path, "1,2,10,20,30,40,0.9,0,1.5\n");  // visibility > 1
    CHECK_THROWS_AS(read_mot(path), DataError);

    write_text(path, "1,2,10,20,0,40,0.9,0,1\n");  // track row, zero width
    CHECK_THROWS_AS(read_mot(path), DataError);

    write_text(path, "1,-1,10,20,0,40,0.9,0,1\n");  // detection rows may be empty
    CHECK(read_mot(path).size() == 1);

    CHECK_THROWS_AS(read_mot(temp_path("poitrack_definitely_missing.csv")), DataError);
    std::remove(path.c_str());
}

TEST_CASE("bundles survive the trip through interchange rows") {
    ScenarioConfig cfg;
    cfg.n_objects = 5;
    cfg.frames = 20;
    cfg.center_jitter = 1.2;
    cfg.miss_prob = 0.1;
    cfg.fp_rate = 0.5;
    cfg.n_occluders = 1;
    cfg.seed = 77;
    const SequenceBundle b = generate(cfg);

    const std::string gt_path = temp_path("poitrack_gt.csv");
    const std::string det_path = temp_path("poitrack_det.csv");
    write_mot(mot_from_gt(b), gt_path);
    write_mot(mot_from_detections(b), det_path);

    const std::vector<MotRow> gt_raw = read_mot(gt_path);
    const auto gt_rows = group_rows(gt_raw, b.n_frames);
    REQUIRE(static_cast<int>(gt_rows.size()) == b.n_frames);
    for (int f = 1; f <= b.n_frames; ++f) {
        const auto& truth = b.truth_at(f);
        REQUIRE(gt_rows[static_cast<std::size_t>(f - 1)].size() == truth.size());
        // Field-level fidelity is bitwise on the written tuple (left, top,
        // width, height); reconstructed far corners may differ by an ulp.
        for (const ObjectState& s : truth) {
            bool found = false;
            for (const MotRow& r : gt_raw) {
                if (r.frame == f && r.id == s.id && r.left == s.box().x1 &&
                    r.top == s.box().y1 && r.width == s.w && r.height == s.h &&
                    r.visibility == s.visibility && r.class_id == s.class_id)
                    found = true;
            }
            CHECK(found);
        }
    }

    const auto det_frames = detections_from_rows(read_mot(det_path), b.n_frames);
    REQUIRE(static_cast<int>(det_frames.size()) == b.n_frames);
    for (int f = 1; f <= b.n_frames; ++f) {
        const auto& orig = b.detections_at(f);
        const auto& got = det_frames[static_cast<std::size_t>(f - 1)];
        REQUIRE(got.size() == orig.size());
        for (const Detection& d : orig) {
            bool found = false;
            for (const Detection& g : got) {
                if (g.box.x1 == d.box.x1 && g.box.y1 == d.box.y1 && g.score == d.score &&
                    g.class_id == d.class_id)
                    found = true;
            }
            CHECK(found);
        }
    }
    std::remove(gt_path.c_str());
    std::remove(det_path.c_str());
}

TEST_CASE("tracker output rows carry ids, scores and classes") {
    TrackingResult res;
    res.frames.push_back(FrameOutput{1, {TrackedBox{3, Box{10, 20, 40, 80}, 0.75, 1}}});
    res.frames.push_back(FrameOutput{2, {}});
    const auto rows = mot_from_result(res);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].frame == 1);
    CHECK(rows[0].id == 3);
    CHECK(rows[0].left == 10.0);
    CHECK(rows[0].width == 30.0);
    CHECK(rows[0].conf == 0.75);
    CHECK(rows[0].class_id == 1);
}

TEST_CASE("pose files reproduce ground truth bitwise") {
    ScenarioConfig cfg;
    cfg.n_objects = 4;
    cfg.frames = 15;
    cfg.deform_amplitude = 0.4;
    cfg.crossing_prob = 1.0;
    cfg.n_occluders = 2;
    cfg.seed = 31;
    const SequenceBundle b = generate(cfg);
    const std::string path = temp_path("poitrack_poses.csv");
    write_poses(b, path);
    const SequenceBundle back = read_poses(path);
    REQUIRE(back.n_frames == b.n_frames);
    for (int f = 1; f <= b.n_frames; ++f) {
        const auto& orig = b.truth_at(f);
        const auto& got = back.truth_at(f);
        REQUIRE(got.size() == orig.size());
        for (std::size_t i = 0; i < orig.size(); ++i) {
            CHECK(got[i].id == orig[i].id);
            CHECK(got[i].cx == orig[i].cx);
            CHECK(got[i].cy == orig[i].cy);
            CHECK(got[i].w == orig[i].w);
            CHECK(got[i].h == orig[i].h);
            CHECK(got[i].visibility == orig[i].visibility);
        }
        CHECK(back.detections_at(f).empty());
    }
    std::remove(path.c_str());
}

TEST_CASE("configs resolve defaults, file, then overrides") {
    const RunConfig defaults = read_config("");
    CHECK(defaults.mode == TrackMode::FineNet);
    CHECK(defaults.pipeline.stride == 8);
    CHECK(defaults.pipeline.assoc.det_high == 0.5);
    CHECK(defaults.oracle.sigma == 0.0);

    const std::string path = temp_path("poitrack_config.ini");
    write_text(path,
               "# comment\n"
               "[pipeline]\n"
               "stride = 4\n"
               "mode = coarse-byte\n"
               "\n"
               "[simulator]\n"
               "objects = 3\n"
               "frames = 25\n");
    const RunConfig from_file = read_config(path);
    CHECK(from_file.pipeline.stride == 4);
    CHECK(from_file.mode == TrackMode::CoarseByte);
    CHECK(from_file.simulator.n_objects == 3);
    CHECK(from_file.simulator.frames == 25);
    CHECK(from_file.pipeline.assoc.det_high == 0.5);  // untouched default

    // Overrides beat the file; the last override wins.
    const RunConfig layered =
        read_config(path, {"pipeline.stride=6", "pipeline.stride=2", "sampler.mode=uniform"});
    CHECK(layered.pipeline.stride == 2);
    CHECK(layered.pipeline.sampler.mode == PoiSampleMode::UniformRandom);
    CHECK(layered.simulator.n_objects == 3);

    RunConfig mutated = from_file;
    apply_overrides(mutated, {"assoc.fusion_mode=max", "pipeline.oracle_sigma=2.5"});
    CHECK(mutated.pipeline.assoc.fusion_mode == FusionMode::Max);
    CHECK(mutated.oracle.sigma == 2.5);
    std::remove(path.c_str());
}

TEST_CASE("config echo feeds back to the identical config") {
    RunConfig cfg = read_config("");
    apply_overrides(cfg, {"pipeline.stride=5", "assoc.fusion_lambda=0.7", "sampler.count=16",
                          "simulator.deform_amplitude=0.45", "simulator.layout=lanes",
                          "pipeline.oracle_seed=987654321", "simulator.seed=42"});
    const std::string echo = write_config(cfg);
    const std::string path = temp_path("poitrack_config_echo.ini");
    write_text(path, echo);
    const RunConfig back = read_config(path);
    CHECK(write_config(back) == echo);
    CHECK(back.pipeline.stride == 5);
    CHECK(back.pipeline.assoc.fusion_lambda == 0.7);
    CHECK(back.pipeline.sampler.rows == 4);
    CHECK(back.pipeline.sampler.cols == 4);
    CHECK(back.simulator.layout == Layout::Lanes);
    CHECK(back.oracle.seed == 987654321ULL);
    std::remove(path.c_str());
}

TEST_CASE("bad configuration values are rejected") {
    CHECK_THROWS_WITH_AS(read_config("", {"pipeline.strids=4"}),
                         doctest::Contains("pipeline.strids"), ConfigError);
    CHECK_THROWS_WITH_AS(read_config("", {"pipeline.stride=zero"}),
                         doctest::Contains("pipeline.stride"), ConfigError);
    CHECK_THROWS_WITH_AS(read_config("", {"pipeline.stride=0"}),
                         doctest::Contains("pipeline.stride"), ConfigError);
    CHECK_THROWS_WITH_AS(read_config("", {"assoc.det_high=1.5"}),
                         doctest::Contains("assoc.det_high"), ConfigError);
    CHECK_THROWS_WITH_AS(read_config("", {"unknown.key=1"}), doctest::Contains("command line"),
                         ConfigError);
    CHECK_THROWS_AS(read_config("", {"no-equals-sign"}), ConfigError);
    CHECK_THROWS_AS(read_config("", {"noequalskey=1"}), ConfigError);

    // Cross-field validation after all layers are applied.
    CHECK_THROWS_WITH_AS(read_config("", {"assoc.det_low=0.8", "assoc.det_high=0.4"}),
                         doctest::Contains("det_low"), ConfigError);
    CHECK_THROWS_WITH_AS(read_config("", {"simulator.speed_min=9", "simulator.speed_max=2"}),
                         doctest::Contains("speed"), ConfigError);

    const std::string path = temp_path("poitrack_config_bad.ini");
    write_text(path, "stride = 4\n");  // key before any section
    CHECK_THROWS_AS(read_config(path), ConfigError);
    write_text(path, "[pipeline\nstride = 4\n");  // malformed section
    CHECK_THROWS_AS(read_config(path), ConfigError);
    write_text(path, "[pipeline]\nstride\n");  // no equals
    CHECK_THROWS_AS(read_config(path), ConfigError);
    CHECK_THROWS_AS(read_config(temp_path("poitrack_config_missing.ini")), ConfigError);
    std::remove(path.c_str());
}
