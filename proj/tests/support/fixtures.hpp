#pragma once

// Small hand-built and randomized gt/pred sequence pairs, emitted in both
// the engine's per-frame row shape and the reference oracle's shape so the
// two evaluations can be compared value-for-value.

#include <random>
#include <string>
#include <vector>

#include "poitrack/sequence.hpp"
#include "../oracle/metrics_oracle.hpp"

namespace fixtures {

struct Fixture {
    std::string name;
    std::vector<std::vector<poitrack::TrackedBox>> gt, pred;
    refmetrics::OFrames ogt, opred;
};

inline Fixture make_fixture(std::string name, int n_frames) {
    Fixture f;
    f.name = std::move(name);
    f.gt.resize(static_cast<std::size_t>(n_frames));
    f.pred.resize(static_cast<std::size_t>(n_frames));
    f.ogt.resize(static_cast<std::size_t>(n_frames));
    f.opred.resize(static_cast<std::size_t>(n_frames));
    return f;
}

inline void add_gt(Fixture& f, int frame, int id, double left, double top, double w, double h,
                   int cls = 0) {
    const auto t = static_cast<std::size_t>(frame - 1);
    f.gt[t].push_back({id, poitrack::Box::from_tlwh(left, top, w, h), 1.0, cls});
    f.ogt[t].push_back({id, left, top, left + w, top + h, cls});
}

inline void add_pred(Fixture& f, int frame, int id, double left, double top, double w, double h,
                     int cls = 0) {
    const auto t = static_cast<std::size_t>(frame - 1);
    f.pred[t].push_back({id, poitrack::Box::from_tlwh(left, top, w, h), 1.0, cls});
    f.opred[t].push_back({id, left, top, left + w, top + h, cls});
}

// Two well-separated tracks, predictions identical to truth.
inline Fixture fix_perfect() {
    Fixture f = make_fixture("perfect", 12);
    for (int t = 1; t <= 12; ++t) {
        add_gt(f, t, 1, 10.0 + 3.0 * t, 20.0, 30.0, 60.0);
        add_gt(f, t, 2, 300.0 - 2.0 * t, 150.0, 40.0, 50.0);
        add_pred(f, t, 7, 10.0 + 3.0 * t, 20.0, 30.0, 60.0);
        add_pred(f, t, 8, 300.0 - 2.0 * t, 150.0, 40.0, 50.0);
    }
    return f;
}

// One truth track over 10 frames; the prediction misses the last frame and
// adds one far-away false box there: 1 FN + 1 FP over 10 truth rows.
inline Fixture fix_mota08() {
    Fixture f = make_fixture("mota08", 10);
    for (int t = 1; t <= 10; ++t) add_gt(f, t, 1, 50.0 + 4.0 * t, 60.0, 28.0, 56.0);
    for (int t = 1; t <= 9; ++t) add_pred(f, t, 4, 50.0 + 4.0 * t, 60.0, 28.0, 56.0);
    add_pred(f, 10, 5, 500.0, 400.0, 28.0, 56.0);
    return f;
}

// One truth track whose prediction changes identity exactly halfway, both
// halves spatially perfect.
inline Fixture fix_idf1_half() {
    Fixture f = make_fixture("idf1_half", 10);
    for (int t = 1; t <= 10; ++t) {
        add_gt(f, t, 3, 80.0 + 5.0 * t, 90.0, 32.0, 64.0);
        add_pred(f, t, t <= 5 ? 101 : 102, 80.0 + 5.0 * t, 90.0, 32.0, 64.0);
    }
    return f;
}

// Two parallel truth tracks; the predictions trade boxes after frame 5, so
// each truth track switches reported identity once.
inline Fixture fix_idswap() {
    Fixture f = make_fixture("idswap", 10);
    for (int t = 1; t <= 10; ++t) {
        add_gt(f, t, 1, 40.0 + 6.0 * t, 50.0, 30.0, 60.0);
        add_gt(f, t, 2, 40.0 + 6.0 * t, 250.0, 30.0, 60.0);
        const bool swapped = t > 5;
        add_pred(f, t, swapped ? 22 : 21, 40.0 + 6.0 * t, 50.0, 30.0, 60.0);
        add_pred(f, t, swapped ? 21 : 22, 40.0 + 6.0 * t, 250.0, 30.0, 60.0);
    }
    return f;
}

// No truth at all; every prediction row is a false positive.
inline Fixture fix_fp_only() {
    Fixture f = make_fixture("fp_only", 6);
    for (int t = 1; t <= 6; ++t) add_pred(f, t, 9, 100.0 + 10.0 * t, 120.0, 25.0, 50.0);
    return f;
}

// No predictions at all; every truth row is missed.
inline Fixture fix_fn_only() {
    Fixture f = make_fixture("fn_only", 6);
    for (int t = 1; t <= 6; ++t) add_gt(f, t, 2, 100.0 + 10.0 * t, 120.0, 25.0, 50.0);
    return f;
}

// Identity handoff across a coverage gap: the truth track is matched to id
// 31, unreported for three frames, then matched to id 32.
inline Fixture fix_gap_idsw() {
    Fixture f = make_fixture("gap_idsw", 10);
    for (int t = 1; t <= 10; ++t) add_gt(f, t, 1, 60.0 + 5.0 * t, 70.0, 30.0, 60.0);
    for (int t = 1; t <= 3; ++t) add_pred(f, t, 31, 60.0 + 5.0 * t, 70.0, 30.0, 60.0);
    for (int t = 7; t <= 10; ++t) add_pred(f, t, 32, 60.0 + 5.0 * t, 70.0, 30.0, 60.0);
    return f;
}

// Randomized scene: up to 4 truth tracks with jittered prediction boxes,
// random dropouts, one wandering distractor prediction. Continuous draws
// keep overlap values distinct so assignments are unambiguous.
inline Fixture fix_random(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> n_tracks_d(1, 4);
    std::uniform_int_distribution<int> n_frames_d(6, 20);

    const int n_tracks = n_tracks_d(rng);
    const int n_frames = n_frames_d(rng);
    Fixture f = make_fixture("random_" + std::to_string(seed), n_frames);

    struct Traj {
        double x, y, vx, vy, w, h;
        int first, last;
    };
    std::vector<Traj> trajs;
    for (int i = 0; i < n_tracks; ++i) {
        Traj tr;
        tr.x = 40.0 + 500.0 * u01(rng);
        tr.y = 40.0 + 300.0 * u01(rng);
        tr.vx = -6.0 + 12.0 * u01(rng);
        tr.vy = -6.0 + 12.0 * u01(rng);
        tr.w = 20.0 + 30.0 * u01(rng);
        tr.h = 40.0 + 40.0 * u01(rng);
        tr.first = 1 + static_cast<int>(u01(rng) * 3.0);
        tr.last = n_frames - static_cast<int>(u01(rng) * 3.0);
        trajs.push_back(tr);
    }
    for (int t = 1; t <= n_frames; ++t) {
        for (int i = 0; i < n_tracks; ++i) {
            const Traj& tr = trajs[static_cast<std::size_t>(i)];
            if (t < tr.first || t > tr.last) continue;
            const double x = tr.x + tr.vx * t;
            const double y = tr.y + tr.vy * t;
            add_gt(f, t, i + 1, x, y, tr.w, tr.h);
            if (u01(rng) < 0.85) {  // prediction present, jittered
                const double jx = -4.0 + 8.0 * u01(rng);
                const double jy = -4.0 + 8.0 * u01(rng);
                const double jw = 0.85 + 0.3 * u01(rng);
                add_pred(f, t, 100 + i, x + jx, y + jy, tr.w * jw, tr.h * jw);
            }
        }
        if (u01(rng) < 0.3)  // occasional unrelated prediction
            add_pred(f, t, 999, 700.0 + 40.0 * u01(rng), 450.0 + 20.0 * u01(rng), 24.0, 48.0);
    }
    return f;
}

inline std::vector<Fixture> all_fixtures() {
    std::vector<Fixture> fs;
    fs.push_back(fix_perfect());
    fs.push_back(fix_mota08());
    fs.push_back(fix_idf1_half());
    fs.push_back(fix_idswap());
    fs.push_back(fix_fp_only());
    fs.push_back(fix_fn_only());
    fs.push_back(fix_gap_idsw());
    for (unsigned seed : {11u, 23u, 37u, 41u, 59u, 73u, 88u, 97u})
        fs.push_back(fix_random(seed));
    return fs;
}

}  // namespace fixtures
