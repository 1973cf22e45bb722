#include "poitrack/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace poitrack {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBounceMargin = 20.0;

void check_config(const ScenarioConfig& cfg) {
    if (cfg.n_objects < 0) throw std::invalid_argument("simulator: n_objects must be >= 0");
    if (cfg.frames < 1) throw std::invalid_argument("simulator: frames must be >= 1");
    if (cfg.width < 100.0 || cfg.height < 100.0)
        throw std::invalid_argument("simulator: canvas must be at least 100x100");
    if (cfg.speed_min < 0.0 || cfg.speed_max < cfg.speed_min)
        throw std::invalid_argument("simulator: speed range is inverted");
    if (cfg.size_min <= 0.0 || cfg.size_max < cfg.size_min)
        throw std::invalid_argument("simulator: size range is invalid");
    if (cfg.deform_amplitude < 0.0 || cfg.deform_amplitude > 0.9)
        throw std::invalid_argument("simulator: deform_amplitude must be in [0, 0.9]");
    if (cfg.crossing_prob < 0.0 || cfg.crossing_prob > 1.0)
        throw std::invalid_argument("simulator: crossing_prob must be in [0, 1]");
    if (cfg.miss_prob < 0.0 || cfg.miss_prob > 1.0)
        throw std::invalid_argument("simulator: miss_prob must be in [0, 1]");
    if (cfg.occlusion_miss_boost < 0.0 || cfg.occlusion_miss_boost > 1.0)
        throw std::invalid_argument("simulator: occlusion_miss_boost must be in [0, 1]");
    if (cfg.fp_rate < 0.0) throw std::invalid_argument("simulator: fp_rate must be >= 0");
    if (cfg.center_jitter < 0.0 || cfg.size_jitter < 0.0)
        throw std::invalid_argument("simulator: jitter must be >= 0");
    if (cfg.turn_max < 0.0 || cfg.speed_jitter < 0.0)
        throw std::invalid_argument("simulator: kinematic jitter must be >= 0");
    if (cfg.conf_std < 0.0) throw std::invalid_argument("simulator: conf_std must be >= 0");
    if (cfg.n_classes < 1) throw std::invalid_argument("simulator: n_classes must be >= 1");
    if (cfg.n_occluders < 0) throw std::invalid_argument("simulator: n_occluders must be >= 0");
    if (cfg.sequences < 1) throw std::invalid_argument("simulator: sequences must be >= 1");
}

struct ObjSim {
    double x = 0.0, y = 0.0;
    double heading = 0.0, speed = 0.0;
    double area0 = 0.0;          // box area, held constant under deformation
    double aspect0 = 1.0;
    double phase = 0.0, freq = 0.0;
    int class_id = 0;
    bool straight = false;       // lanes: no turning, no speed jitter
    bool has_event = false;      // scheduled crossing
    int t_start = 0, t_meet = 0;
    double ex = 0.0, ey = 0.0;
};

void shape_at(const ObjSim& o, double amplitude, int frame, double& w, double& h) {
    double aspect = o.aspect0 * (1.0 + amplitude * std::sin(2.0 * kPi * o.freq * frame + o.phase));
    aspect = std::max(aspect, 0.05);
    w = std::sqrt(o.area0 * aspect);
    h = std::sqrt(o.area0 / aspect);
}

// Exact area of the union of axis-aligned boxes via an x-sweep over slabs.
double union_area(const std::vector<Box>& rects) {
    if (rects.empty()) return 0.0;
    std::vector<double> xs;
    xs.reserve(rects.size() * 2);
    for (const Box& r : rects) {
        xs.push_back(r.x1);
        xs.push_back(r.x2);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double xa = xs[k], xb = xs[k + 1];
        if (xb <= xa) continue;
        std::vector<std::pair<double, double>> spans;
        for (const Box& r : rects) {
            if (r.x1 <= xa && r.x2 >= xb) spans.emplace_back(r.y1, r.y2);
        }
        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end());
        double covered = 0.0, lo = spans[0].first, hi = spans[0].second;
        for (std::size_t i = 1; i < spans.size(); ++i) {
            if (spans[i].first > hi) {
                covered += hi - lo;
                lo = spans[i].first;
                hi = spans[i].second;
            } else {
                hi = std::max(hi, spans[i].second);
            }
        }
        covered += hi - lo;
        total += covered * (xb - xa);
    }
    return total;
}

}  // namespace

double covered_fraction(const Box& target, const std::vector<Box>& covers) {
    const double a = area(target);
    if (a <= 0.0) return 0.0;
    std::vector<Box> clipped;
    for (const Box& c : covers) {
        Box b;
        b.x1 = std::max(target.x1, c.x1);
        b.y1 = std::max(target.y1, c.y1);
        b.x2 = std::min(target.x2, c.x2);
        b.y2 = std::min(target.y2, c.y2);
        if (b.x2 > b.x1 && b.y2 > b.y1) clipped.push_back(b);
    }
    return std::min(1.0, union_area(clipped) / a);
}

SequenceBundle generate(const ScenarioConfig& cfg) {
    check_config(cfg);
    std::mt19937_64 rng(cfg.seed);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto gauss = [&](double mean, double std) {
        return std == 0.0 ? mean : std::normal_distribution<double>(mean, std)(rng);
    };

    SequenceBundle bundle;
    bundle.n_frames = cfg.frames;
    bundle.width = cfg.width;
    bundle.height = cfg.height;
    bundle.seed = cfg.seed;
    bundle.truth.resize(static_cast<std::size_t>(cfg.frames));
    bundle.detections.resize(static_cast<std::size_t>(cfg.frames));

    // --- spawn objects ---
    std::vector<ObjSim> objs(static_cast<std::size_t>(cfg.n_objects));
    const double lane_h = cfg.n_objects > 0 ? cfg.height / cfg.n_objects : cfg.height;
    for (int i = 0; i < cfg.n_objects; ++i) {
        ObjSim& o = objs[static_cast<std::size_t>(i)];
        o.class_id = i % cfg.n_classes;
        double h = uniform(cfg.size_min, cfg.size_max);
        o.aspect0 = cfg.aspect_base * (1.0 + uniform(-0.15, 0.15));
        o.phase = uniform(0.0, 2.0 * kPi);
        o.freq = cfg.deform_freq * (1.0 + uniform(-0.2, 0.2));
        o.speed = uniform(cfg.speed_min, cfg.speed_max);
        if (cfg.layout == Layout::Lanes) {
            h = std::min(h, 0.75 * lane_h);
            o.x = uniform(0.15 * cfg.width, 0.85 * cfg.width);
            o.y = (i + 0.5) * lane_h;
            o.heading = 0.0;
            o.straight = true;
        } else {
            o.x = uniform(0.1 * cfg.width, 0.9 * cfg.width);
            o.y = uniform(0.1 * cfg.height, 0.9 * cfg.height);
            o.heading = uniform(0.0, 2.0 * kPi);
        }
        o.area0 = (o.aspect0 * h) * h;
    }

    // --- schedule crossings (scatter only), one shot per disjoint pair ---
    if (cfg.layout == Layout::Scatter) {
        for (int i = 0; i + 1 < cfg.n_objects; i += 2) {
            const double roll = uniform(0.0, 1.0);
            const int t_meet = static_cast<int>(cfg.frames * uniform(0.35, 0.65));
            const double ex = uniform(0.3 * cfg.width, 0.7 * cfg.width);
            const double ey = uniform(0.3 * cfg.height, 0.7 * cfg.height);
            if (roll >= cfg.crossing_prob || t_meet < 5) continue;
            for (int k : {i, i + 1}) {
                ObjSim& o = objs[static_cast<std::size_t>(k)];
                o.has_event = true;
                o.t_meet = t_meet;
                o.t_start = std::max(2, t_meet - 30);
                o.ex = ex;
                o.ey = ey;
            }
        }
    }

    // --- static occluders, rendered on top of everything ---
    std::vector<Box> occluders;
    for (int i = 0; i < cfg.n_occluders; ++i) {
        const double cx = uniform(0.1 * cfg.width, 0.9 * cfg.width);
        const double cy = uniform(0.1 * cfg.height, 0.9 * cfg.height);
        const double w = cfg.occluder_size * uniform(0.7, 1.3);
        const double h = cfg.occluder_size * uniform(0.7, 1.3) / uniform(0.8, 1.6);
        occluders.push_back(Box::from_center(cx, cy, w, h));
    }

    // --- roll the world forward ---
    for (int frame = 1; frame <= cfg.frames; ++frame) {
        if (frame > 1) {
            for (ObjSim& o : objs) {
                if (o.has_event && frame >= o.t_start && frame <= o.t_meet) {
                    // Steer to arrive at the waypoint exactly at t_meet.
                    const double dt = static_cast<double>(o.t_meet - frame + 1);
                    const double vx = (o.ex - o.x) / dt;
                    const double vy = (o.ey - o.y) / dt;
                    o.heading = std::atan2(vy, vx);
                    o.speed = std::clamp(std::hypot(vx, vy), 0.2, cfg.speed_max * 1.5);
                } else if (!o.straight) {
                    o.heading += uniform(-cfg.turn_max, cfg.turn_max);
                    o.speed = std::clamp(o.speed + uniform(-cfg.speed_jitter, cfg.speed_jitter),
                                         cfg.speed_min, cfg.speed_max);
                }
                o.x += o.speed * std::cos(o.heading);
                o.y += o.speed * std::sin(o.heading);
                // Bounce off the walls; heading reflects, position folds back.
                if (o.x < kBounceMargin) {
                    o.x = 2.0 * kBounceMargin - o.x;
                    o.heading = kPi - o.heading;
                } else if (o.x > cfg.width - kBounceMargin) {
                    o.x = 2.0 * (cfg.width - kBounceMargin) - o.x;
                    o.heading = kPi - o.heading;
                }
                if (o.y < kBounceMargin) {
                    o.y = 2.0 * kBounceMargin - o.y;
                    o.heading = -o.heading;
                } else if (o.y > cfg.height - kBounceMargin) {
                    o.y = 2.0 * (cfg.height - kBounceMargin) - o.y;
                    o.heading = -o.heading;
                }
            }
        }

        std::vector<ObjectState>& truth = bundle.truth[static_cast<std::size_t>(frame - 1)];
        truth.resize(objs.size());
        for (std::size_t i = 0; i < objs.size(); ++i) {
            const ObjSim& o = objs[i];
            ObjectState& s = truth[i];
            s.id = static_cast<int>(i) + 1;
            shape_at(o, cfg.deform_amplitude, frame, s.w, s.h);
            s.cx = o.x;
            s.cy = o.y;
            s.class_id = o.class_id;
        }
        // Visibility: later ids sit in front, occluders in front of all.
        for (std::size_t i = 0; i < truth.size(); ++i) {
            std::vector<Box> covers = occluders;
            for (std::size_t j = i + 1; j < truth.size(); ++j) covers.push_back(truth[j].box());
            truth[i].visibility = 1.0 - covered_fraction(truth[i].box(), covers);
        }

        // Detector: fixed per-object draw count keeps streams stable.
        std::vector<Detection>& dets = bundle.detections[static_cast<std::size_t>(frame - 1)];
        for (const ObjectState& s : truth) {
            const double u_miss = uniform(0.0, 1.0);
            const double jx = gauss(0.0, cfg.center_jitter);
            const double jy = gauss(0.0, cfg.center_jitter);
            const double sw = std::max(0.2, gauss(1.0, cfg.size_jitter));
            const double sh = std::max(0.2, gauss(1.0, cfg.size_jitter));
            const double conf_raw = gauss(cfg.conf_mean, cfg.conf_std);
            const double miss_eff =
                std::clamp(cfg.miss_prob + cfg.occlusion_miss_boost * (1.0 - s.visibility), 0.0, 0.98);
            if (u_miss < miss_eff) continue;
            Detection d;
            d.box = Box::from_center(s.cx + jx, s.cy + jy, s.w * sw, s.h * sh);
            d.score = std::clamp(conf_raw * (0.35 + 0.65 * s.visibility), 0.05, 1.0);
            d.class_id = s.class_id;
            dets.push_back(d);
        }
        if (cfg.fp_rate > 0.0) {
            const int n_fp = std::poisson_distribution<int>(cfg.fp_rate)(rng);
            for (int k = 0; k < n_fp; ++k) {
                const double cx = uniform(0.0, cfg.width);
                const double cy = uniform(0.0, cfg.height);
                const double h = uniform(cfg.size_min, cfg.size_max);
                const double aspect = cfg.aspect_base * uniform(0.7, 1.3);
                const double conf = std::clamp(gauss(0.35, 0.15), 0.05, 0.95);
                const int cls = static_cast<int>(uniform(0.0, static_cast<double>(cfg.n_classes)));
                Detection d;
                d.box = Box::from_center(cx, cy, aspect * h, h);
                d.score = conf;
                d.class_id = std::min(cls, cfg.n_classes - 1);
                dets.push_back(d);
            }
        }
    }
    return bundle;
}

SequenceBundle decimate(const SequenceBundle& bundle, int factor) {
    if (factor < 1) throw std::invalid_argument("simulator: decimation factor must be >= 1");
    if (factor == 1) return bundle;
    SequenceBundle out;
    out.width = bundle.width;
    out.height = bundle.height;
    out.seed = bundle.seed;
    out.name = bundle.name;
    for (int f = 1; f <= bundle.n_frames; f += factor) {
        out.truth.push_back(bundle.truth_at(f));
        out.detections.push_back(bundle.detections_at(f));
    }
    out.n_frames = static_cast<int>(out.truth.size());
    return out;
}

}  // namespace poitrack
