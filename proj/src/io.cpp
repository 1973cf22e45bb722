#include "poitrack/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "poitrack/csv.hpp"
#include "poitrack/format.hpp"

namespace poitrack {

std::vector<MotRow> read_mot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("io: cannot open " + path);
    std::vector<MotRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> f = csv::split(line);
        if (f.size() != 9) csv::fail(path, lineno, "expected 9 fields, got " + std::to_string(f.size()));
        MotRow r;
        if (!csv::to_int(f[0], r.frame)) csv::fail(path, lineno, "bad frame '" + f[0] + "'");
        if (!csv::to_int(f[1], r.id)) csv::fail(path, lineno, "bad id '" + f[1] + "'");
        if (!csv::to_double(f[2], r.left)) csv::fail(path, lineno, "bad bb_left '" + f[2] + "'");
        if (!csv::to_double(f[3], r.top)) csv::fail(path, lineno, "bad bb_top '" + f[3] + "'");
        if (!csv::to_double(f[4], r.width)) csv::fail(path, lineno, "bad bb_width '" + f[4] + "'");
        if (!csv::to_double(f[5], r.height)) csv::fail(path, lineno, "bad bb_height '" + f[5] + "'");
        if (!csv::to_double(f[6], r.conf)) csv::fail(path, lineno, "bad conf '" + f[6] + "'");
        if (!csv::to_int(f[7], r.class_id)) csv::fail(path, lineno, "bad class '" + f[7] + "'");
        if (!csv::to_double(f[8], r.visibility)) csv::fail(path, lineno, "bad visibility '" + f[8] + "'");
        if (r.frame < 1) csv::fail(path, lineno, "frame must be >= 1");
        if (r.visibility < 0.0 || r.visibility > 1.0)
            csv::fail(path, lineno, "visibility must be in [0, 1]");
        if (r.id != -1 && (r.width <= 0.0 || r.height <= 0.0))
            csv::fail(path, lineno, "track rows need positive box size");
        for (double v : {r.left, r.top, r.width, r.height, r.conf})
            if (!std::isfinite(v)) csv::fail(path, lineno, "non-finite value");
        rows.push_back(r);
    }
    return rows;
}

void write_mot(std::vector<MotRow> rows, const std::string& path) {
    std::stable_sort(rows.begin(), rows.end(), [](const MotRow& a, const MotRow& b) {
        return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
    });
    std::string buf;
    for (const MotRow& r : rows) {
        buf += std::to_string(r.frame);
        buf += ',';
        buf += std::to_string(r.id);
        buf += ',';
        append_double(buf, r.left);
        buf += ',';
        append_double(buf, r.top);
        buf += ',';
        append_double(buf, r.width);
        buf += ',';
        append_double(buf, r.height);
        buf += ',';
        append_double(buf, r.conf);
        buf += ',';
        buf += std::to_string(r.class_id);
        buf += ',';
        append_double(buf, r.visibility);
        buf += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("io: cannot write " + path);
    out << buf;
}

std::vector<MotRow> mot_from_gt(const SequenceBundle& bundle) {
    std::vector<MotRow> rows;
    for (int f = 1; f <= bundle.n_frames; ++f) {
        for (const ObjectState& s : bundle.truth_at(f)) {
            MotRow r;
            r.frame = f;
            r.id = s.id;
            r.left = s.cx - s.w / 2.0;
            r.top = s.cy - s.h / 2.0;
            r.width = s.w;
            r.height = s.h;
            r.conf = 1.0;
            r.class_id = s.class_id;
            r.visibility = s.visibility;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<MotRow> mot_from_detections(const SequenceBundle& bundle) {
    std::vector<MotRow> rows;
    for (int f = 1; f <= bundle.n_frames; ++f) {
        for (const Detection& d : bundle.detections_at(f)) {
            MotRow r;
            r.frame = f;
            r.id = -1;
            r.left = d.box.x1;
            r.top = d.box.y1;
            r.width = d.box.width();
            r.height = d.box.height();
            r.conf = d.score;
            r.class_id = d.class_id;
            r.visibility = 0.0;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<MotRow> mot_from_result(const TrackingResult& result) {
    std::vector<MotRow> rows;
    for (const FrameOutput& fo : result.frames) {
        for (const TrackedBox& t : fo.rows) {
            MotRow r;
            r.frame = fo.frame;
            r.id = t.id;
            r.left = t.box.x1;
            r.top = t.box.y1;
            r.width = t.box.width();
            r.height = t.box.height();
            r.conf = t.score;
            r.class_id = t.class_id;
            r.visibility = 0.0;
            rows.push_back(r);
        }
    }
    return rows;
}

namespace {

int max_frame(const std::vector<MotRow>& rows, int n_frames) {
    int last = n_frames;
    for (const MotRow& r : rows) last = std::max(last, r.frame);
    return last;
}

}  // namespace

std::vector<std::vector<TrackedBox>> group_rows(const std::vector<MotRow>& rows, int n_frames) {
    std::vector<std::vector<TrackedBox>> out(static_cast<std::size_t>(max_frame(rows, n_frames)));
    for (const MotRow& r : rows) {
        out[static_cast<std::size_t>(r.frame - 1)].push_back(
            TrackedBox{r.id, Box::from_tlwh(r.left, r.top, r.width, r.height), r.conf, r.class_id});
    }
    return out;
}

std::vector<std::vector<Detection>> detections_from_rows(const std::vector<MotRow>& rows,
                                                         int n_frames) {
    std::vector<std::vector<Detection>> out(static_cast<std::size_t>(max_frame(rows, n_frames)));
    for (const MotRow& r : rows) {
        Detection d;
        d.box = Box::from_tlwh(r.left, r.top, r.width, r.height);
        d.score = r.conf;
        d.class_id = r.class_id;
        out[static_cast<std::size_t>(r.frame - 1)].push_back(d);
    }
    return out;
}

void write_poses(const SequenceBundle& bundle, const std::string& path) {
    std::string buf;
    for (int f = 1; f <= bundle.n_frames; ++f) {
        for (const ObjectState& s : bundle.truth_at(f)) {
            buf += std::to_string(f);
            buf += ',';
            buf += std::to_string(s.id);
            buf += ',';
            append_double(buf, s.cx);
            buf += ',';
            append_double(buf, s.cy);
            buf += ',';
            append_double(buf, s.w);
            buf += ',';
            append_double(buf, s.h);
            buf += ',';
            append_double(buf, s.visibility);
            buf += '\n';
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("io: cannot write " + path);
    out << buf;
}

SequenceBundle read_poses(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("io: cannot open " + path);
    SequenceBundle bundle;
    std::string line;
    int lineno = 0;
    std::set<std::pair<int, int>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> f = csv::split(line);
        if (f.size() != 7) csv::fail(path, lineno, "expected 7 fields, got " + std::to_string(f.size()));
        int frame, id;
        double cx, cy, w, h, vis;
        if (!csv::to_int(f[0], frame)) csv::fail(path, lineno, "bad frame '" + f[0] + "'");
        if (!csv::to_int(f[1], id)) csv::fail(path, lineno, "bad track_id '" + f[1] + "'");
        if (!csv::to_double(f[2], cx)) csv::fail(path, lineno, "bad cx '" + f[2] + "'");
        if (!csv::to_double(f[3], cy)) csv::fail(path, lineno, "bad cy '" + f[3] + "'");
        if (!csv::to_double(f[4], w)) csv::fail(path, lineno, "bad w '" + f[4] + "'");
        if (!csv::to_double(f[5], h)) csv::fail(path, lineno, "bad h '" + f[5] + "'");
        if (!csv::to_double(f[6], vis)) csv::fail(path, lineno, "bad visibility '" + f[6] + "'");
        if (frame < 1) csv::fail(path, lineno, "frame must be >= 1");
        if (w <= 0.0 || h <= 0.0) csv::fail(path, lineno, "pose needs positive size");
        if (vis < 0.0 || vis > 1.0) csv::fail(path, lineno, "visibility must be in [0, 1]");
        if (!seen.insert({frame, id}).second)
            csv::fail(path, lineno, "duplicate pose for track " + std::to_string(id) + " at frame " +
                                        std::to_string(frame));
        if (frame > static_cast<int>(bundle.truth.size())) bundle.truth.resize(static_cast<std::size_t>(frame));
        ObjectState s;
        s.id = id;
        s.cx = cx;
        s.cy = cy;
        s.w = w;
        s.h = h;
        s.visibility = vis;
        bundle.truth[static_cast<std::size_t>(frame - 1)].push_back(s);
    }
    bundle.n_frames = static_cast<int>(bundle.truth.size());
    bundle.detections.resize(bundle.truth.size());
    return bundle;
}

// ---------------------------------------------------------------------------
// layered configuration

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw ConfigError("config: " + key + ": " + why);
}

int cfg_int(const std::string& key, const std::string& v, int lo, int hi) {
    int out;
    if (!csv::to_int(v, out)) bad_key(key, "expected integer, got '" + v + "'");
    if (out < lo || out > hi)
        bad_key(key, "value " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return out;
}

double cfg_double(const std::string& key, const std::string& v, double lo, double hi) {
    double out;
    if (!csv::to_double(v, out)) bad_key(key, "expected number, got '" + v + "'");
    if (!(out >= lo && out <= hi))
        bad_key(key, "value " + v + " outside [" + format_double(lo) + ", " + format_double(hi) + "]");
    return out;
}

bool cfg_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_key(key, "expected boolean, got '" + v + "'");
}

std::uint64_t cfg_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const char* b = v.data();
    const char* e = b + v.size();
    const auto res = std::from_chars(b, e, out);
    if (res.ec != std::errc() || res.ptr != e) bad_key(key, "expected unsigned integer, got '" + v + "'");
    return out;
}

using Apply = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Apply>& schema() {
    static const std::map<std::string, Apply> table = {
        {"pipeline.mode",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             try {
                 c.mode = track_mode_from_string(v);
             } catch (const std::invalid_argument&) {
                 bad_key(k, "expected finenet, coarse-byte or coarse-iou, got '" + v + "'");
             }
         }},
        {"pipeline.stride",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.stride = cfg_int(k, v, 1, 1000000);
         }},
        {"pipeline.poi_on_unmatched",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.poi_on_unmatched_detections = cfg_bool(k, v);
         }},
        {"pipeline.oracle_sigma",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.oracle.sigma = cfg_double(k, v, 0.0, 1e6);
         }},
        {"pipeline.oracle_dropout",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.oracle.dropout = cfg_double(k, v, 0.0, 1.0);
         }},
        {"pipeline.oracle_min_visibility",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.oracle.min_visibility = cfg_double(k, v, 0.0, 1.0);
         }},
        {"pipeline.oracle_seed",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.oracle.seed = cfg_u64(k, v); }},

        {"assoc.det_high",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.assoc.det_high = cfg_double(k, v, 0.0, 1.0);
         }},
        {"assoc.det_low",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.assoc.det_low = cfg_double(k, v, 0.0, 1.0);
         }},
        {"assoc.new_track_score",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.assoc.new_track_score = cfg_double(k, v, 0.0, 1.0);
         }},
        {"assoc.match_threshold",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.assoc.match_threshold = cfg_double(k, v, 0.0, 1.0);
         }},
        {"assoc.fusion_lambda",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.assoc.fusion_lambda = cfg_double(k, v, 0.0, 1.0);
         }},
        {"assoc.fusion_mode",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "lambda") {
                 c.pipeline.assoc.fusion_mode = FusionMode::Lambda;
             } else if (v == "max") {
                 c.pipeline.assoc.fusion_mode = FusionMode::Max;
             } else {
                 bad_key(k, "expected lambda or max, got '" + v + "'");
             }
         }},
        {"assoc.max_lost",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.assoc.max_lost = cfg_int(k, v, 0, 1000000);
         }},

        {"sampler.rows",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.sampler.rows = cfg_int(k, v, 1, 1000);
         }},
        {"sampler.cols",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.sampler.cols = cfg_int(k, v, 1, 1000);
         }},
        {"sampler.count",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const SamplerConfig derived = SamplerConfig::from_count(cfg_int(k, v, 1, 1000000));
             c.pipeline.sampler.rows = derived.rows;
             c.pipeline.sampler.cols = derived.cols;
         }},
        {"sampler.mode",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "grid") {
                 c.pipeline.sampler.mode = PoiSampleMode::Grid;
             } else if (v == "uniform") {
                 c.pipeline.sampler.mode = PoiSampleMode::UniformRandom;
             } else {
                 bad_key(k, "expected grid or uniform, got '" + v + "'");
             }
         }},
        {"sampler.seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.pipeline.sampler.seed = cfg_u64(k, v);
         }},

        {"simulator.objects",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.n_objects = cfg_int(k, v, 0, 10000);
         }},
        {"simulator.frames",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.frames = cfg_int(k, v, 1, 1000000);
         }},
        {"simulator.width",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.width = cfg_double(k, v, 100.0, 1e6);
         }},
        {"simulator.height",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.height = cfg_double(k, v, 100.0, 1e6);
         }},
        {"simulator.speed_min",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.speed_min = cfg_double(k, v, 0.0, 1e6);
         }},
        {"simulator.speed_max",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.speed_max = cfg_double(k, v, 0.0, 1e6);
         }},
        {"simulator.turn_max",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.turn_max = cfg_double(k, v, 0.0, 3.2);
         }},
        {"simulator.speed_jitter",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.speed_jitter = cfg_double(k, v, 0.0, 1e6);
         }},
        {"simulator.size_min",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.size_min = cfg_double(k, v, 1.0, 1e6);
         }},
        {"simulator.size_max",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.size_max = cfg_double(k, v, 1.0, 1e6);
         }},
        {"simulator.aspect_base",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.aspect_base = cfg_double(k, v, 0.05, 20.0);
         }},
        {"simulator.deform_amplitude",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.deform_amplitude = cfg_double(k, v, 0.0, 0.9);
         }},
        {"simulator.deform_freq",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.deform_freq = cfg_double(k, v, 0.0, 10.0);
         }},
        {"simulator.crossing_prob",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.crossing_prob = cfg_double(k, v, 0.0, 1.0);
         }},
        {"simulator.occluders",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.n_occluders = cfg_int(k, v, 0, 1000);
         }},
        {"simulator.occluder_size",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.occluder_size = cfg_double(k, v, 1.0, 1e6);
         }},
        {"simulator.center_jitter",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.center_jitter = cfg_double(k, v, 0.0, 1e6);
         }},
        {"simulator.size_jitter",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.size_jitter = cfg_double(k, v, 0.0, 10.0);
         }},
        {"simulator.miss_prob",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.miss_prob = cfg_double(k, v, 0.0, 1.0);
         }},
        {"simulator.occlusion_miss_boost",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.occlusion_miss_boost = cfg_double(k, v, 0.0, 1.0);
         }},
        {"simulator.fp_rate",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.fp_rate = cfg_double(k, v, 0.0, 1000.0);
         }},
        {"simulator.conf_mean",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.conf_mean = cfg_double(k, v, 0.0, 1.0);
         }},
        {"simulator.conf_std",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.conf_std = cfg_double(k, v, 0.0, 1.0);
         }},
        {"simulator.classes",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.n_classes = cfg_int(k, v, 1, 1000);
         }},
        {"simulator.layout",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "scatter") {
                 c.simulator.layout = Layout::Scatter;
             } else if (v == "lanes") {
                 c.simulator.layout = Layout::Lanes;
             } else {
                 bad_key(k, "expected scatter or lanes, got '" + v + "'");
             }
         }},
        {"simulator.sequences",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.sequences = cfg_int(k, v, 1, 10000);
         }},
        {"simulator.seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.simulator.seed = cfg_u64(k, v);
         }},
        // [metrics] is reserved; it currently has no tunable keys.
    };
    return table;
}

void apply_entry(RunConfig& cfg, const std::string& section, const std::string& key,
                 const std::string& value, const std::string& where) {
    const std::string full = section + "." + key;
    const auto it = schema().find(full);
    if (it == schema().end()) {
        throw ConfigError("config: unknown key '" + full + "'" + where);
    }
    it->second(cfg, full, value);
}

void cross_check(const RunConfig& cfg) {
    if (cfg.simulator.speed_max < cfg.simulator.speed_min)
        throw ConfigError("config: simulator.speed_max must be >= simulator.speed_min");
    if (cfg.simulator.size_max < cfg.simulator.size_min)
        throw ConfigError("config: simulator.size_max must be >= simulator.size_min");
    if (cfg.pipeline.assoc.det_low > cfg.pipeline.assoc.det_high)
        throw ConfigError("config: assoc.det_low must be <= assoc.det_high");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

RunConfig read_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig cfg;

    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string where = " (" + path + ":" + std::to_string(lineno) + ")";
            std::string s = trim(line);
            if (!s.empty() && s.back() == '\r') s.pop_back();
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ConfigError("config: malformed section header" + where);
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("config: expected key = value" + where);
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (section.empty()) throw ConfigError("config: key '" + key + "' before any section" + where);
            if (key.empty()) throw ConfigError("config: empty key" + where);
            apply_entry(cfg, section, key, value, where);
        }
    }

    apply_overrides(cfg, overrides);
    return cfg;
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: override '" + ov + "' must look like section.key=value");
        const std::string full = trim(ov.substr(0, eq));
        const std::string value = trim(ov.substr(eq + 1));
        const auto dot = full.find('.');
        if (dot == std::string::npos)
            throw ConfigError("config: override '" + ov + "' must look like section.key=value");
        apply_entry(cfg, full.substr(0, dot), full.substr(dot + 1), value, " (command line)");
    }
    cross_check(cfg);
}

std::string write_config(const RunConfig& cfg) {
    std::string out;
    auto kv = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    out += "[pipeline]\n";
    kv("mode", to_string(cfg.mode));
    kv("stride", std::to_string(cfg.pipeline.stride));
    kv("poi_on_unmatched", cfg.pipeline.poi_on_unmatched_detections ? "true" : "false");
    kv("oracle_sigma", format_double(cfg.oracle.sigma));
    kv("oracle_dropout", format_double(cfg.oracle.dropout));
    kv("oracle_min_visibility", format_double(cfg.oracle.min_visibility));
    kv("oracle_seed", std::to_string(cfg.oracle.seed));
    out += "\n[assoc]\n";
    kv("det_high", format_double(cfg.pipeline.assoc.det_high));
    kv("det_low", format_double(cfg.pipeline.assoc.det_low));
    kv("new_track_score", format_double(cfg.pipeline.assoc.new_track_score));
    kv("match_threshold", format_double(cfg.pipeline.assoc.match_threshold));
    kv("fusion_lambda", format_double(cfg.pipeline.assoc.fusion_lambda));
    kv("fusion_mode", cfg.pipeline.assoc.fusion_mode == FusionMode::Lambda ? "lambda" : "max");
    kv("max_lost", std::to_string(cfg.pipeline.assoc.max_lost));
    out += "\n[sampler]\n";
    kv("rows", std::to_string(cfg.pipeline.sampler.rows));
    kv("cols", std::to_string(cfg.pipeline.sampler.cols));
    kv("mode", cfg.pipeline.sampler.mode == PoiSampleMode::Grid ? "grid" : "uniform");
    kv("seed", std::to_string(cfg.pipeline.sampler.seed));
    out += "\n[simulator]\n";
    kv("objects", std::to_string(cfg.simulator.n_objects));
    kv("frames", std::to_string(cfg.simulator.frames));
    kv("width", format_double(cfg.simulator.width));
    kv("height", format_double(cfg.simulator.height));
    kv("speed_min", format_double(cfg.simulator.speed_min));
    kv("speed_max", format_double(cfg.simulator.speed_max));
    kv("turn_max", format_double(cfg.simulator.turn_max));
    kv("speed_jitter", format_double(cfg.simulator.speed_jitter));
    kv("size_min", format_double(cfg.simulator.size_min));
    kv("size_max", format_double(cfg.simulator.size_max));
    kv("aspect_base", format_double(cfg.simulator.aspect_base));
    kv("deform_amplitude", format_double(cfg.simulator.deform_amplitude));
    kv("deform_freq", format_double(cfg.simulator.deform_freq));
    kv("crossing_prob", format_double(cfg.simulator.crossing_prob));
    kv("occluders", std::to_string(cfg.simulator.n_occluders));
    kv("occluder_size", format_double(cfg.simulator.occluder_size));
    kv("center_jitter", format_double(cfg.simulator.center_jitter));
    kv("size_jitter", format_double(cfg.simulator.size_jitter));
    kv("miss_prob", format_double(cfg.simulator.miss_prob));
    kv("occlusion_miss_boost", format_double(cfg.simulator.occlusion_miss_boost));
    kv("fp_rate", format_double(cfg.simulator.fp_rate));
    kv("conf_mean", format_double(cfg.simulator.conf_mean));
    kv("conf_std", format_double(cfg.simulator.conf_std));
    kv("classes", std::to_string(cfg.simulator.n_classes));
    kv("layout", cfg.simulator.layout == Layout::Scatter ? "scatter" : "lanes");
    kv("sequences", std::to_string(cfg.simulator.sequences));
    kv("seed", std::to_string(cfg.simulator.seed));
    out += "\n[metrics]\n";
    return out;
}

}  // namespace poitrack
