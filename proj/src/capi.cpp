#include "poitrack/capi.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "poitrack/errors.hpp"
#include "poitrack/io.hpp"
#include "poitrack/metrics.hpp"
#include "poitrack/pipeline.hpp"
#include "poitrack/simulator.hpp"

using namespace poitrack;

struct ptk_config {
    RunConfig cfg;
};
struct ptk_bundle {
    SequenceBundle bundle;
};
struct ptk_result {
    TrackingResult result;
    RunReport report;
};
struct ptk_report {
    MetricCounts counts;
    MetricsReport report;  // finalize(counts), kept in sync
};
struct ptk_attrs {
    AttributeReport attrs;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
ptk_status guarded(F&& f) noexcept {
    try {
        f();
        return PTK_OK;
    } catch (const ConfigError& e) {
        set_error(e.what());
        return PTK_ERR_CONFIG;
    } catch (const DataError& e) {
        set_error(e.what());
        return PTK_ERR_DATA;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return PTK_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PTK_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown failure");
        return PTK_ERR_INTERNAL;
    }
}

ptk_status arg_error(const char* msg) {
    set_error(msg);
    return PTK_ERR_ARG;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* ptk_last_error(void) { return g_last_error.c_str(); }

void ptk_string_free(char* s) { std::free(s); }

/* --- configuration ------------------------------------------------------ */

ptk_status ptk_config_create(ptk_config** out) {
    if (out == nullptr) return arg_error("ptk_config_create: out is null");
    return guarded([&] { *out = new ptk_config{RunConfig{}}; });
}

ptk_status ptk_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                           ptk_config** out) {
    if (out == nullptr) return arg_error("ptk_config_load: out is null");
    if (n_overrides > 0 && overrides == nullptr)
        return arg_error("ptk_config_load: overrides is null");
    return guarded([&] {
        std::vector<std::string> ov;
        ov.reserve(n_overrides);
        for (size_t i = 0; i < n_overrides; ++i) ov.emplace_back(overrides[i]);
        *out = new ptk_config{read_config(path == nullptr ? "" : path, ov)};
    });
}

ptk_status ptk_config_set(ptk_config* cfg, const char* assignment) {
    if (cfg == nullptr || assignment == nullptr) return arg_error("ptk_config_set: null argument");
    return guarded([&] { apply_overrides(cfg->cfg, {assignment}); });
}

ptk_status ptk_config_dump(const ptk_config* cfg, char** out_text) {
    if (cfg == nullptr || out_text == nullptr) return arg_error("ptk_config_dump: null argument");
    return guarded([&] { *out_text = dup_string(write_config(cfg->cfg)); });
}

void ptk_config_free(ptk_config* cfg) { delete cfg; }

/* --- sequences ---------------------------------------------------------- */

ptk_status ptk_bundle_generate(const ptk_config* cfg, uint64_t seed_offset, ptk_bundle** out) {
    if (cfg == nullptr || out == nullptr) return arg_error("ptk_bundle_generate: null argument");
    return guarded([&] {
        ScenarioConfig sc = cfg->cfg.simulator;
        sc.seed += seed_offset;
        *out = new ptk_bundle{generate(sc)};
    });
}

ptk_status ptk_bundle_load_mot(const char* gt_path, const char* det_path, ptk_bundle** out) {
    if (out == nullptr) return arg_error("ptk_bundle_load_mot: out is null");
    if (gt_path == nullptr && det_path == nullptr)
        return arg_error("ptk_bundle_load_mot: need at least one path");
    return guarded([&] {
        SequenceBundle b;
        int frames = 0;
        if (gt_path != nullptr) {
            for (const MotRow& r : read_mot(gt_path)) {
                if (r.frame > frames) frames = r.frame;
                if (r.frame > static_cast<int>(b.truth.size()))
                    b.truth.resize(static_cast<std::size_t>(r.frame));
                ObjectState s;
                s.id = r.id;
                s.cx = r.left + r.width / 2.0;
                s.cy = r.top + r.height / 2.0;
                s.w = r.width;
                s.h = r.height;
                s.visibility = r.visibility;
                s.class_id = r.class_id;
                b.truth[static_cast<std::size_t>(r.frame - 1)].push_back(s);
            }
        }
        if (det_path != nullptr) {
            for (const MotRow& r : read_mot(det_path)) {
                if (r.frame > frames) frames = r.frame;
                if (r.frame > static_cast<int>(b.detections.size()))
                    b.detections.resize(static_cast<std::size_t>(r.frame));
                Detection d;
                d.box = Box::from_tlwh(r.left, r.top, r.width, r.height);
                d.score = r.conf;
                d.class_id = r.class_id;
                b.detections[static_cast<std::size_t>(r.frame - 1)].push_back(d);
            }
        }
        b.n_frames = frames;
        b.truth.resize(static_cast<std::size_t>(frames));
        b.detections.resize(static_cast<std::size_t>(frames));
        *out = new ptk_bundle{std::move(b)};
    });
}

ptk_status ptk_bundle_load_poses(const char* pose_path, const char* det_path, ptk_bundle** out) {
    if (out == nullptr || pose_path == nullptr)
        return arg_error("ptk_bundle_load_poses: null argument");
    return guarded([&] {
        SequenceBundle b = read_poses(pose_path);
        if (det_path != nullptr) {
            int frames = b.n_frames;
            for (const MotRow& r : read_mot(det_path)) {
                if (r.frame > frames) frames = r.frame;
                if (r.frame > static_cast<int>(b.detections.size()))
                    b.detections.resize(static_cast<std::size_t>(r.frame));
                Detection d;
                d.box = Box::from_tlwh(r.left, r.top, r.width, r.height);
                d.score = r.conf;
                d.class_id = r.class_id;
                b.detections[static_cast<std::size_t>(r.frame - 1)].push_back(d);
            }
            b.n_frames = frames;
            b.truth.resize(static_cast<std::size_t>(frames));
            b.detections.resize(static_cast<std::size_t>(frames));
        }
        *out = new ptk_bundle{std::move(b)};
    });
}

ptk_status ptk_bundle_decimate(const ptk_bundle* in, int factor, ptk_bundle** out) {
    if (in == nullptr || out == nullptr) return arg_error("ptk_bundle_decimate: null argument");
    return guarded([&] { *out = new ptk_bundle{decimate(in->bundle, factor)}; });
}

ptk_status ptk_bundle_concat(const ptk_bundle* const* bundles, size_t n, ptk_bundle** out) {
    if (bundles == nullptr || out == nullptr) return arg_error("ptk_bundle_concat: null argument");
    return guarded([&] {
        SequenceBundle merged;
        merged.name = "concat";
        int next_id = 1;
        for (size_t i = 0; i < n; ++i) {
            if (bundles[i] == nullptr)
                throw std::invalid_argument("ptk_bundle_concat: null bundle in list");
            const SequenceBundle& b = bundles[i]->bundle;
            int min_id = 0, max_id = 0;
            bool any = false;
            for (const auto& frame : b.truth) {
                for (const ObjectState& s : frame) {
                    min_id = any ? std::min(min_id, s.id) : s.id;
                    max_id = any ? std::max(max_id, s.id) : s.id;
                    any = true;
                }
            }
            const int offset = any ? next_id - min_id : 0;
            const auto base = static_cast<std::size_t>(merged.n_frames);
            merged.n_frames += b.n_frames;
            merged.truth.resize(static_cast<std::size_t>(merged.n_frames));
            merged.detections.resize(static_cast<std::size_t>(merged.n_frames));
            for (std::size_t f = 0; f < b.truth.size(); ++f) {
                merged.truth[base + f] = b.truth[f];
                for (ObjectState& s : merged.truth[base + f]) s.id += offset;
            }
            for (std::size_t f = 0; f < b.detections.size(); ++f)
                merged.detections[base + f] = b.detections[f];
            merged.width = std::max(merged.width, b.width);
            merged.height = std::max(merged.height, b.height);
            if (any) next_id = max_id + offset + 1;
        }
        *out = new ptk_bundle{std::move(merged)};
    });
}

ptk_status ptk_bundle_write(const ptk_bundle* bundle, const char* gt_path, const char* det_path,
                            const char* pose_path) {
    if (bundle == nullptr) return arg_error("ptk_bundle_write: bundle is null");
    return guarded([&] {
        if (gt_path != nullptr) write_mot(mot_from_gt(bundle->bundle), gt_path);
        if (det_path != nullptr) write_mot(mot_from_detections(bundle->bundle), det_path);
        if (pose_path != nullptr) write_poses(bundle->bundle, pose_path);
    });
}

int ptk_bundle_frames(const ptk_bundle* bundle) {
    return bundle == nullptr ? 0 : bundle->bundle.n_frames;
}

void ptk_bundle_free(ptk_bundle* bundle) { delete bundle; }

/* --- tracking ----------------------------------------------------------- */

ptk_status ptk_track(const ptk_config* cfg, const ptk_bundle* bundle, const char* mode,
                     const char* points_path, ptk_result** out) {
    if (cfg == nullptr || bundle == nullptr || out == nullptr)
        return arg_error("ptk_track: null argument");
    return guarded([&] {
        const RunConfig& rc = cfg->cfg;
        const TrackMode m = mode == nullptr ? rc.mode : track_mode_from_string(mode);
        std::unique_ptr<PointTracker> tracker;
        if (m == TrackMode::FineNet && rc.pipeline.stride > 1) {
            if (points_path != nullptr) {
                tracker = std::make_unique<FilePointTracker>(load_point_tracks(points_path));
            } else {
                bool has_truth = false;
                for (const auto& frame : bundle->bundle.truth) {
                    if (!frame.empty()) {
                        has_truth = true;
                        break;
                    }
                }
                if (!has_truth) {
                    throw DataError(
                        "finenet mode needs either ground-truth poses (for the oracle point "
                        "tracker) or a precomputed point-trajectory file");
                }
                tracker = std::make_unique<OraclePointTracker>(bundle->bundle, rc.oracle);
            }
        }
        auto res = std::make_unique<ptk_result>();
        res->result = run_tracker(bundle->bundle, rc.pipeline, m, tracker.get(), &res->report);
        *out = res.release();
    });
}

ptk_status ptk_result_write(const ptk_result* result, const char* path) {
    if (result == nullptr || path == nullptr) return arg_error("ptk_result_write: null argument");
    return guarded([&] { write_mot(mot_from_result(result->result), path); });
}

int ptk_result_frames(const ptk_result* result) {
    return result == nullptr ? 0 : result->report.frames;
}

int ptk_result_windows(const ptk_result* result) {
    return result == nullptr ? 0 : result->report.windows;
}

int ptk_result_fallbacks(const ptk_result* result) {
    return result == nullptr ? 0 : static_cast<int>(result->report.fallback_windows.size());
}

int ptk_result_fallback_at(const ptk_result* result, int i) {
    if (result == nullptr || i < 0 ||
        i >= static_cast<int>(result->report.fallback_windows.size()))
        return -1;
    return result->report.fallback_windows[static_cast<std::size_t>(i)];
}

double ptk_result_elapsed_ms(const ptk_result* result) {
    return result == nullptr ? 0.0 : result->report.elapsed_ms;
}

void ptk_result_free(ptk_result* result) { delete result; }

/* --- evaluation --------------------------------------------------------- */

ptk_status ptk_evaluate(const ptk_bundle* gt, const ptk_result* result, ptk_report** out) {
    if (gt == nullptr || result == nullptr || out == nullptr)
        return arg_error("ptk_evaluate: null argument");
    return guarded([&] {
        const auto gtf = gt_frames(gt->bundle);
        const auto prf = result_frames(result->result, gt->bundle.n_frames);
        auto rep = std::make_unique<ptk_report>();
        rep->counts = evaluate_sequence(gtf, prf);
        rep->report = finalize(rep->counts);
        rep->report.attributes = dynamicity_report(gtf);
        *out = rep.release();
    });
}

ptk_status ptk_evaluate_files(const char* gt_path, const char* result_path, ptk_report** out) {
    if (gt_path == nullptr || out == nullptr) return arg_error("ptk_evaluate_files: null argument");
    return guarded([&] {
        const std::vector<MotRow> gt_rows = read_mot(gt_path);
        std::vector<MotRow> pred_rows;
        if (result_path != nullptr) pred_rows = read_mot(result_path);
        int frames = 0;
        for (const MotRow& r : gt_rows) frames = std::max(frames, r.frame);
        for (const MotRow& r : pred_rows) frames = std::max(frames, r.frame);
        const auto gtf = group_rows(gt_rows, frames);
        const auto prf = group_rows(pred_rows, frames);
        auto rep = std::make_unique<ptk_report>();
        rep->counts = evaluate_sequence(gtf, prf);
        rep->report = finalize(rep->counts);
        rep->report.attributes = dynamicity_report(gtf);
        *out = rep.release();
    });
}

ptk_status ptk_report_merge(const ptk_report* const* reports, size_t n, ptk_report** out) {
    if (reports == nullptr || out == nullptr) return arg_error("ptk_report_merge: null argument");
    return guarded([&] {
        auto rep = std::make_unique<ptk_report>();
        for (size_t i = 0; i < n; ++i) {
            if (reports[i] == nullptr)
                throw std::invalid_argument("ptk_report_merge: null report in list");
            rep->counts.merge(reports[i]->counts);
        }
        rep->report = finalize(rep->counts);
        *out = rep.release();
    });
}

ptk_status ptk_report_value(const ptk_report* report, const char* metric, double* out) {
    if (report == nullptr || metric == nullptr || out == nullptr)
        return arg_error("ptk_report_value: null argument");
    const MetricsReport& r = report->report;
    const std::string name = metric;
    const auto series = [&](const std::optional<AlphaSeries>& s, bool half,
                            const char* what) -> ptk_status {
        if (!s.has_value()) {
            set_error(std::string(what) + " is undefined (no ground-truth detections)");
            return PTK_ERR_DATA;
        }
        *out = half ? s->at_half : s->mean;
        return PTK_OK;
    };
    const auto scalar = [&](const std::optional<double>& v, const char* what) -> ptk_status {
        if (!v.has_value()) {
            set_error(std::string(what) + " is undefined");
            return PTK_ERR_DATA;
        }
        *out = *v;
        return PTK_OK;
    };
    const bool half = name.size() > 4 && name.compare(name.size() - 4, 4, "_0.5") == 0;
    const std::string base = half ? name.substr(0, name.size() - 4) : name;
    if (base == "OWTA") return series(r.owta, half, "OWTA");
    if (base == "DetRe") return series(r.det_re, half, "DetRe");
    if (base == "AssA") return series(r.ass_a, half, "AssA");
    if (base == "HOTA") return series(r.hota, half, "HOTA");
    if (base == "DetA") return series(r.det_a, half, "DetA");
    if (base == "LocA") return series(r.loc_a, half, "LocA");
    if (base == "AssocA") return series(r.assoc_a, half, "AssocA");
    if (base == "ClsA") return series(r.cls_a, half, "ClsA");
    if (base == "TETA") return series(r.teta, half, "TETA");
    if (!half) {
        if (name == "MOTA") return scalar(r.mota, "MOTA");
        if (name == "IDF1") return scalar(r.idf1, "IDF1");
        if (name == "TP") {
            *out = r.clear_tp;
            return PTK_OK;
        }
        if (name == "FP") {
            *out = r.clear_fp;
            return PTK_OK;
        }
        if (name == "FN") {
            *out = r.clear_fn;
            return PTK_OK;
        }
        if (name == "IDSW") {
            *out = r.idsw;
            return PTK_OK;
        }
        if (name == "IDTP") {
            *out = r.idtp;
            return PTK_OK;
        }
        if (name == "IDFP") {
            *out = r.idfp;
            return PTK_OK;
        }
        if (name == "IDFN") {
            *out = r.idfn;
            return PTK_OK;
        }
        if (name == "gtDet") {
            *out = r.gt_det;
            return PTK_OK;
        }
        if (name == "predDet") {
            *out = r.pred_det;
            return PTK_OK;
        }
    }
    return arg_error(("ptk_report_value: unknown metric '" + name + "'").c_str());
}

namespace {

std::vector<std::pair<std::string, MetricsReport>> named_reports(const char* const* names,
                                                                 const ptk_report* const* reports,
                                                                 size_t n) {
    std::vector<std::pair<std::string, MetricsReport>> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (names[i] == nullptr || reports[i] == nullptr)
            throw std::invalid_argument("reports list holds a null entry");
        out.emplace_back(names[i], reports[i]->report);
    }
    return out;
}

}  // namespace

ptk_status ptk_reports_csv(const char* const* names, const ptk_report* const* reports, size_t n,
                           char** out_text) {
    if (names == nullptr || reports == nullptr || out_text == nullptr)
        return arg_error("ptk_reports_csv: null argument");
    return guarded([&] { *out_text = dup_string(metrics_csv(named_reports(names, reports, n))); });
}

ptk_status ptk_reports_markdown(const char* const* names, const ptk_report* const* reports,
                                size_t n, char** out_text) {
    if (names == nullptr || reports == nullptr || out_text == nullptr)
        return arg_error("ptk_reports_markdown: null argument");
    return guarded(
        [&] { *out_text = dup_string(metrics_markdown(named_reports(names, reports, n))); });
}

void ptk_report_free(ptk_report* report) { delete report; }

/* --- dynamicity attributes ---------------------------------------------- */

ptk_status ptk_attrs_compute(const ptk_bundle* bundle, ptk_attrs** out) {
    if (bundle == nullptr || out == nullptr) return arg_error("ptk_attrs_compute: null argument");
    return guarded([&] { *out = new ptk_attrs{dynamicity_report(gt_frames(bundle->bundle))}; });
}

ptk_status ptk_attrs_csv(const ptk_attrs* attrs, char** out_text) {
    if (attrs == nullptr || out_text == nullptr) return arg_error("ptk_attrs_csv: null argument");
    return guarded([&] { *out_text = dup_string(attributes_csv(attrs->attrs)); });
}

ptk_status ptk_attrs_histogram(const ptk_attrs* attrs, const char* name, double* lo, double* width,
                               long long* counts, size_t cap, size_t* n_bins, double* mean,
                               double* median) {
    if (attrs == nullptr || name == nullptr) return arg_error("ptk_attrs_histogram: null argument");
    const std::string key = name;
    const Histogram* h = nullptr;
    if (key == "adjacent_iou") h = &attrs->attrs.adjacent_iou;
    if (key == "aspect_change") h = &attrs->attrs.aspect_change;
    if (key == "area_change") h = &attrs->attrs.area_change;
    if (key == "motion") h = &attrs->attrs.motion;
    if (h == nullptr)
        return arg_error(("ptk_attrs_histogram: unknown attribute '" + key + "'").c_str());
    if (lo != nullptr) *lo = h->lo;
    if (width != nullptr) *width = h->width;
    if (n_bins != nullptr) *n_bins = h->counts.size();
    if (mean != nullptr) *mean = h->mean;
    if (median != nullptr) *median = h->median;
    if (counts != nullptr) {
        const size_t n = std::min(cap, h->counts.size());
        for (size_t i = 0; i < n; ++i) counts[i] = h->counts[i];
    }
    return PTK_OK;
}

void ptk_attrs_free(ptk_attrs* attrs) { delete attrs; }

} /* extern "C" */
