#include "poitrack/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "poitrack/assoc.hpp"
#include "poitrack/format.hpp"

namespace poitrack {

namespace {

// Guard against boxes sitting exactly on a threshold; both the evaluator
// and its enumeration oracle use this same machine-epsilon slack.
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct FrameData {
    std::vector<int> g, p;        // dense ids
    std::vector<int> gc, pc;      // class labels
    Eigen::MatrixXd sim;          // IOU, gt x pred
};

AlphaSeries make_series(const std::array<double, kNumAlphas>& values) {
    AlphaSeries s;
    s.values = values;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / kNumAlphas;
    s.at_half = values[9];  // alphas[9] == 0.5
    return s;
}

Histogram make_hist(std::vector<double> values, double lo, double width, int n_bins,
                    bool overflow) {
    Histogram h;
    h.lo = lo;
    h.width = width;
    h.overflow = overflow;
    h.counts.assign(static_cast<std::size_t>(n_bins) + (overflow ? 1 : 0), 0);
    h.total = static_cast<long long>(values.size());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        int idx = static_cast<int>(std::floor((v - lo) / width));
        if (idx < 0) idx = 0;
        if (idx >= n_bins) idx = overflow ? n_bins : n_bins - 1;
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    if (!values.empty()) {
        h.mean = sum / static_cast<double>(values.size());
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        h.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }
    return h;
}

}  // namespace

const std::array<double, kNumAlphas>& metric_alphas() {
    static const std::array<double, kNumAlphas> alphas = [] {
        std::array<double, kNumAlphas> a{};
        for (int i = 0; i < kNumAlphas; ++i) a[static_cast<std::size_t>(i)] = 0.05 * (i + 1);
        return a;
    }();
    return alphas;
}

void MetricCounts::merge(const MetricCounts& other) {
    for (int a = 0; a < kNumAlphas; ++a) {
        tp[static_cast<std::size_t>(a)] += other.tp[static_cast<std::size_t>(a)];
        fp[static_cast<std::size_t>(a)] += other.fp[static_cast<std::size_t>(a)];
        fn[static_cast<std::size_t>(a)] += other.fn[static_cast<std::size_t>(a)];
        ass_sum[static_cast<std::size_t>(a)] += other.ass_sum[static_cast<std::size_t>(a)];
        tpc[static_cast<std::size_t>(a)] += other.tpc[static_cast<std::size_t>(a)];
        fpc[static_cast<std::size_t>(a)] += other.fpc[static_cast<std::size_t>(a)];
        fnc[static_cast<std::size_t>(a)] += other.fnc[static_cast<std::size_t>(a)];
    }
    clear_tp += other.clear_tp;
    clear_fp += other.clear_fp;
    clear_fn += other.clear_fn;
    idsw += other.idsw;
    idtp += other.idtp;
    gt_det += other.gt_det;
    pred_det += other.pred_det;
}

FrameMatch match_frames(const std::vector<TrackedBox>& gt, const std::vector<TrackedBox>& pred,
                        double alpha) {
    const int ng = static_cast<int>(gt.size());
    const int np = static_cast<int>(pred.size());
    Eigen::MatrixXd sim(ng, np);
    Eigen::MatrixXd masked(ng, np);
    for (int i = 0; i < ng; ++i) {
        for (int j = 0; j < np; ++j) {
            const double s = iou(gt[static_cast<std::size_t>(i)].box, pred[static_cast<std::size_t>(j)].box);
            sim(i, j) = s;
            masked(i, j) = s >= alpha - kEps ? s : 0.0;
        }
    }
    FrameMatch out;
    const AssignmentResult res = hungarian(masked, 0.0);
    for (const auto& [i, j] : res.matches) {
        if (sim(i, j) >= alpha - kEps) out.pairs.emplace_back(i, j);
    }
    out.tp = static_cast<int>(out.pairs.size());
    out.fp = np - out.tp;
    out.fn = ng - out.tp;
    return out;
}

MetricCounts evaluate_sequence(const std::vector<std::vector<TrackedBox>>& gt,
                               const std::vector<std::vector<TrackedBox>>& pred) {
    if (gt.size() != pred.size())
        throw std::invalid_argument("metrics: gt and pred must cover the same frames");
    const int n_frames = static_cast<int>(gt.size());
    const auto& alphas = metric_alphas();
    MetricCounts counts;

    std::map<int, int> gmap, pmap;
    std::vector<FrameData> frames(static_cast<std::size_t>(n_frames));
    for (int t = 0; t < n_frames; ++t) {
        FrameData& fd = frames[static_cast<std::size_t>(t)];
        for (const TrackedBox& row : gt[static_cast<std::size_t>(t)]) {
            auto [it, fresh] = gmap.try_emplace(row.id, static_cast<int>(gmap.size()));
            (void)fresh;
            fd.g.push_back(it->second);
            fd.gc.push_back(row.class_id);
        }
        for (const TrackedBox& row : pred[static_cast<std::size_t>(t)]) {
            auto [it, fresh] = pmap.try_emplace(row.id, static_cast<int>(pmap.size()));
            (void)fresh;
            fd.p.push_back(it->second);
            fd.pc.push_back(row.class_id);
        }
        fd.sim.resize(static_cast<int>(fd.g.size()), static_cast<int>(fd.p.size()));
        for (int i = 0; i < fd.sim.rows(); ++i) {
            for (int j = 0; j < fd.sim.cols(); ++j) {
                fd.sim(i, j) = iou(gt[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)].box,
                                   pred[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)].box);
            }
        }
        counts.gt_det += static_cast<double>(fd.g.size());
        counts.pred_det += static_cast<double>(fd.p.size());
    }
    const int n_g = static_cast<int>(gmap.size());
    const int n_p = static_cast<int>(pmap.size());

    // --- global alignment: how much each (gt id, pred id) pair overlaps
    // across the whole sequence, normalized per frame so crowded frames do
    // not dominate.
    Eigen::MatrixXd potential = Eigen::MatrixXd::Zero(n_g, n_p);
    Eigen::VectorXd g_count = Eigen::VectorXd::Zero(n_g);
    Eigen::VectorXd p_count = Eigen::VectorXd::Zero(n_p);
    for (const FrameData& fd : frames) {
        const Eigen::VectorXd row_sum = fd.sim.rowwise().sum();
        const Eigen::VectorXd col_sum = fd.sim.colwise().sum();
        for (int i = 0; i < fd.sim.rows(); ++i) {
            for (int j = 0; j < fd.sim.cols(); ++j) {
                const double denom = row_sum(i) + col_sum(j) - fd.sim(i, j);
                if (denom > kEps) {
                    potential(fd.g[static_cast<std::size_t>(i)], fd.p[static_cast<std::size_t>(j)]) +=
                        fd.sim(i, j) / denom;
                }
            }
        }
        for (int i : fd.g) g_count(i) += 1.0;
        for (int j : fd.p) p_count(j) += 1.0;
    }
    Eigen::MatrixXd align = Eigen::MatrixXd::Zero(n_g, n_p);
    for (int a = 0; a < n_g; ++a) {
        for (int b = 0; b < n_p; ++b) {
            const double denom = g_count(a) + p_count(b) - potential(a, b);
            if (denom > kEps) align(a, b) = potential(a, b) / denom;
        }
    }

    // --- one matching per frame on alignment-weighted overlap, thresholded
    // per alpha afterwards.
    std::vector<Eigen::MatrixXd> pair_matches(
        kNumAlphas, Eigen::MatrixXd::Zero(std::max(n_g, 1), std::max(n_p, 1)));
    for (const FrameData& fd : frames) {
        Eigen::MatrixXd score(fd.sim.rows(), fd.sim.cols());
        for (int i = 0; i < score.rows(); ++i) {
            for (int j = 0; j < score.cols(); ++j) {
                score(i, j) = align(fd.g[static_cast<std::size_t>(i)],
                                    fd.p[static_cast<std::size_t>(j)]) *
                              fd.sim(i, j);
            }
        }
        const AssignmentResult res = hungarian(score, 0.0);
        for (int a = 0; a < kNumAlphas; ++a) {
            int matched = 0;
            for (const auto& [i, j] : res.matches) {
                if (fd.sim(i, j) < alphas[static_cast<std::size_t>(a)] - kEps) continue;
                ++matched;
                pair_matches[static_cast<std::size_t>(a)](fd.g[static_cast<std::size_t>(i)],
                                                          fd.p[static_cast<std::size_t>(j)]) += 1.0;
                if (fd.gc[static_cast<std::size_t>(i)] == fd.pc[static_cast<std::size_t>(j)]) {
                    counts.tpc[static_cast<std::size_t>(a)] += 1.0;
                } else {
                    counts.fpc[static_cast<std::size_t>(a)] += 1.0;
                    counts.fnc[static_cast<std::size_t>(a)] += 1.0;
                }
            }
            counts.tp[static_cast<std::size_t>(a)] += matched;
            counts.fn[static_cast<std::size_t>(a)] += static_cast<double>(fd.g.size()) - matched;
            counts.fp[static_cast<std::size_t>(a)] += static_cast<double>(fd.p.size()) - matched;
        }
    }
    for (int a = 0; a < kNumAlphas; ++a) {
        for (int i = 0; i < n_g; ++i) {
            for (int j = 0; j < n_p; ++j) {
                const double m = pair_matches[static_cast<std::size_t>(a)](i, j);
                if (m <= 0.0) continue;
                counts.ass_sum[static_cast<std::size_t>(a)] +=
                    m * (m / std::max(1.0, g_count(i) + p_count(j) - m));
            }
        }
    }

    // --- CLEAR pass at overlap 0.5: continuity bonus for keeping last
    // frame's pairing, switches counted against the last id ever matched.
    std::vector<int> prev_id(static_cast<std::size_t>(n_g), -1);
    std::vector<int> prev_ts_id(static_cast<std::size_t>(n_g), -1);
    for (const FrameData& fd : frames) {
        Eigen::MatrixXd score(fd.sim.rows(), fd.sim.cols());
        for (int i = 0; i < score.rows(); ++i) {
            for (int j = 0; j < score.cols(); ++j) {
                if (fd.sim(i, j) < 0.5 - kEps) {
                    score(i, j) = 0.0;
                    continue;
                }
                const bool carried =
                    prev_ts_id[static_cast<std::size_t>(fd.g[static_cast<std::size_t>(i)])] ==
                    fd.p[static_cast<std::size_t>(j)];
                score(i, j) = fd.sim(i, j) + (carried ? 1000.0 : 0.0);
            }
        }
        const AssignmentResult res = hungarian(score, 0.0);
        std::fill(prev_ts_id.begin(), prev_ts_id.end(), -1);
        int matched = 0;
        for (const auto& [i, j] : res.matches) {
            if (score(i, j) <= kEps) continue;
            ++matched;
            const int gi = fd.g[static_cast<std::size_t>(i)];
            const int pj = fd.p[static_cast<std::size_t>(j)];
            if (prev_id[static_cast<std::size_t>(gi)] >= 0 &&
                prev_id[static_cast<std::size_t>(gi)] != pj) {
                counts.idsw += 1.0;
            }
            prev_id[static_cast<std::size_t>(gi)] = pj;
            prev_ts_id[static_cast<std::size_t>(gi)] = pj;
        }
        counts.clear_tp += matched;
        counts.clear_fn += static_cast<double>(fd.g.size()) - matched;
        counts.clear_fp += static_cast<double>(fd.p.size()) - matched;
    }

    // --- identity pass: optimal one-to-one id bookkeeping on global
    // per-pair overlap-frame counts.
    if (n_g > 0 && n_p > 0) {
        Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(n_g, n_p);
        for (const FrameData& fd : frames) {
            for (int i = 0; i < fd.sim.rows(); ++i) {
                for (int j = 0; j < fd.sim.cols(); ++j) {
                    if (fd.sim(i, j) >= 0.5 - kEps) {
                        overlap(fd.g[static_cast<std::size_t>(i)],
                                fd.p[static_cast<std::size_t>(j)]) += 1.0;
                    }
                }
            }
        }
        const AssignmentResult res = hungarian(overlap, 0.0);
        for (const auto& [i, j] : res.matches) counts.idtp += overlap(i, j);
    }
    return counts;
}

MetricsReport finalize(const MetricCounts& c) {
    MetricsReport r;
    r.clear_tp = c.clear_tp;
    r.clear_fp = c.clear_fp;
    r.clear_fn = c.clear_fn;
    r.idsw = c.idsw;
    r.idtp = c.idtp;
    r.idfp = c.pred_det - c.idtp;
    r.idfn = c.gt_det - c.idtp;
    r.gt_det = c.gt_det;
    r.pred_det = c.pred_det;

    if (c.gt_det > 0.0) {
        std::array<double, kNumAlphas> det_re{}, det_a{}, ass_a{}, owta{}, hota{}, cls_a{}, teta{};
        for (int a = 0; a < kNumAlphas; ++a) {
            const std::size_t i = static_cast<std::size_t>(a);
            det_re[i] = c.tp[i] / std::max(1.0, c.tp[i] + c.fn[i]);
            det_a[i] = c.tp[i] / std::max(1.0, c.tp[i] + c.fn[i] + c.fp[i]);
            ass_a[i] = c.ass_sum[i] / std::max(1.0, c.tp[i]);
            owta[i] = std::sqrt(det_re[i] * ass_a[i]);
            hota[i] = std::sqrt(det_a[i] * ass_a[i]);
            cls_a[i] = c.tpc[i] / std::max(1.0, c.tpc[i] + c.fpc[i] + c.fnc[i]);
            teta[i] = (det_a[i] + ass_a[i] + cls_a[i]) / 3.0;
        }
        r.det_re = make_series(det_re);
        r.det_a = make_series(det_a);
        r.ass_a = make_series(ass_a);
        r.owta = make_series(owta);
        r.hota = make_series(hota);
        r.cls_a = make_series(cls_a);
        r.teta = make_series(teta);
        r.loc_a = r.det_a;    // localization term: class-agnostic TP/(TP+FP+FN)
        r.assoc_a = r.ass_a;  // association term, same tallies as AssA
        r.mota = 1.0 - (c.clear_fn + c.clear_fp + c.idsw) / c.gt_det;
    }
    if (c.gt_det > 0.0 || c.pred_det > 0.0) {
        r.idf1 = 2.0 * c.idtp / (c.gt_det + c.pred_det);
    }
    return r;
}

AttributeReport dynamicity_report(const std::vector<std::vector<TrackedBox>>& gt) {
    std::map<int, std::map<int, Box>> tracks;
    for (std::size_t t = 0; t < gt.size(); ++t) {
        for (const TrackedBox& row : gt[t]) {
            tracks[row.id][static_cast<int>(t)] = row.box;
        }
    }
    std::vector<double> ious, arcs, acs, oms;
    for (const auto& [id, frames] : tracks) {
        (void)id;
        for (const auto& [frame, box] : frames) {
            const auto next = frames.find(frame + 1);
            if (next == frames.end()) continue;  // gap: no adjacent pair
            const AttributePair ap = attribute_pair(box, next->second);
            ious.push_back(ap.adjacent_iou);
            oms.push_back(ap.object_motion);
            if (ap.arc.has_value()) arcs.push_back(*ap.arc);
            if (ap.area_change.has_value()) acs.push_back(*ap.area_change);
        }
    }
    AttributeReport report;
    report.adjacent_iou = make_hist(std::move(ious), 0.0, 0.1, 10, false);
    report.aspect_change = make_hist(std::move(arcs), 0.0, 0.2, 15, true);
    report.area_change = make_hist(std::move(acs), 0.0, 0.2, 15, true);
    report.motion = make_hist(std::move(oms), 0.0, 20.0, 15, true);
    return report;
}

std::vector<std::vector<TrackedBox>> gt_frames(const SequenceBundle& bundle) {
    std::vector<std::vector<TrackedBox>> out(static_cast<std::size_t>(bundle.n_frames));
    for (int f = 1; f <= bundle.n_frames; ++f) {
        for (const ObjectState& s : bundle.truth_at(f)) {
            out[static_cast<std::size_t>(f - 1)].push_back(
                TrackedBox{s.id, s.box(), 1.0, s.class_id});
        }
    }
    return out;
}

std::vector<std::vector<TrackedBox>> result_frames(const TrackingResult& result, int n_frames) {
    std::vector<std::vector<TrackedBox>> out(static_cast<std::size_t>(n_frames));
    for (const FrameOutput& fo : result.frames) {
        if (fo.frame < 1 || fo.frame > n_frames)
            throw std::invalid_argument("metrics: result frame outside sequence");
        out[static_cast<std::size_t>(fo.frame - 1)] = fo.rows;
    }
    return out;
}

namespace {

void csv_row(std::string& out, const std::string& seq, const char* metric,
             const std::optional<double>& value) {
    out += seq;
    out += ',';
    out += metric;
    out += ',';
    if (value.has_value()) append_double(out, *value);
    out += '\n';
}

void csv_series(std::string& out, const std::string& seq, const char* name,
                const std::optional<AlphaSeries>& s) {
    csv_row(out, seq, name, s.has_value() ? std::optional<double>(s->mean) : std::nullopt);
    const std::string half = std::string(name) + "_0.5";
    csv_row(out, seq, half.c_str(), s.has_value() ? std::optional<double>(s->at_half) : std::nullopt);
}

std::string fmt4(const std::optional<double>& v) {
    if (!v.has_value()) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

}  // namespace

std::string metrics_csv(const std::vector<std::pair<std::string, MetricsReport>>& named) {
    std::string out = "sequence,metric,value\n";
    for (const auto& [seq, r] : named) {
        csv_series(out, seq, "OWTA", r.owta);
        csv_series(out, seq, "DetRe", r.det_re);
        csv_series(out, seq, "AssA", r.ass_a);
        csv_series(out, seq, "HOTA", r.hota);
        csv_series(out, seq, "DetA", r.det_a);
        csv_series(out, seq, "LocA", r.loc_a);
        csv_series(out, seq, "AssocA", r.assoc_a);
        csv_series(out, seq, "ClsA", r.cls_a);
        csv_series(out, seq, "TETA", r.teta);
        csv_row(out, seq, "MOTA", r.mota);
        csv_row(out, seq, "IDF1", r.idf1);
        csv_row(out, seq, "TP", r.clear_tp);
        csv_row(out, seq, "FP", r.clear_fp);
        csv_row(out, seq, "FN", r.clear_fn);
        csv_row(out, seq, "IDSW", r.idsw);
        csv_row(out, seq, "IDTP", r.idtp);
        csv_row(out, seq, "IDFP", r.idfp);
        csv_row(out, seq, "IDFN", r.idfn);
        csv_row(out, seq, "gtDet", r.gt_det);
        csv_row(out, seq, "predDet", r.pred_det);
    }
    return out;
}

std::string metrics_markdown(const std::vector<std::pair<std::string, MetricsReport>>& named) {
    std::string out =
        "| sequence | OWTA | HOTA | DetA | AssA | TETA | MOTA | IDF1 | IDSW |\n"
        "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& [seq, r] : named) {
        out += "| " + seq + " | ";
        out += fmt4(r.owta ? std::optional<double>(r.owta->mean) : std::nullopt) + " | ";
        out += fmt4(r.hota ? std::optional<double>(r.hota->mean) : std::nullopt) + " | ";
        out += fmt4(r.det_a ? std::optional<double>(r.det_a->mean) : std::nullopt) + " | ";
        out += fmt4(r.ass_a ? std::optional<double>(r.ass_a->mean) : std::nullopt) + " | ";
        out += fmt4(r.teta ? std::optional<double>(r.teta->mean) : std::nullopt) + " | ";
        out += fmt4(r.mota) + " | ";
        out += fmt4(r.idf1) + " | ";
        out += std::to_string(static_cast<long long>(r.idsw)) + " |\n";
    }
    return out;
}

std::string attributes_csv(const AttributeReport& report) {
    std::string out = "attribute,field,lo,hi,value\n";
    // Bin edges are presentational; 6 significant digits keeps them free of
    // accumulated float noise (0.3, not 0.30000000000000004).
    auto edge = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };
    auto emit = [&out, &edge](const char* name, const Histogram& h) {
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const bool is_overflow = h.overflow && i + 1 == h.counts.size();
            out += name;
            out += ",bin,";
            out += edge(h.lo + static_cast<double>(i) * h.width);
            out += ',';
            if (is_overflow) {
                out += "inf";
            } else {
                out += edge(h.lo + static_cast<double>(i + 1) * h.width);
            }
            out += ',';
            out += std::to_string(h.counts[i]);
            out += '\n';
        }
        out += name;
        out += ",mean,,,";
        append_double(out, h.mean);
        out += '\n';
        out += name;
        out += ",median,,,";
        append_double(out, h.median);
        out += '\n';
        out += name;
        out += ",total,,,";
        out += std::to_string(h.total);
        out += '\n';
    };
    emit("adjacent_iou", report.adjacent_iou);
    emit("aspect_change", report.aspect_change);
    emit("area_change", report.area_change);
    emit("motion", report.motion);
    return out;
}

}  // namespace poitrack
