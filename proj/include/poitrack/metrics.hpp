#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poitrack/geometry.hpp"
#include "poitrack/sequence.hpp"

namespace poitrack {

inline constexpr int kNumAlphas = 19;

// The localization thresholds 0.05, 0.10, ..., 0.95.
const std::array<double, kNumAlphas>& metric_alphas();

struct AlphaSeries {
    std::array<double, kNumAlphas> values{};
    double mean = 0.0;
    double at_half = 0.0;  // the alpha = 0.5 entry
};

// Histogram with fixed-width bins starting at lo; the last bin is an
// open-ended overflow bin when overflow is true.
struct Histogram {
    double lo = 0.0;
    double width = 0.0;
    bool overflow = false;
    std::vector<long long> counts;
    long long total = 0;
    double mean = 0.0;
    double median = 0.0;
};

// Frame-to-frame dynamicity of the ground truth: adjacent-frame overlap,
// aspect-ratio change, area change, and center motion, each as a histogram
// over all valid adjacent pairs.
struct AttributeReport {
    Histogram adjacent_iou;   // width 0.1 over [0, 1]
    Histogram aspect_change;  // width 0.2, overflow past 3
    Histogram area_change;    // width 0.2, overflow past 3
    Histogram motion;         // width 20 px, overflow past 300
};

// Additive per-sequence tallies; merging then finalizing is equivalent to
// evaluating the concatenation of sequences with disjoint id spaces.
struct MetricCounts {
    std::array<double, kNumAlphas> tp{}, fp{}, fn{};
    std::array<double, kNumAlphas> ass_sum{};             // sum of A(c) over TP pairs
    std::array<double, kNumAlphas> tpc{}, fpc{}, fnc{};   // class agreement over TP pairs
    double clear_tp = 0, clear_fp = 0, clear_fn = 0, idsw = 0;
    double idtp = 0;
    double gt_det = 0, pred_det = 0;

    void merge(const MetricCounts& other);
};

struct MetricsReport {
    std::optional<AlphaSeries> owta, det_re, ass_a, hota, det_a;
    std::optional<AlphaSeries> loc_a, assoc_a, cls_a, teta;
    std::optional<double> mota;
    std::optional<double> idf1;
    double clear_tp = 0, clear_fp = 0, clear_fn = 0, idsw = 0;
    double idtp = 0, idfp = 0, idfn = 0;
    double gt_det = 0, pred_det = 0;
    std::optional<AttributeReport> attributes;
};

struct FrameMatch {
    std::vector<std::pair<int, int>> pairs;  // (gt index, pred index)
    int tp = 0, fp = 0, fn = 0;
};

// Single-frame overlap matching: Hungarian on IOU, pairs below alpha
// unmatched. The simple building block; the full evaluation below uses the
// association-aware variant.
FrameMatch match_frames(const std::vector<TrackedBox>& gt, const std::vector<TrackedBox>& pred,
                        double alpha);

// Full evaluation of one sequence: gt and pred are per-frame rows, index
// aligned (same frame count). Produces every tally the report needs.
MetricCounts evaluate_sequence(const std::vector<std::vector<TrackedBox>>& gt,
                               const std::vector<std::vector<TrackedBox>>& pred);

// Turns tallies into ratios. Rates whose denominators are empty come back
// absent rather than zero.
MetricsReport finalize(const MetricCounts& counts);

// Dynamicity attributes of the ground truth; pairs spanning a frame where
// the object is absent are skipped, as are undefined ratio attributes.
AttributeReport dynamicity_report(const std::vector<std::vector<TrackedBox>>& gt);

// Conversions into the per-frame row shape the evaluators consume.
std::vector<std::vector<TrackedBox>> gt_frames(const SequenceBundle& bundle);
std::vector<std::vector<TrackedBox>> result_frames(const TrackingResult& result, int n_frames);

// Report rendering. CSV is one row per sequence per metric; absent values
// have an empty value cell. The markdown table shows the headline columns.
std::string metrics_csv(const std::vector<std::pair<std::string, MetricsReport>>& named);
std::string metrics_markdown(const std::vector<std::pair<std::string, MetricsReport>>& named);
std::string attributes_csv(const AttributeReport& report);

}  // namespace poitrack
