#include "poitrack/sampler.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace poitrack {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SamplerConfig SamplerConfig::from_count(int k) {
    if (k < 1) throw std::invalid_argument("sampler: POI count must be >= 1");
    int best_r = 1, best_c = k;
    int best_gap = std::numeric_limits<int>::max();
    bool best_ok = false;
    for (int r = 1; r <= k; ++r) {
        if (k % r != 0) continue;
        const int c = k / r;
        const double aspect = static_cast<double>(c) / r;
        const bool ok = aspect >= 1.0 / 3.0 && aspect <= 3.0;
        const int gap = std::abs(c - r);
        // Prefer in-range aspects, then the squarest grid, then cols >= rows.
        if ((ok && !best_ok) || (ok == best_ok && (gap < best_gap || (gap == best_gap && c > r && best_c < best_r)))) {
            best_r = r;
            best_c = c;
            best_gap = gap;
            best_ok = ok;
        }
    }
    SamplerConfig cfg;
    cfg.rows = best_r;
    cfg.cols = best_c;
    return cfg;
}

std::vector<Point> sample_grid(const Box& box, const SamplerConfig& cfg) {
    if (cfg.rows < 1 || cfg.cols < 1) throw std::invalid_argument("sampler: grid shape must be >= 1x1");
    if (!box.valid() || box.width() <= 0.0 || box.height() <= 0.0) return {};
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(cfg.count()));
    const double cw = box.width() / cfg.cols;
    const double ch = box.height() / cfg.rows;
    for (int r = 0; r < cfg.rows; ++r) {
        for (int c = 0; c < cfg.cols; ++c) {
            pts.push_back(Point{box.x1 + (c + 0.5) * cw, box.y1 + (r + 0.5) * ch});
        }
    }
    return pts;
}

std::vector<Point> sample_uniform(const Box& box, int k, std::uint64_t seed) {
    if (!box.valid() || box.width() <= 0.0 || box.height() <= 0.0) return {};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.x1, box.x2);
    std::uniform_real_distribution<double> uy(box.y1, box.y2);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pts.push_back(Point{ux(rng), uy(rng)});
    return pts;
}

std::vector<PoiQuery> sample_pois(const std::vector<TrackStrideBoxes>& tracks,
                                  const SamplerConfig& cfg) {
    std::vector<PoiQuery> queries;
    for (const auto& track : tracks) {
        int anchor = -1;
        for (std::size_t i = 0; i < track.boxes.size(); ++i) {
            if (track.boxes[i].has_value()) {
                anchor = static_cast<int>(i);
                break;
            }
        }
        if (anchor < 0) continue;
        const Box& box = *track.boxes[anchor];
        const std::vector<Point> pts =
            cfg.mode == PoiSampleMode::Grid
                ? sample_grid(box, cfg)
                : sample_uniform(box, cfg.count(),
                                 mix_seed(cfg.seed, static_cast<std::uint64_t>(track.track_id)));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            queries.push_back(PoiQuery{track.track_id, anchor, static_cast<int>(i), pts[i]});
        }
    }
    return queries;
}

}  // namespace poitrack
