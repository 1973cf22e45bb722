#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "poitrack/geometry.hpp"

namespace poitrack {

// One point query for the point tracker: POI poi_index of track track_id,
// anchored at buffer index stride_frame (first frame of the window at which
// the track's box is known).
struct PoiQuery {
    int track_id = 0;
    int stride_frame = 0;  // index within [0, S)
    int poi_index = 0;     // index within [0, K)
    Point position;
};

// splitmix64 finalizer; decorrelates per-entity substreams from one base
// seed so iteration order never shifts anyone's randomness.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

enum class PoiSampleMode { Grid, UniformRandom };

struct SamplerConfig {
    int rows = 3;
    int cols = 3;
    PoiSampleMode mode = PoiSampleMode::Grid;
    std::uint64_t seed = 0;  // used by UniformRandom only

    int count() const { return rows * cols; }

    // Decomposes a bare POI count into a rows x cols grid. Grid aspect
    // (cols/rows) is constrained to [1/3, 3] when such a factorization
    // exists; ties go to the squarest (then widest) grid.
    static SamplerConfig from_count(int k);
};

// rows x cols lattice of cell centers, row-major: point (r, c) sits at
// x1 + (c + 0.5) * w / cols, y1 + (r + 0.5) * h / rows. Degenerate boxes
// yield an empty list.
std::vector<Point> sample_grid(const Box& box, const SamplerConfig& cfg);

// Seeded uniform draw of k points inside the box; the stochastic
// alternative behind the same query contract.
std::vector<Point> sample_uniform(const Box& box, int k, std::uint64_t seed);

// The per-track box trajectory buffered over one stride window. Entries are
// nullopt at frames where the track has no observed box.
struct TrackStrideBoxes {
    int track_id = 0;
    std::vector<std::optional<Box>> boxes;
};

// Emits K queries per track, anchored at the earliest window frame where the
// track's box is known (tracks born mid-stride are queried at their birth
// frame). Deterministic in Grid mode; UniformRandom derives a per-track
// stream from cfg.seed so query order does not matter.
std::vector<PoiQuery> sample_pois(const std::vector<TrackStrideBoxes>& tracks,
                                  const SamplerConfig& cfg);

}  // namespace poitrack
