#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poitrack/geometry.hpp"
#include "poitrack/sampler.hpp"
#include "poitrack/sequence.hpp"

namespace poitrack {

// Position history of one point of interest, forward from the frame it was
// queried at. Frames before first_frame are outside the trajectory; frames
// inside the stored range carry an explicit per-frame visibility flag.
struct PointTrajectory {
    int track_id = 0;
    int poi_index = 0;
    int first_frame = 0;                 // global frame of the query
    std::vector<Point> positions;        // [frame - first_frame]
    std::vector<bool> visible;           // same indexing

    int last_frame() const { return first_frame + static_cast<int>(positions.size()) - 1; }

    bool visible_at(int frame) const {
        int i = frame - first_frame;
        return i >= 0 && i < static_cast<int>(visible.size()) && visible[i];
    }
    // Only meaningful when visible_at(frame) is true.
    Point position_at(int frame) const { return positions[frame - first_frame]; }
};

// Noise model for the ground-truth-driven point tracker.
struct OracleNoiseConfig {
    double sigma = 0.0;            // isotropic Gaussian jitter, px per axis
    double dropout = 0.0;          // per-frame loss probability in [0,1]
    double min_visibility = 0.5;   // object visibility below this hides its points
    std::uint64_t seed = 0;
};

// Propagates each query point forward through ground truth: the point keeps
// its normalized position inside the object's box, plus jitter. The query
// frame itself is returned exactly as given (a point tracker is trusted at
// the frame it was initialized on). track_id of each query must name an
// object present at the query's frame.
std::vector<PointTrajectory> oracle_track(const SequenceBundle& bundle,
                                          const std::vector<PoiQuery>& queries,
                                          const OracleNoiseConfig& noise,
                                          int window_first, int window_last);

// Interface the pipeline drives. Queries carry stride-local frames; the
// window bounds are global frame numbers, window_first being stride frame 0.
class PointTracker {
  public:
    virtual ~PointTracker() = default;
    virtual std::vector<PointTrajectory> track(const std::vector<PoiQuery>& queries,
                                               int window_first, int window_last) = 0;
};

// Stands in for a learned point tracker when ground truth is available.
// Binding is by position, never by id: a query is attached to the smallest
// ground-truth box containing it at the query frame. Points hitting no
// object are background and stay put. Output keeps the query's own
// (track_id, poi_index) key.
class OraclePointTracker : public PointTracker {
  public:
    OraclePointTracker(const SequenceBundle& bundle, const OracleNoiseConfig& noise)
        : bundle_(&bundle), noise_(noise) {}

    std::vector<PointTrajectory> track(const std::vector<PoiQuery>& queries,
                                       int window_first, int window_last) override;

  private:
    const SequenceBundle* bundle_;
    OracleNoiseConfig noise_;
};

// Replays trajectories produced offline (e.g. by an external model) from a
// point-track file. A query is served by the trajectory with the same
// (track_id, poi_index) key when one exists; otherwise by the unclaimed
// trajectory whose position at the query frame is nearest within a small
// tolerance. Queries nobody answers yield an empty (never-visible)
// trajectory.
class FilePointTracker : public PointTracker {
  public:
    explicit FilePointTracker(std::vector<PointTrajectory> tracks, double tolerance = 3.0)
        : tracks_(std::move(tracks)), tolerance_(tolerance) {}

    std::vector<PointTrajectory> track(const std::vector<PoiQuery>& queries,
                                       int window_first, int window_last) override;

  private:
    std::vector<PointTrajectory> tracks_;
    double tolerance_;
};

// CSV round trip. Rows are "track_id,poi_index,frame,x,y,visible"; the
// writer emits visible frames only, the loader accepts visible=0 rows too.
std::vector<PointTrajectory> load_point_tracks(const std::string& path);
void write_point_tracks(const std::vector<PointTrajectory>& tracks, const std::string& path);

}  // namespace poitrack
