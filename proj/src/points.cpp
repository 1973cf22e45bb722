#include "poitrack/points.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "poitrack/csv.hpp"
#include "poitrack/format.hpp"

namespace poitrack {

namespace {

void check_noise(const OracleNoiseConfig& noise) {
    if (noise.sigma < 0.0) throw std::invalid_argument("points: sigma must be >= 0");
    if (noise.dropout < 0.0 || noise.dropout > 1.0)
        throw std::invalid_argument("points: dropout must be in [0, 1]");
}

const ObjectState* find_object(const SequenceBundle& bundle, int frame, int id) {
    if (frame < 1 || frame > bundle.n_frames) return nullptr;
    for (const ObjectState& obj : bundle.truth_at(frame)) {
        if (obj.id == id) return &obj;
    }
    return nullptr;
}

// Carries one query forward from its anchor frame. anchor_id < 0 means a
// background point: it has no box to ride, so its true position is constant.
PointTrajectory transport_query(const SequenceBundle& bundle, const PoiQuery& query,
                                int anchor_id, const OracleNoiseConfig& noise,
                                int window_first, int window_last) {
    PointTrajectory traj;
    traj.track_id = query.track_id;
    traj.poi_index = query.poi_index;
    traj.first_frame = window_first;
    const int n = window_last - window_first + 1;
    traj.positions.assign(static_cast<std::size_t>(n), Point{0.0, 0.0});
    traj.visible.assign(static_cast<std::size_t>(n), false);

    const int query_frame = window_first + query.stride_frame;
    double u = 0.0, v = 0.0;
    double anchor_vis = 1.0;
    if (anchor_id >= 0) {
        const ObjectState* obj = find_object(bundle, query_frame, anchor_id);
        if (obj == nullptr) {
            std::ostringstream msg;
            msg << "points: query (track " << query.track_id << ", poi " << query.poi_index
                << ") names no object with id " << anchor_id << " at frame " << query_frame;
            throw std::invalid_argument(msg.str());
        }
        const Box b = obj->box();
        u = (query.position.x - b.x1) / obj->w;
        v = (query.position.y - b.y1) / obj->h;
        anchor_vis = obj->visibility;
    }

    // The query frame echoes the input position verbatim: no jitter, no
    // dropout, hidden only when the object itself is hidden.
    {
        const int i = query.stride_frame;
        traj.positions[static_cast<std::size_t>(i)] = query.position;
        traj.visible[static_cast<std::size_t>(i)] = anchor_vis >= noise.min_visibility;
    }

    std::mt19937_64 rng(mix_seed(mix_seed(noise.seed, static_cast<std::uint64_t>(query.track_id)),
                                 static_cast<std::uint64_t>(query.poi_index)));
    std::normal_distribution<double> jitter(0.0, noise.sigma);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int frame = query_frame + 1; frame <= window_last; ++frame) {
        // Fixed three draws per frame, consumed even on frames the point is
        // lost, so one frame's outcome never shifts the stream of the next.
        const double jx = jitter(rng);
        const double jy = jitter(rng);
        const double drop = unit(rng);
        const int i = frame - window_first;
        if (anchor_id >= 0) {
            const ObjectState* obj = find_object(bundle, frame, anchor_id);
            if (obj == nullptr) continue;  // object gone; point stays lost
            const Box b = obj->box();
            traj.positions[static_cast<std::size_t>(i)] = Point{b.x1 + u * obj->w + jx, b.y1 + v * obj->h + jy};
            traj.visible[static_cast<std::size_t>(i)] =
                obj->visibility >= noise.min_visibility && drop >= noise.dropout;
        } else {
            traj.positions[static_cast<std::size_t>(i)] = Point{query.position.x + jx, query.position.y + jy};
            traj.visible[static_cast<std::size_t>(i)] = drop >= noise.dropout;
        }
    }
    return traj;
}

}  // namespace

std::vector<PointTrajectory> oracle_track(const SequenceBundle& bundle,
                                          const std::vector<PoiQuery>& queries,
                                          const OracleNoiseConfig& noise,
                                          int window_first, int window_last) {
    check_noise(noise);
    if (window_last < window_first) throw std::invalid_argument("points: empty window");
    std::vector<PointTrajectory> out;
    out.reserve(queries.size());
    for (const PoiQuery& q : queries) {
        out.push_back(transport_query(bundle, q, q.track_id, noise, window_first, window_last));
    }
    return out;
}

std::vector<PointTrajectory> OraclePointTracker::track(const std::vector<PoiQuery>& queries,
                                                       int window_first, int window_last) {
    check_noise(noise_);
    if (window_last < window_first) throw std::invalid_argument("points: empty window");
    std::vector<PointTrajectory> out;
    out.reserve(queries.size());
    for (const PoiQuery& q : queries) {
        const int query_frame = window_first + q.stride_frame;
        // Bind by position, not by the caller's track id: the smallest
        // ground-truth box containing the point wins, mirroring what a pixel
        // tracker would latch onto. No box means background.
        int bound_id = -1;
        double bound_area = 0.0;
        if (query_frame >= 1 && query_frame <= bundle_->n_frames) {
            for (const ObjectState& obj : bundle_->truth_at(query_frame)) {
                const Box b = obj.box();
                if (!contains(b, q.position)) continue;
                const double a = area(b);
                if (bound_id < 0 || a < bound_area) {
                    bound_id = obj.id;
                    bound_area = a;
                }
            }
        }
        out.push_back(transport_query(*bundle_, q, bound_id, noise_, window_first, window_last));
    }
    return out;
}

std::vector<PointTrajectory> FilePointTracker::track(const std::vector<PoiQuery>& queries,
                                                     int window_first, int window_last) {
    if (window_last < window_first) throw std::invalid_argument("points: empty window");
    const int n = window_last - window_first + 1;
    std::vector<bool> claimed(tracks_.size(), false);

    std::vector<PointTrajectory> out;
    out.reserve(queries.size());
    for (const PoiQuery& q : queries) {
        const int query_frame = window_first + q.stride_frame;
        int pick = -1;
        // Exact key first; files written for these exact queries hit this.
        for (std::size_t i = 0; i < tracks_.size(); ++i) {
            if (claimed[i]) continue;
            if (tracks_[i].track_id == q.track_id && tracks_[i].poi_index == q.poi_index &&
                tracks_[i].visible_at(query_frame)) {
                pick = static_cast<int>(i);
                break;
            }
        }
        if (pick < 0) {
            // Foreign keys: nearest unclaimed trajectory at the query frame.
            double best = tolerance_;
            for (std::size_t i = 0; i < tracks_.size(); ++i) {
                if (claimed[i] || !tracks_[i].visible_at(query_frame)) continue;
                const Point p = tracks_[i].position_at(query_frame);
                const double d = std::hypot(p.x - q.position.x, p.y - q.position.y);
                if (d <= best) {
                    best = d;
                    pick = static_cast<int>(i);
                }
            }
        }

        PointTrajectory traj;
        traj.track_id = q.track_id;
        traj.poi_index = q.poi_index;
        traj.first_frame = window_first;
        traj.positions.assign(static_cast<std::size_t>(n), Point{0.0, 0.0});
        traj.visible.assign(static_cast<std::size_t>(n), false);
        if (pick >= 0) {
            claimed[static_cast<std::size_t>(pick)] = true;
            const PointTrajectory& src = tracks_[static_cast<std::size_t>(pick)];
            for (int frame = query_frame; frame <= window_last; ++frame) {
                if (!src.visible_at(frame)) continue;
                const int i = frame - window_first;
                traj.positions[static_cast<std::size_t>(i)] = src.position_at(frame);
                traj.visible[static_cast<std::size_t>(i)] = true;
            }
        }
        out.push_back(std::move(traj));
    }
    return out;
}

std::vector<PointTrajectory> load_point_tracks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("points: cannot open " + path);

    struct Sample {
        int frame;
        Point pos;
        bool visible;
    };
    std::map<std::pair<int, int>, std::vector<Sample>> grouped;
    std::set<std::tuple<int, int, int>> seen;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.rfind("track_id", 0) == 0) continue;  // optional header
        const std::vector<std::string> f = csv::split(line);
        if (f.size() != 6) csv::fail(path, lineno, "expected 6 fields, got " + std::to_string(f.size()));
        int tid, poi, frame, vis;
        double x, y;
        if (!csv::to_int(f[0], tid)) csv::fail(path, lineno, "bad track_id '" + f[0] + "'");
        if (!csv::to_int(f[1], poi)) csv::fail(path, lineno, "bad poi_index '" + f[1] + "'");
        if (!csv::to_int(f[2], frame)) csv::fail(path, lineno, "bad frame '" + f[2] + "'");
        if (!csv::to_double(f[3], x)) csv::fail(path, lineno, "bad x '" + f[3] + "'");
        if (!csv::to_double(f[4], y)) csv::fail(path, lineno, "bad y '" + f[4] + "'");
        if (!csv::to_int(f[5], vis) || (vis != 0 && vis != 1))
            csv::fail(path, lineno, "bad visible flag '" + f[5] + "'");
        if (frame < 1) csv::fail(path, lineno, "frame must be >= 1");
        if (!std::isfinite(x) || !std::isfinite(y)) csv::fail(path, lineno, "non-finite position");
        if (!seen.insert({tid, poi, frame}).second)
            csv::fail(path, lineno, "duplicate sample for (track " + std::to_string(tid) + ", poi " +
                                        std::to_string(poi) + ", frame " + std::to_string(frame) + ")");
        grouped[{tid, poi}].push_back(Sample{frame, Point{x, y}, vis == 1});
    }

    std::vector<PointTrajectory> out;
    out.reserve(grouped.size());
    for (auto& [key, samples] : grouped) {
        std::sort(samples.begin(), samples.end(),
                  [](const Sample& a, const Sample& b) { return a.frame < b.frame; });
        PointTrajectory traj;
        traj.track_id = key.first;
        traj.poi_index = key.second;
        traj.first_frame = samples.front().frame;
        const int n = samples.back().frame - traj.first_frame + 1;
        traj.positions.assign(static_cast<std::size_t>(n), Point{0.0, 0.0});
        traj.visible.assign(static_cast<std::size_t>(n), false);
        for (const Sample& s : samples) {
            const int i = s.frame - traj.first_frame;
            traj.positions[static_cast<std::size_t>(i)] = s.pos;
            traj.visible[static_cast<std::size_t>(i)] = s.visible;
        }
        out.push_back(std::move(traj));
    }
    return out;
}

void write_point_tracks(const std::vector<PointTrajectory>& tracks, const std::string& path) {
    std::vector<const PointTrajectory*> order;
    order.reserve(tracks.size());
    for (const PointTrajectory& t : tracks) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const PointTrajectory* a, const PointTrajectory* b) {
        return std::tie(a->track_id, a->poi_index, a->first_frame) <
               std::tie(b->track_id, b->poi_index, b->first_frame);
    });

    std::string buf = "track_id,poi_index,frame,x,y,visible\n";
    for (const PointTrajectory* t : order) {
        for (int frame = t->first_frame; frame <= t->last_frame(); ++frame) {
            if (!t->visible_at(frame)) continue;
            const Point p = t->position_at(frame);
            buf += std::to_string(t->track_id);
            buf += ',';
            buf += std::to_string(t->poi_index);
            buf += ',';
            buf += std::to_string(frame);
            buf += ',';
            append_double(buf, p.x);
            buf += ',';
            append_double(buf, p.y);
            buf += ",1\n";
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("points: cannot write " + path);
    out << buf;
}

}  // namespace poitrack
