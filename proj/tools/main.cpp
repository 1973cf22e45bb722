// Command-line front end: simulate | track | eval | attrs | bench.
// Talks to the engine exclusively through the C API, so it doubles as a
// living example of embedding the shared library.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "poitrack/capi.h"
#include "svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/* --- plumbing ----------------------------------------------------------- */

int exit_code(ptk_status st) {
    switch (st) {
        case PTK_OK:
            return 0;
        case PTK_ERR_CONFIG:
            return 2;
        case PTK_ERR_DATA:
            return 3;
        default:
            return 4;  // PTK_ERR_ARG / PTK_ERR_INTERNAL: engine misuse or bug
    }
}

[[noreturn]] void die(ptk_status st, const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(exit_code(st));
}

void check(ptk_status st) {
    if (st != PTK_OK) die(st, ptk_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    explicit Handle(T* q) : p(q) {}
    Handle(Handle&& o) noexcept : p(std::exchange(o.p, nullptr)) {}
    Handle& operator=(Handle&& o) noexcept {
        if (this != &o) {
            Free(p);
            p = std::exchange(o.p, nullptr);
        }
        return *this;
    }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** slot() { return &p; }
    T* get() const { return p; }
    explicit operator bool() const { return p != nullptr; }
};

using ConfigH = Handle<ptk_config, ptk_config_free>;
using BundleH = Handle<ptk_bundle, ptk_bundle_free>;
using ResultH = Handle<ptk_result, ptk_result_free>;
using ReportH = Handle<ptk_report, ptk_report_free>;
using AttrsH = Handle<ptk_attrs, ptk_attrs_free>;

std::string take_string(char* s) {
    std::string out = s == nullptr ? "" : s;
    ptk_string_free(s);
    return out;
}

std::string fmt(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die(PTK_ERR_DATA, "cannot write " + path.string());
    out << text;
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) die(PTK_ERR_DATA, "cannot create directory " + dir.string());
}

// Looks a key up in the canonical "key = value" config echo.
std::string echo_value(const std::string& echo, const std::string& section,
                       const std::string& key) {
    std::istringstream in(echo);
    std::string line, current;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '[') {
            current = line.substr(1, line.find(']') - 1);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || current != section) continue;
        std::string k = line.substr(0, eq);
        while (!k.empty() && k.back() == ' ') k.pop_back();
        if (k == key) {
            std::string v = line.substr(eq + 1);
            while (!v.empty() && v.front() == ' ') v.erase(v.begin());
            return v;
        }
    }
    die(PTK_ERR_INTERNAL, "config echo is missing " + section + "." + key);
}

struct WorkStatus {
    ptk_status st = PTK_OK;
    std::string msg;
};

void fail_if_any(const std::vector<WorkStatus>& ws) {
    for (const WorkStatus& w : ws)
        if (w.st != PTK_OK) die(w.st, w.msg);
}

// Runs fn(0..n-1) on up to `jobs` threads. fn must not throw; failures are
// reported through per-index WorkStatus slots.
template <typename F>
void parallel_for(int n, int jobs, F&& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

int default_jobs() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 4 : static_cast<int>(std::min(hc, 8u));
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/* --- shared options ----------------------------------------------------- */

struct CommonOpts {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    int jobs = default_jobs();
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_jobs = true) {
    cmd->add_option("-c,--config", o.config, "Configuration file (INI)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", o.sets, "Override, e.g. --set pipeline.stride=4");
    cmd->add_option("-o,--out", o.out, "Output directory")->required();
    if (with_jobs) cmd->add_option("-j,--jobs", o.jobs, "Concurrent sequences");
}

ConfigH load_config(const CommonOpts& o, const std::vector<std::string>& extra = {}) {
    std::vector<std::string> sets = o.sets;
    sets.insert(sets.end(), extra.begin(), extra.end());
    std::vector<const char*> raw;
    raw.reserve(sets.size());
    for (const std::string& s : sets) raw.push_back(s.c_str());
    ConfigH cfg;
    check(ptk_config_load(o.config.empty() ? nullptr : o.config.c_str(), raw.data(), raw.size(),
                          cfg.slot()));
    return cfg;
}

std::string dump_config(const ConfigH& cfg) {
    char* text = nullptr;
    check(ptk_config_dump(cfg.get(), &text));
    return take_string(text);
}

// Every command leaves the fully resolved configuration next to its outputs.
std::string emit_echo(const ConfigH& cfg, const fs::path& out_dir) {
    const std::string echo = dump_config(cfg);
    make_dir(out_dir);
    write_file(out_dir / "config_resolved.ini", echo);
    return echo;
}

std::string seq_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "seq_%04d", index + 1);
    return buf;
}

std::vector<std::string> sorted_subdirs_with(const fs::path& dir, const std::string& filename) {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_directory() && fs::exists(entry.path() / filename))
            names.push_back(entry.path().filename().string());
    }
    if (ec) die(PTK_ERR_DATA, "cannot read directory " + dir.string());
    std::sort(names.begin(), names.end());
    return names;
}

/* --- simulate ----------------------------------------------------------- */

struct SimulateOpts {
    CommonOpts common;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateOpts& o) {
    std::vector<std::string> extra;
    if (o.seed) extra.push_back("simulator.seed=" + std::to_string(*o.seed));
    const ConfigH cfg = load_config(o.common, extra);
    const std::string echo = emit_echo(cfg, o.common.out);
    const int n = std::stoi(echo_value(echo, "simulator", "sequences"));
    const std::uint64_t base_seed = std::stoull(echo_value(echo, "simulator", "seed"));

    std::vector<WorkStatus> ws(static_cast<std::size_t>(n));
    std::vector<int> frames(static_cast<std::size_t>(n), 0);
    const double t0 = now_ms();
    parallel_for(n, o.common.jobs, [&](int i) {
        BundleH b;
        ptk_status st = ptk_bundle_generate(cfg.get(), static_cast<std::uint64_t>(i), b.slot());
        if (st != PTK_OK) {
            ws[static_cast<std::size_t>(i)] = {st, ptk_last_error()};
            return;
        }
        const fs::path dir = fs::path(o.common.out) / seq_name(i);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) {
            ws[static_cast<std::size_t>(i)] = {PTK_ERR_DATA,
                                               "cannot create directory " + dir.string()};
            return;
        }
        st = ptk_bundle_write(b.get(), (dir / "gt.txt").string().c_str(),
                              (dir / "det.txt").string().c_str(),
                              (dir / "poses.txt").string().c_str());
        if (st != PTK_OK) {
            ws[static_cast<std::size_t>(i)] = {st, ptk_last_error()};
            return;
        }
        frames[static_cast<std::size_t>(i)] = ptk_bundle_frames(b.get());
    });
    fail_if_any(ws);

    json manifest;
    manifest["base_seed"] = base_seed;
    manifest["sequences"] = n;
    manifest["width"] = std::stoi(echo_value(echo, "simulator", "width"));
    manifest["height"] = std::stoi(echo_value(echo, "simulator", "height"));
    manifest["entries"] = json::array();
    for (int i = 0; i < n; ++i) {
        manifest["entries"].push_back({{"dir", seq_name(i)},
                                       {"seed_offset", i},
                                       {"frames", frames[static_cast<std::size_t>(i)]}});
    }
    write_file(fs::path(o.common.out) / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "simulate: " << n << " sequences (base seed " << base_seed << ") -> "
              << o.common.out << " in " << fmt(now_ms() - t0, 0) << " ms\n";
    return 0;
}

/* --- track --------------------------------------------------------------- */

struct TrackOpts {
    CommonOpts common;
    std::string in_dir;
    std::string det, gt, poses, points;
    std::string mode;
};

struct TrackItem {
    std::string name;
    fs::path det, gt_mot, gt_poses, points;
};

BundleH load_item_bundle(const TrackItem& item, WorkStatus& w) {
    BundleH b;
    ptk_status st;
    if (!item.gt_poses.empty()) {
        st = ptk_bundle_load_poses(item.gt_poses.string().c_str(), item.det.string().c_str(),
                                   b.slot());
    } else {
        st = ptk_bundle_load_mot(item.gt_mot.empty() ? nullptr : item.gt_mot.string().c_str(),
                                 item.det.string().c_str(), b.slot());
    }
    if (st != PTK_OK) w = {st, ptk_last_error()};
    return b;
}

int cmd_track(const TrackOpts& o) {
    const ConfigH cfg = load_config(o.common);
    emit_echo(cfg, o.common.out);

    std::vector<TrackItem> items;
    if (!o.in_dir.empty()) {
        for (const std::string& name : sorted_subdirs_with(o.in_dir, "det.txt")) {
            TrackItem item;
            item.name = name;
            const fs::path dir = fs::path(o.in_dir) / name;
            item.det = dir / "det.txt";
            if (fs::exists(dir / "poses.txt")) item.gt_poses = dir / "poses.txt";
            else if (fs::exists(dir / "gt.txt")) item.gt_mot = dir / "gt.txt";
            if (fs::exists(dir / "points.txt")) item.points = dir / "points.txt";
            items.push_back(std::move(item));
        }
        if (items.empty())
            die(PTK_ERR_DATA, "no sequence directories with det.txt under " + o.in_dir);
    } else {
        if (o.det.empty()) die(PTK_ERR_CONFIG, "track needs --in DIR or --det FILE");
        TrackItem item;
        item.name = "result";
        item.det = o.det;
        if (!o.poses.empty()) item.gt_poses = o.poses;
        else if (!o.gt.empty()) item.gt_mot = o.gt;
        if (!o.points.empty()) item.points = o.points;
        items.push_back(std::move(item));
    }

    const int n = static_cast<int>(items.size());
    std::vector<WorkStatus> ws(static_cast<std::size_t>(n));
    struct Row {
        int frames = 0, windows = 0;
        std::vector<int> fallbacks;
        double elapsed_ms = 0;
    };
    std::vector<Row> rows(static_cast<std::size_t>(n));
    const double t0 = now_ms();
    parallel_for(n, o.common.jobs, [&](int idx) {
        const auto i = static_cast<std::size_t>(idx);
        WorkStatus& w = ws[i];
        const BundleH b = load_item_bundle(items[i], w);
        if (w.st != PTK_OK) return;
        ResultH r;
        ptk_status st = ptk_track(cfg.get(), b.get(), o.mode.empty() ? nullptr : o.mode.c_str(),
                                  items[i].points.empty() ? nullptr
                                                          : items[i].points.string().c_str(),
                                  r.slot());
        if (st != PTK_OK) {
            w = {st, items[i].name + ": " + ptk_last_error()};
            return;
        }
        const fs::path out_file = fs::path(o.common.out) / (items[i].name + ".txt");
        st = ptk_result_write(r.get(), out_file.string().c_str());
        if (st != PTK_OK) {
            w = {st, ptk_last_error()};
            return;
        }
        Row& row = rows[i];
        row.frames = ptk_result_frames(r.get());
        row.windows = ptk_result_windows(r.get());
        for (int k = 0; k < ptk_result_fallbacks(r.get()); ++k)
            row.fallbacks.push_back(ptk_result_fallback_at(r.get(), k));
        row.elapsed_ms = ptk_result_elapsed_ms(r.get());
    });
    fail_if_any(ws);

    // Wall-clock timing goes to the console only; report files stay
    // byte-stable across re-runs.
    std::string report = "sequence,frames,windows,fallback_windows\n";
    for (int i = 0; i < n; ++i) {
        const Row& row = rows[static_cast<std::size_t>(i)];
        std::string fb;
        for (std::size_t k = 0; k < row.fallbacks.size(); ++k) {
            if (k > 0) fb += ';';
            fb += std::to_string(row.fallbacks[k]);
        }
        report += items[static_cast<std::size_t>(i)].name + "," + std::to_string(row.frames) +
                  "," + std::to_string(row.windows) + "," + fb + "\n";
        const double fps =
            row.elapsed_ms > 0 ? 1000.0 * row.frames / row.elapsed_ms : 0.0;
        std::cout << items[static_cast<std::size_t>(i)].name << ": " << row.frames << " frames, "
                  << row.windows << " windows, " << row.fallbacks.size() << " fallbacks, "
                  << fmt(row.elapsed_ms, 1) << " ms (" << fmt(fps, 0) << " fps)\n";
    }
    write_file(fs::path(o.common.out) / "report.csv", report);
    std::cout << "track: " << n << " sequence(s) -> " << o.common.out << " in "
              << fmt(now_ms() - t0, 0) << " ms\n";
    return 0;
}

/* --- eval ---------------------------------------------------------------- */

struct EvalOpts {
    CommonOpts common;
    std::string gt_dir;
    std::string res_dir;
};

int cmd_eval(const EvalOpts& o) {
    const ConfigH cfg = load_config(o.common);
    emit_echo(cfg, o.common.out);

    struct Item {
        std::string name;
        fs::path gt;
        fs::path res;  // empty: scored as all-missed
    };
    std::vector<Item> items;
    for (const std::string& name : sorted_subdirs_with(o.gt_dir, "gt.txt")) {
        Item item;
        item.name = name;
        item.gt = fs::path(o.gt_dir) / name / "gt.txt";
        const fs::path res = fs::path(o.res_dir) / (name + ".txt");
        if (fs::exists(res)) item.res = res;
        items.push_back(std::move(item));
    }
    if (items.empty()) {
        // Flat layout: every *.txt in the ground-truth directory is one sequence.
        std::vector<std::string> files;
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(o.gt_dir, ec)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                files.push_back(entry.path().filename().string());
        }
        if (ec) die(PTK_ERR_DATA, "cannot read directory " + o.gt_dir);
        std::sort(files.begin(), files.end());
        for (const std::string& file : files) {
            Item item;
            item.name = fs::path(file).stem().string();
            item.gt = fs::path(o.gt_dir) / file;
            const fs::path res = fs::path(o.res_dir) / file;
            if (fs::exists(res)) item.res = res;
            items.push_back(std::move(item));
        }
    }
    if (items.empty()) die(PTK_ERR_DATA, "no ground-truth sequences under " + o.gt_dir);

    const int n = static_cast<int>(items.size());
    std::vector<WorkStatus> ws(static_cast<std::size_t>(n));
    std::vector<ReportH> reports(static_cast<std::size_t>(n));
    parallel_for(n, o.common.jobs, [&](int idx) {
        const auto i = static_cast<std::size_t>(idx);
        const ptk_status st = ptk_evaluate_files(
            items[i].gt.string().c_str(),
            items[i].res.empty() ? nullptr : items[i].res.string().c_str(), reports[i].slot());
        if (st != PTK_OK) ws[i] = {st, items[i].name + ": " + ptk_last_error()};
    });
    fail_if_any(ws);

    std::vector<const ptk_report*> raw;
    for (const ReportH& r : reports) raw.push_back(r.get());
    ReportH overall;
    check(ptk_report_merge(raw.data(), raw.size(), overall.slot()));

    std::vector<std::string> names;
    int missing = 0;
    for (const Item& item : items) {
        names.push_back(item.res.empty() ? item.name + " (no result)" : item.name);
        missing += item.res.empty() ? 1 : 0;
    }
    names.emplace_back("OVERALL");
    raw.push_back(overall.get());
    std::vector<const char*> cnames;
    for (const std::string& s : names) cnames.push_back(s.c_str());

    char* text = nullptr;
    check(ptk_reports_csv(cnames.data(), raw.data(), raw.size(), &text));
    write_file(fs::path(o.common.out) / "metrics.csv", take_string(text));
    check(ptk_reports_markdown(cnames.data(), raw.data(), raw.size(), &text));
    const std::string md = take_string(text);
    write_file(fs::path(o.common.out) / "metrics.md", md);

    std::cout << md;
    if (missing > 0)
        std::cout << "note: " << missing
                  << " sequence(s) had no result file and were scored as all-missed\n";
    return 0;
}

/* --- attrs --------------------------------------------------------------- */

struct AttrsOpts {
    CommonOpts common;
    std::string gt;
};

int cmd_attrs(const AttrsOpts& o) {
    const ConfigH cfg = load_config(o.common);
    emit_echo(cfg, o.common.out);

    std::vector<fs::path> pose_files, mot_files;
    if (fs::is_regular_file(o.gt)) {
        pose_files.emplace_back(o.gt);
    } else if (fs::is_directory(o.gt)) {
        for (const std::string& name : sorted_subdirs_with(o.gt, "poses.txt"))
            pose_files.push_back(fs::path(o.gt) / name / "poses.txt");
        if (pose_files.empty()) {
            for (const std::string& name : sorted_subdirs_with(o.gt, "gt.txt"))
                mot_files.push_back(fs::path(o.gt) / name / "gt.txt");
        }
        if (pose_files.empty() && mot_files.empty() && fs::exists(fs::path(o.gt) / "poses.txt"))
            pose_files.push_back(fs::path(o.gt) / "poses.txt");
    }
    if (pose_files.empty() && mot_files.empty())
        die(PTK_ERR_DATA, "no pose or ground-truth files under " + o.gt);

    std::vector<BundleH> bundles;
    for (const fs::path& p : pose_files) {
        BundleH b;
        check(ptk_bundle_load_poses(p.string().c_str(), nullptr, b.slot()));
        bundles.push_back(std::move(b));
    }
    for (const fs::path& p : mot_files) {
        BundleH b;
        check(ptk_bundle_load_mot(p.string().c_str(), nullptr, b.slot()));
        bundles.push_back(std::move(b));
    }
    std::vector<const ptk_bundle*> raw;
    for (const BundleH& b : bundles) raw.push_back(b.get());
    BundleH merged;
    check(ptk_bundle_concat(raw.data(), raw.size(), merged.slot()));

    AttrsH attrs;
    check(ptk_attrs_compute(merged.get(), attrs.slot()));
    char* text = nullptr;
    check(ptk_attrs_csv(attrs.get(), &text));
    write_file(fs::path(o.common.out) / "attributes.csv", take_string(text));

    struct Spec {
        const char* key;
        const char* title;
        const char* x_label;
        bool overflow;
    };
    const Spec specs[] = {
        {"adjacent_iou", "Adjacent-frame IOU", "IOU (bin width 0.1)", false},
        {"aspect_change", "Aspect-ratio change", "ARC (bin width 0.2)", true},
        {"area_change", "Area change", "AC (bin width 0.2)", true},
        {"motion", "Object motion", "OM, px (bin width 20)", true},
    };
    std::vector<std::string> charts;
    for (const Spec& s : specs) {
        double lo = 0, width = 0, mean = 0, median = 0;
        long long counts[64] = {};
        size_t n_bins = 0;
        check(ptk_attrs_histogram(attrs.get(), s.key, &lo, &width, counts, 64, &n_bins, &mean,
                                  &median));
        const std::vector<long long> bins(counts, counts + std::min<size_t>(n_bins, 64));
        charts.push_back(svg::bar_chart(s.title, s.x_label, lo, width, bins, s.overflow, 0,
                                        svg::chart_height() * static_cast<double>(charts.size())));
        std::cout << s.key << ": mean " << fmt(mean) << ", median " << fmt(median) << "\n";
    }
    write_file(fs::path(o.common.out) / "attrs.svg", svg::document(charts));
    std::cout << "attrs: " << bundles.size() << " sequence(s) -> " << o.common.out << "\n";
    return 0;
}

/* --- bench --------------------------------------------------------------- */

struct BenchOpts {
    CommonOpts common;
    std::optional<std::uint64_t> seed;
};

std::optional<double> report_value(const ReportH& rep, const char* name) {
    double v = 0;
    const ptk_status st = ptk_report_value(rep.get(), name, &v);
    if (st == PTK_OK) return v;
    if (st == PTK_ERR_DATA) return std::nullopt;  // undefined metric
    die(st, ptk_last_error());
}

int cmd_bench(const BenchOpts& o) {
    std::vector<std::string> extra;
    if (o.seed) extra.push_back("simulator.seed=" + std::to_string(*o.seed));
    const ConfigH base = load_config(o.common, extra);
    const std::string echo = emit_echo(base, o.common.out);
    const int n = std::stoi(echo_value(echo, "simulator", "sequences"));

    const std::vector<int> factors = {1, 2, 4, 8};
    const std::vector<int> poi_counts = {1, 4, 9, 16};
    const std::vector<std::string> modes = {"finenet", "coarse-byte", "coarse-iou"};

    // One config per POI count for finenet cells; coarse cells reuse the base.
    std::vector<ConfigH> poi_cfgs;
    for (int k : poi_counts) {
        std::vector<std::string> cell_extra = extra;
        cell_extra.push_back("sampler.count=" + std::to_string(k));
        poi_cfgs.push_back(load_config(o.common, cell_extra));
    }

    std::vector<WorkStatus> ws(static_cast<std::size_t>(n));
    std::vector<BundleH> originals(static_cast<std::size_t>(n));
    parallel_for(n, o.common.jobs, [&](int i) {
        const ptk_status st = ptk_bundle_generate(base.get(), static_cast<std::uint64_t>(i),
                                                  originals[static_cast<std::size_t>(i)].slot());
        if (st != PTK_OK) ws[static_cast<std::size_t>(i)] = {st, ptk_last_error()};
    });
    fail_if_any(ws);

    struct Row {
        std::string mode;
        int factor = 1;
        int poi = 0;  // 0: not applicable (coarse modes)
        std::optional<double> owta, hota, deta, assa, teta, mota, idf1, idsw;
    };
    std::vector<Row> table;

    const auto run_cell = [&](const ConfigH& cfg, const std::vector<BundleH>& bundles,
                              const std::string& mode) -> ReportH {
        std::vector<ReportH> reports(static_cast<std::size_t>(n));
        std::vector<WorkStatus> cell_ws(static_cast<std::size_t>(n));
        parallel_for(n, o.common.jobs, [&](int idx) {
            const auto i = static_cast<std::size_t>(idx);
            ResultH res;
            ptk_status st =
                ptk_track(cfg.get(), bundles[i].get(), mode.c_str(), nullptr, res.slot());
            if (st != PTK_OK) {
                cell_ws[i] = {st, mode + ": " + ptk_last_error()};
                return;
            }
            st = ptk_evaluate(bundles[i].get(), res.get(), reports[i].slot());
            if (st != PTK_OK) cell_ws[i] = {st, mode + ": " + ptk_last_error()};
        });
        fail_if_any(cell_ws);
        std::vector<const ptk_report*> raw;
        for (const ReportH& r : reports) raw.push_back(r.get());
        ReportH merged;
        check(ptk_report_merge(raw.data(), raw.size(), merged.slot()));
        return merged;
    };

    for (int factor : factors) {
        std::vector<BundleH> bundles(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            check(ptk_bundle_decimate(originals[static_cast<std::size_t>(i)].get(), factor,
                                      bundles[static_cast<std::size_t>(i)].slot()));
        for (const std::string& mode : modes) {
            const bool fine = mode == "finenet";
            const auto ks = fine ? poi_counts : std::vector<int>{0};
            for (std::size_t ki = 0; ki < ks.size(); ++ki) {
                const ConfigH& cfg = fine ? poi_cfgs[ki] : base;
                const double t0 = now_ms();
                const ReportH rep = run_cell(cfg, bundles, mode);
                Row row;
                row.mode = mode;
                row.factor = factor;
                row.poi = ks[ki];
                row.owta = report_value(rep, "OWTA");
                row.hota = report_value(rep, "HOTA");
                row.deta = report_value(rep, "DetA");
                row.assa = report_value(rep, "AssA");
                row.teta = report_value(rep, "TETA");
                row.mota = report_value(rep, "MOTA");
                row.idf1 = report_value(rep, "IDF1");
                row.idsw = report_value(rep, "IDSW");
                table.push_back(row);
                std::cout << "bench: mode=" << mode << " factor=" << factor;
                if (fine) std::cout << " poi=" << ks[ki];
                std::cout << " OWTA=" << (row.owta ? fmt(*row.owta) : "-")
                          << " IDF1=" << (row.idf1 ? fmt(*row.idf1) : "-") << " ("
                          << fmt(now_ms() - t0, 0) << " ms)\n";
            }
        }
    }

    const auto cell = [&](const std::string& v) { return v.empty() ? "" : v; };
    const auto opt = [&](const std::optional<double>& v, int digits = 4) {
        return v ? fmt(*v, digits) : std::string();
    };
    std::string csv =
        "mode,factor,effective_fps,poi_count,OWTA,HOTA,DetA,AssA,TETA,MOTA,IDF1,IDSW\n";
    std::string md =
        "| mode | factor | fps | K | OWTA | HOTA | DetA | AssA | TETA | MOTA | IDF1 | IDSW |\n"
        "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const Row& r : table) {
        const std::string fps = svg::num(25.0 / r.factor);
        const std::string poi = r.poi > 0 ? std::to_string(r.poi) : "";
        const std::string idsw =
            r.idsw ? std::to_string(static_cast<long long>(std::llround(*r.idsw))) : "";
        csv += r.mode + "," + std::to_string(r.factor) + "," + fps + "," + poi + "," +
               opt(r.owta) + "," + opt(r.hota) + "," + opt(r.deta) + "," + opt(r.assa) + "," +
               opt(r.teta) + "," + opt(r.mota) + "," + opt(r.idf1) + "," + idsw + "\n";
        md += "| " + r.mode + " | " + std::to_string(r.factor) + " | " + fps + " | " +
              cell(poi.empty() ? "-" : poi) + " | " + opt(r.owta) + " | " + opt(r.hota) + " | " +
              opt(r.deta) + " | " + opt(r.assa) + " | " + opt(r.teta) + " | " + opt(r.mota) +
              " | " + opt(r.idf1) + " | " + (idsw.empty() ? "-" : idsw) + " |\n";
    }
    write_file(fs::path(o.common.out) / "bench.csv", csv);
    write_file(fs::path(o.common.out) / "bench.md", md);

    // OWTA vs effective frame rate (25 fps base), finenet at the default K=9.
    std::vector<svg::Series> lines;
    for (const std::string& mode : modes) {
        svg::Series s;
        s.label = mode == "finenet" ? "finenet (K=9)" : mode;
        for (auto it = table.rbegin(); it != table.rend(); ++it) {
            if (it->mode != mode || (mode == "finenet" && it->poi != 9)) continue;
            if (it->owta) s.points.emplace_back(25.0 / it->factor, *it->owta);
        }
        lines.push_back(std::move(s));
    }
    write_file(fs::path(o.common.out) / "owta_vs_fps.svg",
               svg::document({svg::line_chart("OWTA vs effective frame rate",
                                              "effective fps (25 / decimation factor)", "OWTA",
                                              lines)}));

    // POI-count sweep at full frame rate.
    svg::Series idf1_line{"IDF1", {}}, owta_line{"OWTA", {}};
    for (const Row& r : table) {
        if (r.mode != "finenet" || r.factor != 1) continue;
        if (r.idf1) idf1_line.points.emplace_back(r.poi, *r.idf1);
        if (r.owta) owta_line.points.emplace_back(r.poi, *r.owta);
    }
    write_file(fs::path(o.common.out) / "poi_sweep.svg",
               svg::document({svg::line_chart("Score vs POI count (factor 1)", "POIs per object",
                                              "score", {idf1_line, owta_line})}));
    std::cout << "bench: " << table.size() << " cells -> " << o.common.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fine-grained multi-object tracking engine"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Generate a seeded synthetic sequence suite");
    add_common(c_sim, sim.common);
    c_sim->add_option("--seed", sim.seed, "Override the simulator base seed");

    TrackOpts trk;
    CLI::App* c_trk = app.add_subcommand("track", "Run the tracker over detections");
    add_common(c_trk, trk.common);
    c_trk->add_option("-i,--in", trk.in_dir, "Suite directory from 'simulate'")
        ->check(CLI::ExistingDirectory);
    c_trk->add_option("--det", trk.det, "Detection file (single sequence)")
        ->check(CLI::ExistingFile);
    c_trk->add_option("--gt", trk.gt, "Ground-truth file for the oracle point tracker")
        ->check(CLI::ExistingFile);
    c_trk->add_option("--poses", trk.poses, "Pose file for the oracle point tracker")
        ->check(CLI::ExistingFile);
    c_trk->add_option("--points", trk.points, "Precomputed point-trajectory file")
        ->check(CLI::ExistingFile);
    c_trk->add_option("-m,--mode", trk.mode, "finenet | coarse-byte | coarse-iou");

    EvalOpts ev;
    CLI::App* c_ev = app.add_subcommand("eval", "Score tracking results against ground truth");
    add_common(c_ev, ev.common);
    c_ev->add_option("--gt", ev.gt_dir, "Ground-truth suite directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    c_ev->add_option("--res", ev.res_dir, "Directory of result files")
        ->required()
        ->check(CLI::ExistingDirectory);

    AttrsOpts at;
    CLI::App* c_at = app.add_subcommand("attrs", "Ground-truth dynamicity histograms");
    add_common(c_at, at.common, false);
    c_at->add_option("--gt", at.gt, "Suite directory or pose file")->required();

    BenchOpts bn;
    CLI::App* c_bn = app.add_subcommand("bench", "Mode x decimation x POI-count comparison");
    add_common(c_bn, bn.common);
    c_bn->add_option("--seed", bn.seed, "Override the simulator base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // command-line usage problems are configuration errors
    }

    if (*c_sim) return cmd_simulate(sim);
    if (*c_trk) return cmd_track(trk);
    if (*c_ev) return cmd_eval(ev);
    if (*c_at) return cmd_attrs(at);
    if (*c_bn) return cmd_bench(bn);
    return 2;
}
