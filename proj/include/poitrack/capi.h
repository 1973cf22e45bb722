#ifndef POITRACK_CAPI_H
#define POITRACK_CAPI_H

/* C interface of the tracking engine. Every object is an opaque handle;
 * every fallible call returns a status code and leaves a human-readable
 * message in ptk_last_error() (thread-local). Strings returned through
 * char** are heap-allocated and released with ptk_string_free(). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptk_status {
    PTK_OK = 0,
    PTK_ERR_CONFIG = 1,   /* bad key, bad value, inconsistent settings */
    PTK_ERR_DATA = 2,     /* malformed or missing input data */
    PTK_ERR_ARG = 3,      /* null handle or unknown name at the C boundary */
    PTK_ERR_INTERNAL = 4, /* anything else */
} ptk_status;

const char* ptk_last_error(void);
void ptk_string_free(char* s);

typedef struct ptk_config ptk_config;  /* resolved run configuration */
typedef struct ptk_bundle ptk_bundle;  /* one sequence: truth and/or detections */
typedef struct ptk_result ptk_result;  /* tracker output plus run report */
typedef struct ptk_report ptk_report;  /* evaluation tallies and rates */
typedef struct ptk_attrs ptk_attrs;    /* ground-truth dynamicity histograms */

/* --- configuration ------------------------------------------------------ */

/* Built-in defaults. */
ptk_status ptk_config_create(ptk_config** out);
/* Defaults, then the file (path may be NULL), then overrides, each a
 * "section.key=value" string. */
ptk_status ptk_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                           ptk_config** out);
ptk_status ptk_config_set(ptk_config* cfg, const char* assignment); /* "section.key=value" */
/* Full echo of the resolved configuration, suitable to re-load. */
ptk_status ptk_config_dump(const ptk_config* cfg, char** out_text);
void ptk_config_free(ptk_config* cfg);

/* --- sequences ---------------------------------------------------------- */

/* Synthesizes one sequence from the config's [simulator] section with seed
 * base_seed + seed_offset. */
ptk_status ptk_bundle_generate(const ptk_config* cfg, uint64_t seed_offset, ptk_bundle** out);
/* Loads tracking-format CSV files; either path may be NULL. */
ptk_status ptk_bundle_load_mot(const char* gt_path, const char* det_path, ptk_bundle** out);
/* Loads pose-format truth (frame,track_id,cx,cy,w,h,visibility). */
ptk_status ptk_bundle_load_poses(const char* pose_path, const char* det_path, ptk_bundle** out);
/* Keeps every factor-th frame and renumbers. */
ptk_status ptk_bundle_decimate(const ptk_bundle* in, int factor, ptk_bundle** out);
/* Concatenates sequences along the frame axis, shifting truth ids so the id
 * spaces stay disjoint; for corpus-level dynamicity summaries. */
ptk_status ptk_bundle_concat(const ptk_bundle* const* bundles, size_t n, ptk_bundle** out);
/* Writes any subset of the three files; NULL paths are skipped. */
ptk_status ptk_bundle_write(const ptk_bundle* bundle, const char* gt_path, const char* det_path,
                            const char* pose_path);
int ptk_bundle_frames(const ptk_bundle* bundle);
void ptk_bundle_free(ptk_bundle* bundle);

/* --- tracking ----------------------------------------------------------- */

/* mode: "finenet", "coarse-byte", "coarse-iou", or NULL for the config's
 * pipeline.mode. finenet uses the bundle's truth to drive the oracle point
 * tracker unless points_path supplies precomputed trajectories. */
ptk_status ptk_track(const ptk_config* cfg, const ptk_bundle* bundle, const char* mode,
                     const char* points_path, ptk_result** out);
ptk_status ptk_result_write(const ptk_result* result, const char* path);
int ptk_result_frames(const ptk_result* result);
int ptk_result_windows(const ptk_result* result);
int ptk_result_fallbacks(const ptk_result* result);
/* First frame of the i-th window that fell back to the coarse result. */
int ptk_result_fallback_at(const ptk_result* result, int i);
double ptk_result_elapsed_ms(const ptk_result* result);
void ptk_result_free(ptk_result* result);

/* --- evaluation --------------------------------------------------------- */

ptk_status ptk_evaluate(const ptk_bundle* gt, const ptk_result* result, ptk_report** out);
/* result_path NULL scores an empty prediction (everything missed). */
ptk_status ptk_evaluate_files(const char* gt_path, const char* result_path, ptk_report** out);
/* Sums tallies across sequences, then re-derives the rates. */
ptk_status ptk_report_merge(const ptk_report* const* reports, size_t n, ptk_report** out);
/* Named values: OWTA, HOTA, DetA, DetRe, AssA, LocA, AssocA, ClsA, TETA
 * (means; append "_0.5" for the 0.5-threshold value), MOTA, IDF1, TP, FP,
 * FN, IDSW, IDTP, IDFP, IDFN, gtDet, predDet. Undefined values return
 * PTK_ERR_DATA. */
ptk_status ptk_report_value(const ptk_report* report, const char* metric, double* out);
ptk_status ptk_reports_csv(const char* const* names, const ptk_report* const* reports, size_t n,
                           char** out_text);
ptk_status ptk_reports_markdown(const char* const* names, const ptk_report* const* reports,
                                size_t n, char** out_text);
void ptk_report_free(ptk_report* report);

/* --- dynamicity attributes ---------------------------------------------- */

ptk_status ptk_attrs_compute(const ptk_bundle* bundle, ptk_attrs** out);
ptk_status ptk_attrs_csv(const ptk_attrs* attrs, char** out_text);
/* name: "adjacent_iou", "aspect_change", "area_change", "motion". Fills up
 * to cap bins; *n_bins receives the true bin count. */
ptk_status ptk_attrs_histogram(const ptk_attrs* attrs, const char* name, double* lo, double* width,
                               long long* counts, size_t cap, size_t* n_bins, double* mean,
                               double* median);
void ptk_attrs_free(ptk_attrs* attrs);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* POITRACK_CAPI_H */
