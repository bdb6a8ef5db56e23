/*
 * shadowseg C interface.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function (NULL is accepted). Every fallible call returns
 * an ss_status; on failure ss_last_error() describes the problem for the
 * calling thread until its next status-returning call.
 */
#ifndef SHADOWSEG_H
#define SHADOWSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SHADOWSEG_BUILDING)
#    define SHADOWSEG_API __declspec(dllexport)
#  else
#    define SHADOWSEG_API __declspec(dllimport)
#  endif
#else
#  define SHADOWSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_IO = 1,          /* file missing, unreadable or unwritable */
  SS_ERR_FORMAT = 2,      /* undecodable or unsupported image */
  SS_ERR_VALIDATION = 3,  /* arguments violate a precondition */
  SS_ERR_BOUNDS = 4,      /* pixel index outside the frame */
  SS_ERR_CALIBRATION = 5, /* a class has no labeled samples */
  SS_ERR_USAGE = 6,       /* bad configuration value; see ss_last_error_field */
  SS_ERR_INTERNAL = 7
} ss_status;

/* Values match the pixel classes written by ss_classify_shadows. */
typedef enum ss_pixel_class {
  SS_CLASS_BACKGROUND = 0,
  SS_CLASS_OBJECT = 1,
  SS_CLASS_CAST = 2,
  SS_CLASS_SELF = 3
} ss_pixel_class;

typedef struct ss_intervals {
  double cast_min;
  double cast_max;
  double self_min;
  double self_max;
} ss_intervals;

typedef struct ss_confusion {
  uint64_t tp, fp, fn, tn;
} ss_confusion;

typedef struct ss_score {
  double precision;
  double recall;
  double f;
} ss_score;

typedef struct ss_frame ss_frame;   /* 8-bit RGB image */
typedef struct ss_mask ss_mask;     /* boolean image */
typedef struct ss_config ss_config; /* pipeline configuration */
typedef struct ss_text ss_text;     /* owned UTF-8 string */

SHADOWSEG_API const char* ss_version(void);
SHADOWSEG_API const char* ss_status_name(ss_status status);
SHADOWSEG_API const char* ss_last_error(void);
/* Offending configuration key of the last SS_ERR_USAGE, "" otherwise. */
SHADOWSEG_API const char* ss_last_error_field(void);

/* ---- frames and masks ---- */

SHADOWSEG_API ss_status ss_frame_load(const char* path, ss_frame** out);
/* rgb holds width*height interleaved R,G,B bytes, row-major. */
SHADOWSEG_API ss_status ss_frame_from_rgb(const uint8_t* rgb, size_t width, size_t height,
                                          ss_frame** out);
SHADOWSEG_API ss_status ss_frame_save(const ss_frame* frame, const char* path);
SHADOWSEG_API size_t ss_frame_width(const ss_frame* frame);
SHADOWSEG_API size_t ss_frame_height(const ss_frame* frame);
/* Copies width*height*3 bytes into dst. */
SHADOWSEG_API ss_status ss_frame_copy_rgb(const ss_frame* frame, uint8_t* dst, size_t dst_len);
/* Channel-mean gray values, width*height doubles. */
SHADOWSEG_API ss_status ss_frame_gray(const ss_frame* frame, double* dst, size_t dst_len);
SHADOWSEG_API void ss_frame_free(ss_frame* frame);

SHADOWSEG_API ss_status ss_mask_load(const char* path, ss_mask** out);
/* bits holds width*height bytes, nonzero = set. */
SHADOWSEG_API ss_status ss_mask_from_bits(const uint8_t* bits, size_t width, size_t height,
                                          ss_mask** out);
SHADOWSEG_API ss_status ss_mask_save(const ss_mask* mask, const char* path);
SHADOWSEG_API size_t ss_mask_width(const ss_mask* mask);
SHADOWSEG_API size_t ss_mask_height(const ss_mask* mask);
SHADOWSEG_API size_t ss_mask_count(const ss_mask* mask);
/* Copies width*height bytes (0/1) into dst. */
SHADOWSEG_API ss_status ss_mask_copy_bits(const ss_mask* mask, uint8_t* dst, size_t dst_len);
SHADOWSEG_API void ss_mask_free(ss_mask* mask);

/* ---- pipeline stages ---- */

/* Mean 3x3 neighborhood distance of the gray frames at (w, h). */
SHADOWSEG_API ss_status ss_mean_neighborhood_distance(const ss_frame* prev, const ss_frame* cur,
                                                      size_t w, size_t h, double* out);
/* motion_frame and motion_mask may each be NULL when not wanted. */
SHADOWSEG_API ss_status ss_segment_motion(const ss_frame* prev, const ss_frame* cur,
                                          double threshold, ss_frame** motion_frame,
                                          ss_mask** motion_mask);
SHADOWSEG_API ss_status ss_fill_holes(const ss_mask* mask, ss_mask** out);
/* se9 is a row-major 3x3 element (nonzero = set) or NULL for the full square. */
SHADOWSEG_API ss_status ss_erode(const ss_mask* mask, const uint8_t* se9, unsigned passes,
                                 ss_mask** out);
SHADOWSEG_API ss_status ss_superimpose(const ss_frame* input, const ss_mask* mask,
                                       ss_frame** out);

/* Row-major 3x3 matrix in, eigenvalues as real/imag parts out. */
SHADOWSEG_API ss_status ss_eigen_values_3x3(const double m9[9], double re[3], double im[3]);
SHADOWSEG_API double ss_eigen_sum(const double m9[9]);

/* Eigen sums over the blob (mask) of a hole-filled frame; values has
 * width*height slots, off-blob slots are written as 0. */
SHADOWSEG_API ss_status ss_eigen_sum_map(const ss_frame* d_hf, const ss_mask* blob,
                                         double* values, size_t len);
/* classes (width*height bytes, ss_pixel_class values) and overlay may each be NULL. */
SHADOWSEG_API ss_status ss_classify_shadows(const ss_frame* d_hf, const ss_mask* blob,
                                            const ss_intervals* intervals, uint8_t* classes,
                                            size_t len, ss_frame** overlay);

/* ---- evaluation ---- */

/* pred holds ss_pixel_class bytes; cls is SS_CLASS_CAST or SS_CLASS_SELF. */
SHADOWSEG_API ss_status ss_confusion_counts(const uint8_t* pred, const ss_mask* gt_cast,
                                            const ss_mask* gt_self, ss_pixel_class cls,
                                            ss_confusion* out);
SHADOWSEG_API ss_status ss_score_counts(const ss_confusion* counts, ss_score* out);

/* ---- configuration and whole-sequence runs ---- */

SHADOWSEG_API ss_status ss_config_create(ss_config** out);
SHADOWSEG_API void ss_config_free(ss_config* cfg);
SHADOWSEG_API ss_status ss_config_load(ss_config* cfg, const char* path);
SHADOWSEG_API ss_status ss_config_set(ss_config* cfg, const char* key, const char* value);
SHADOWSEG_API ss_status ss_config_validate(const ss_config* cfg);
SHADOWSEG_API ss_status ss_config_serialize(const ss_config* cfg, ss_text** out);

/* Processes every frame pair, writes artifacts, and returns the evaluation
 * report text (empty without ground truth). report may be NULL. */
SHADOWSEG_API ss_status ss_run(const ss_config* cfg, ss_text** report);
SHADOWSEG_API ss_status ss_calibrate(const ss_config* cfg, ss_intervals* out);
/* Ranked table, one line per (threshold, intervals) candidate. */
SHADOWSEG_API ss_status ss_sweep(const ss_config* cfg, ss_text** table);
/* Scores existing .dualmap.png overlays against ground truth. */
SHADOWSEG_API ss_status ss_eval(const ss_config* cfg, ss_text** report);

SHADOWSEG_API const char* ss_text_str(const ss_text* text);
SHADOWSEG_API void ss_text_free(ss_text* text);

#ifdef __cplusplus
}
#endif

#endif /* SHADOWSEG_H */
