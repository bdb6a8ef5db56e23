#include "shadowseg/shadowseg.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "shadowseg/eigen_shadow.hpp"
#include "shadowseg/error.hpp"
#include "shadowseg/evaluation.hpp"
#include "shadowseg/image_io.hpp"
#include "shadowseg/morphology.hpp"
#include "shadowseg/motion.hpp"
#include "shadowseg/pipeline.hpp"

using namespace shadowseg;

struct ss_frame {
  RgbFrame value;
};
struct ss_mask {
  BinaryMask value;
};
struct ss_config {
  PipelineConfig value;
};
struct ss_text {
  std::string value;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_field;

ss_status fail(ss_status status, const char* what, std::string field = {}) {
  g_error = what;
  g_error_field = std::move(field);
  return status;
}

// Translates the active exception into a status code.
ss_status translate() noexcept {
  try {
    throw;
  } catch (const UsageError& e) {
    return fail(SS_ERR_USAGE, e.what(), e.field());
  } catch (const IoError& e) {
    return fail(SS_ERR_IO, e.what());
  } catch (const FormatError& e) {
    return fail(SS_ERR_FORMAT, e.what());
  } catch (const BoundsError& e) {
    return fail(SS_ERR_BOUNDS, e.what());
  } catch (const CalibrationError& e) {
    return fail(SS_ERR_CALIBRATION, e.what());
  } catch (const ValidationError& e) {
    return fail(SS_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SS_ERR_INTERNAL, "unknown exception");
  }
}

template <class F>
ss_status guarded(F&& f) noexcept {
  try {
    f();
    g_error.clear();
    g_error_field.clear();
    return SS_OK;
  } catch (...) {
    return translate();
  }
}

template <class T>
const T& deref(const T* p, const char* name) {
  if (!p) throw ValidationError(std::string(name) + " is NULL");
  return *p;
}

void check_out(const void* p, const char* name) {
  if (!p) throw ValidationError(std::string(name) + " output pointer is NULL");
}

void check_len(std::size_t have, std::size_t need, const char* name) {
  if (have < need) {
    throw ValidationError(std::string(name) + " holds " + std::to_string(have) +
                          " elements, need " + std::to_string(need));
  }
}

Neighborhood3x3 matrix_from(const double* m9) {
  if (!m9) throw ValidationError("matrix is NULL");
  std::array<double, 9> a{};
  std::memcpy(a.data(), m9, sizeof(double) * 9);
  return Neighborhood3x3(a);
}

HoleFilledFrame hole_filled(const ss_frame* d_hf, const ss_mask* blob) {
  const auto& frame = deref(d_hf, "d_hf").value;
  const auto& mask = deref(blob, "blob").value;
  if (!same_size(frame, mask)) throw ValidationError("frame and mask dimensions differ");
  return {frame, mask};
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "1.0.0"; }

const char* ss_status_name(ss_status status) {
  switch (status) {
    case SS_OK: return "ok";
    case SS_ERR_IO: return "io error";
    case SS_ERR_FORMAT: return "format error";
    case SS_ERR_VALIDATION: return "validation error";
    case SS_ERR_BOUNDS: return "bounds error";
    case SS_ERR_CALIBRATION: return "calibration error";
    case SS_ERR_USAGE: return "usage error";
    case SS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ss_last_error(void) { return g_error.c_str(); }
const char* ss_last_error_field(void) { return g_error_field.c_str(); }

ss_status ss_frame_load(const char* path, ss_frame** out) {
  return guarded([&] {
    check_out(out, "frame");
    *out = nullptr;
    if (!path) throw ValidationError("path is NULL");
    *out = new ss_frame{load_frame(path)};
  });
}

ss_status ss_frame_from_rgb(const uint8_t* rgb, size_t width, size_t height, ss_frame** out) {
  return guarded([&] {
    check_out(out, "frame");
    *out = nullptr;
    if (!rgb) throw ValidationError("rgb buffer is NULL");
    std::vector<Rgb> pixels(width * height);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      pixels[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
    }
    *out = new ss_frame{RgbFrame(width, height, std::move(pixels))};
  });
}

ss_status ss_frame_save(const ss_frame* frame, const char* path) {
  return guarded([&] {
    if (!path) throw ValidationError("path is NULL");
    save_frame(deref(frame, "frame").value, path);
  });
}

size_t ss_frame_width(const ss_frame* frame) { return frame ? frame->value.width() : 0; }
size_t ss_frame_height(const ss_frame* frame) { return frame ? frame->value.height() : 0; }

ss_status ss_frame_copy_rgb(const ss_frame* frame, uint8_t* dst, size_t dst_len) {
  return guarded([&] {
    const auto& f = deref(frame, "frame").value;
    check_out(dst, "rgb");
    check_len(dst_len, f.size() * 3, "rgb buffer");
    for (std::size_t i = 0; i < f.size(); ++i) {
      dst[3 * i] = f.pixels()[i].r;
      dst[3 * i + 1] = f.pixels()[i].g;
      dst[3 * i + 2] = f.pixels()[i].b;
    }
  });
}

ss_status ss_frame_gray(const ss_frame* frame, double* dst, size_t dst_len) {
  return guarded([&] {
    const auto& f = deref(frame, "frame").value;
    check_out(dst, "gray");
    check_len(dst_len, f.size(), "gray buffer");
    const GrayFrame g = to_gray(f);
    std::copy(g.values().begin(), g.values().end(), dst);
  });
}

void ss_frame_free(ss_frame* frame) { delete frame; }

ss_status ss_mask_load(const char* path, ss_mask** out) {
  return guarded([&] {
    check_out(out, "mask");
    *out = nullptr;
    if (!path) throw ValidationError("path is NULL");
    *out = new ss_mask{load_mask(path)};
  });
}

ss_status ss_mask_from_bits(const uint8_t* bits, size_t width, size_t height, ss_mask** out) {
  return guarded([&] {
    check_out(out, "mask");
    *out = nullptr;
    if (!bits) throw ValidationError("bits buffer is NULL");
    *out = new ss_mask{BinaryMask(width, height, std::vector<std::uint8_t>(bits, bits + width * height))};
  });
}

ss_status ss_mask_save(const ss_mask* mask, const char* path) {
  return guarded([&] {
    if (!path) throw ValidationError("path is NULL");
    save_mask(deref(mask, "mask").value, path);
  });
}

size_t ss_mask_width(const ss_mask* mask) { return mask ? mask->value.width() : 0; }
size_t ss_mask_height(const ss_mask* mask) { return mask ? mask->value.height() : 0; }
size_t ss_mask_count(const ss_mask* mask) { return mask ? mask->value.count() : 0; }

ss_status ss_mask_copy_bits(const ss_mask* mask, uint8_t* dst, size_t dst_len) {
  return guarded([&] {
    const auto& m = deref(mask, "mask").value;
    check_out(dst, "bits");
    check_len(dst_len, m.size(), "bits buffer");
    std::copy(m.bits().begin(), m.bits().end(), dst);
  });
}

void ss_mask_free(ss_mask* mask) { delete mask; }

ss_status ss_mean_neighborhood_distance(const ss_frame* prev, const ss_frame* cur, size_t w,
                                        size_t h, double* out) {
  return guarded([&] {
    check_out(out, "distance");
    *out = mean_neighborhood_distance(to_gray(deref(prev, "prev").value),
                                      to_gray(deref(cur, "cur").value), w, h);
  });
}

ss_status ss_segment_motion(const ss_frame* prev, const ss_frame* cur, double threshold,
                            ss_frame** motion_frame, ss_mask** motion_mask) {
  return guarded([&] {
    if (motion_frame) *motion_frame = nullptr;
    if (motion_mask) *motion_mask = nullptr;
    MotionFrame m =
        segment_motion(deref(prev, "prev").value, deref(cur, "cur").value, MotionThreshold(threshold));
    if (motion_frame) *motion_frame = new ss_frame{std::move(m.frame)};
    if (motion_mask) *motion_mask = new ss_mask{std::move(m.mask)};
  });
}

ss_status ss_fill_holes(const ss_mask* mask, ss_mask** out) {
  return guarded([&] {
    check_out(out, "mask");
    *out = nullptr;
    *out = new ss_mask{fill_holes(deref(mask, "mask").value)};
  });
}

ss_status ss_erode(const ss_mask* mask, const uint8_t* se9, unsigned passes, ss_mask** out) {
  return guarded([&] {
    check_out(out, "mask");
    *out = nullptr;
    StructuringElement se;
    if (se9) {
      std::array<bool, 9> cells{};
      for (std::size_t i = 0; i < 9; ++i) cells[i] = se9[i] != 0;
      se = StructuringElement(cells);
    }
    *out = new ss_mask{erode(deref(mask, "mask").value, se, passes)};
  });
}

ss_status ss_superimpose(const ss_frame* input, const ss_mask* mask, ss_frame** out) {
  return guarded([&] {
    check_out(out, "frame");
    *out = nullptr;
    HoleFilledFrame f = superimpose(deref(input, "input").value, deref(mask, "mask").value);
    *out = new ss_frame{std::move(f.frame)};
  });
}

ss_status ss_eigen_values_3x3(const double m9[9], double re[3], double im[3]) {
  return guarded([&] {
    check_out(re, "re");
    check_out(im, "im");
    const EigenTriple t = eigen_values_3x3(matrix_from(m9));
    for (std::size_t i = 0; i < 3; ++i) {
      re[i] = t.values[i].real();
      im[i] = t.values[i].imag();
    }
  });
}

double ss_eigen_sum(const double m9[9]) {
  if (!m9) return 0.0;
  return eigen_sum(matrix_from(m9));
}

ss_status ss_eigen_sum_map(const ss_frame* d_hf, const ss_mask* blob, double* values, size_t len) {
  return guarded([&] {
    check_out(values, "values");
    const EigenSumMap map = eigen_sum_map(hole_filled(d_hf, blob));
    check_len(len, map.values().size(), "values buffer");
    std::copy(map.values().begin(), map.values().end(), values);
  });
}

ss_status ss_classify_shadows(const ss_frame* d_hf, const ss_mask* blob,
                              const ss_intervals* intervals, uint8_t* classes, size_t len,
                              ss_frame** overlay) {
  return guarded([&] {
    if (overlay) *overlay = nullptr;
    const auto& iv = deref(intervals, "intervals");
    const HoleFilledFrame f = hole_filled(d_hf, blob);
    ClassifiedFrame c = classify_shadows(eigen_sum_map(f), f,
                                         {iv.cast_min, iv.cast_max, iv.self_min, iv.self_max});
    if (classes) {
      check_len(len, c.classes.classes().size(), "classes buffer");
      for (std::size_t i = 0; i < c.classes.classes().size(); ++i) {
        classes[i] = static_cast<uint8_t>(c.classes.classes()[i]);
      }
    }
    if (overlay) *overlay = new ss_frame{std::move(c.overlay)};
  });
}

ss_status ss_confusion_counts(const uint8_t* pred, const ss_mask* gt_cast, const ss_mask* gt_self,
                              ss_pixel_class cls, ss_confusion* out) {
  return guarded([&] {
    check_out(out, "confusion");
    if (!pred) throw ValidationError("prediction buffer is NULL");
    if (cls != SS_CLASS_CAST && cls != SS_CLASS_SELF) {
      throw ValidationError("class must be SS_CLASS_CAST or SS_CLASS_SELF");
    }
    GroundTruth gt(deref(gt_cast, "gt_cast").value, deref(gt_self, "gt_self").value);
    std::vector<PixelClass> classes(gt.width() * gt.height());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (pred[i] > SS_CLASS_SELF) throw ValidationError("prediction holds an unknown class value");
      classes[i] = static_cast<PixelClass>(pred[i]);
    }
    const ConfusionCounts c =
        confusion(ClassMap(gt.width(), gt.height(), std::move(classes)), gt,
                  cls == SS_CLASS_CAST ? ShadowClass::Cast : ShadowClass::Self);
    *out = {c.tp, c.fp, c.fn, c.tn};
  });
}

ss_status ss_score_counts(const ss_confusion* counts, ss_score* out) {
  return guarded([&] {
    check_out(out, "score");
    const auto& c = deref(counts, "counts");
    const ClassScore s = score({c.tp, c.fp, c.fn, c.tn});
    *out = {s.precision, s.recall, s.f};
  });
}

ss_status ss_config_create(ss_config** out) {
  return guarded([&] {
    check_out(out, "config");
    *out = new ss_config{};
  });
}

void ss_config_free(ss_config* cfg) { delete cfg; }

ss_status ss_config_load(ss_config* cfg, const char* path) {
  return guarded([&] {
    if (!cfg) throw ValidationError("config is NULL");
    if (!path) throw ValidationError("path is NULL");
    cfg->value.load(path);
  });
}

ss_status ss_config_set(ss_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg) throw ValidationError("config is NULL");
    if (!key || !value) throw ValidationError("key and value must not be NULL");
    cfg->value.set(key, value);
  });
}

ss_status ss_config_validate(const ss_config* cfg) {
  return guarded([&] { deref(cfg, "config").value.validate(); });
}

ss_status ss_config_serialize(const ss_config* cfg, ss_text** out) {
  return guarded([&] {
    check_out(out, "text");
    *out = nullptr;
    *out = new ss_text{deref(cfg, "config").value.serialize()};
  });
}

ss_status ss_run(const ss_config* cfg, ss_text** report) {
  return guarded([&] {
    if (report) *report = nullptr;
    RunSummary s = run_pipeline(deref(cfg, "config").value);
    if (report) *report = new ss_text{std::move(s.report_text)};
  });
}

ss_status ss_calibrate(const ss_config* cfg, ss_intervals* out) {
  return guarded([&] {
    check_out(out, "intervals");
    const ShadowIntervals iv = calibrate(deref(cfg, "config").value);
    *out = {iv.cast_min, iv.cast_max, iv.self_min, iv.self_max};
  });
}

ss_status ss_sweep(const ss_config* cfg, ss_text** table) {
  return guarded([&] {
    check_out(table, "text");
    *table = nullptr;
    *table = new ss_text{format_sweep(sweep(deref(cfg, "config").value))};
  });
}

ss_status ss_eval(const ss_config* cfg, ss_text** report) {
  return guarded([&] {
    check_out(report, "text");
    *report = nullptr;
    *report = new ss_text{format_report(evaluate_overlays(deref(cfg, "config").value))};
  });
}

const char* ss_text_str(const ss_text* text) { return text ? text->value.c_str() : ""; }
void ss_text_free(ss_text* text) { delete text; }

}  // extern "C"
