#include "shadowseg/evaluation.hpp"

#include <cstdio>

#include "shadowseg/error.hpp"

namespace shadowseg {

const char* to_string(ShadowClass c) noexcept { return c == ShadowClass::Cast ? "cast" : "self"; }

ConfusionCounts confusion(const ClassMap& pred, const GroundTruth& truth, ShadowClass cls) {
  if (!same_size(pred, truth)) {
    throw ValidationError("prediction is " + std::to_string(pred.width()) + "x" +
                          std::to_string(pred.height()) + ", ground truth is " +
                          std::to_string(truth.width()) + "x" + std::to_string(truth.height()));
  }
  const PixelClass want = cls == ShadowClass::Cast ? PixelClass::CastShadow : PixelClass::SelfShadow;
  const auto labels = (cls == ShadowClass::Cast ? truth.cast() : truth.self()).bits();
  const auto classes = pred.classes();
  ConfusionCounts c;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const bool p = classes[i] == want;
    const bool g = labels[i] != 0;
    if (p && g) {
      ++c.tp;
    } else if (p) {
      ++c.fp;
    } else if (g) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

ClassScore score(const ConfusionCounts& c) noexcept {
  ClassScore s;
  const double tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) s.precision = tp / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) s.recall = tp / static_cast<double>(c.tp + c.fn);
  if (s.precision + s.recall > 0.0) {
    s.f = 2.0 * (s.precision * s.recall) / (s.precision + s.recall);
  }
  return s;
}

FrameScore score_frame(std::string frame_id, const ClassMap& pred, const GroundTruth& truth) {
  FrameScore fs;
  fs.frame_id = std::move(frame_id);
  fs.cast_counts = confusion(pred, truth, ShadowClass::Cast);
  fs.self_counts = confusion(pred, truth, ShadowClass::Self);
  if (!fs.cast_counts.degenerate()) fs.cast = score(fs.cast_counts);
  if (!fs.self_counts.degenerate()) fs.self = score(fs.self_counts);
  return fs;
}

DatasetReport aggregate(std::string dataset, std::vector<FrameScore> frames) {
  if (frames.empty()) throw ValidationError("no frames to aggregate for dataset '" + dataset + "'");
  DatasetReport r;
  r.dataset = std::move(dataset);
  r.frames = std::move(frames);
  double cast_sum = 0.0;
  double self_sum = 0.0;
  for (const auto& f : r.frames) {
    if (f.cast) {
      cast_sum += f.cast->f;
      ++r.cast_frames;
    }
    if (f.self) {
      self_sum += f.self->f;
      ++r.self_frames;
    }
  }
  if (r.cast_frames) r.mean_cast_f = cast_sum / static_cast<double>(r.cast_frames);
  if (r.self_frames) r.mean_self_f = self_sum / static_cast<double>(r.self_frames);
  return r;
}

std::optional<double> combined_mean_f(const DatasetReport& r) noexcept {
  if (r.mean_cast_f && r.mean_self_f) return (*r.mean_cast_f + *r.mean_self_f) / 2.0;
  if (r.mean_cast_f) return r.mean_cast_f;
  return r.mean_self_f;
}

namespace {

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_real(*v) : "n/a"; }

void write_record(std::ostream& os, const std::string& frame, ShadowClass cls,
                  const ConfusionCounts& c, const std::optional<ClassScore>& s) {
  os << frame << '\t' << to_string(cls) << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t';
  if (s) {
    os << fmt_real(s->precision) << '\t' << fmt_real(s->recall) << '\t' << fmt_real(s->f);
  } else {
    os << "n/a\tn/a\tn/a";
  }
  os << '\n';
}

}  // namespace

void write_report(std::ostream& os, std::span<const DatasetReport> reports) {
  os << "# frame\tclass\ttp\tfp\tfn\tprecision\trecall\tf\n";
  for (const auto& r : reports) {
    for (const auto& f : r.frames) {
      write_record(os, f.frame_id, ShadowClass::Cast, f.cast_counts, f.cast);
      write_record(os, f.frame_id, ShadowClass::Self, f.self_counts, f.self);
    }
  }
  os << "\n# summary\nDataset\tF Cast shadow\tF Self shadow\n";
  std::optional<double> cast_total;
  std::optional<double> self_total;
  std::size_t cast_n = 0;
  std::size_t self_n = 0;
  for (const auto& r : reports) {
    os << r.dataset << '\t' << fmt_opt(r.mean_cast_f) << '\t' << fmt_opt(r.mean_self_f) << '\n';
    if (r.mean_cast_f) {
      cast_total = cast_total.value_or(0.0) + *r.mean_cast_f;
      ++cast_n;
    }
    if (r.mean_self_f) {
      self_total = self_total.value_or(0.0) + *r.mean_self_f;
      ++self_n;
    }
  }
  if (reports.size() > 1) {
    if (cast_total) *cast_total /= static_cast<double>(cast_n);
    if (self_total) *self_total /= static_cast<double>(self_n);
    os << "Mean\t" << fmt_opt(cast_total) << '\t' << fmt_opt(self_total) << '\n';
  }
}

}  // namespace shadowseg
