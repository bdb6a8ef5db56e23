#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "shadowseg/error.hpp"
#include "shadowseg/pipeline.hpp"

namespace fs = std::filesystem;

namespace shadowseg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw UsageError(std::string(key), "expected a real number, got '" + std::string(text) + "'");
  }
  return v;
}

long long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

unsigned parse_unsigned(std::string_view key, std::string_view text) {
  const long long v = parse_integer(key, text);
  if (v < 0 || v > 1'000'000) {
    throw UsageError(std::string(key), "expected a non-negative integer, got '" +
                                           std::string(trim(text)) + "'");
  }
  return static_cast<unsigned>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  std::string t(trim(text));
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw UsageError(std::string(key), "expected a boolean, got '" + t + "'");
}

ShadowIntervals parse_interval_tuple(std::string_view key, std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw UsageError(std::string(key),
                     "interval candidate needs cast_min,cast_max,self_min,self_max, got '" +
                         std::string(trim(text)) + "'");
  }
  return {parse_real(key, parts[0]), parse_real(key, parts[1]), parse_real(key, parts[2]),
          parse_real(key, parts[3])};
}

std::string fmt_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void PipelineConfig::set(std::string_view key_in, std::string_view value_in) {
  const std::string key(trim(key_in));
  const std::string_view value = trim(value_in);

  if (key == "input") {
    input_dir = fs::path(std::string(value));
  } else if (key == "first") {
    first_frame = parse_integer(key, value);
  } else if (key == "last") {
    last_frame = parse_integer(key, value);
  } else if (key == "threshold") {
    threshold = parse_real(key, value);
  } else if (key == "erosion_passes") {
    erosion_passes = parse_unsigned(key, value);
  } else if (key == "structuring_element") {
    if (value == "square") {
      cross_element = false;
    } else if (value == "cross") {
      cross_element = true;
    } else {
      throw UsageError(key, "expected 'square' or 'cross', got '" + std::string(value) + "'");
    }
  } else if (key == "cast_min") {
    cast_min = parse_real(key, value);
  } else if (key == "cast_max") {
    cast_max = parse_real(key, value);
  } else if (key == "self_min") {
    self_min = parse_real(key, value);
  } else if (key == "self_max") {
    self_max = parse_real(key, value);
  } else if (key == "intervals") {
    set_intervals(parse_interval_tuple(key, value));
  } else if (key == "calibrate") {
    calibrate = parse_bool(key, value);
  } else if (key == "percentile") {
    percentile = parse_real(key, value);
  } else if (key == "gt_cast") {
    gt_cast_dir = fs::path(std::string(value));
  } else if (key == "gt_self") {
    gt_self_dir = fs::path(std::string(value));
  } else if (key == "output") {
    output_dir = fs::path(std::string(value));
  } else if (key == "predictions") {
    predictions_dir = fs::path(std::string(value));
  } else if (key == "dataset") {
    dataset = std::string(value);
  } else if (key == "emit_motion") {
    emit_motion = parse_bool(key, value);
  } else if (key == "emit_filled") {
    emit_filled = parse_bool(key, value);
  } else if (key == "emit_dualmap") {
    emit_dualmap = parse_bool(key, value);
  } else if (key == "emit_report") {
    emit_report = parse_bool(key, value);
  } else if (key == "threads") {
    threads = parse_unsigned(key, value);
  } else if (key == "sweep_thresholds") {
    sweep_thresholds.clear();
    if (!value.empty()) {
      for (auto part : split(value, ',')) sweep_thresholds.push_back(parse_real(key, part));
    }
  } else if (key == "sweep_intervals") {
    sweep_intervals.clear();
    if (!value.empty()) {
      for (auto part : split(value, ';')) {
        if (!part.empty()) sweep_intervals.push_back(parse_interval_tuple(key, part));
      }
    }
  } else {
    throw UsageError(key, "unknown configuration key");
  }
}

void PipelineConfig::read(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    set(s.substr(0, eq), s.substr(eq + 1));
  }
}

void PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  read(in);
}

std::string PipelineConfig::serialize() const {
  std::ostringstream os;
  auto line = [&](const char* key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };

  if (!input_dir.empty()) line("input", input_dir.string());
  if (first_frame) line("first", std::to_string(*first_frame));
  if (last_frame) line("last", std::to_string(*last_frame));
  line("threshold", fmt_exact(threshold));
  line("erosion_passes", std::to_string(erosion_passes));
  line("structuring_element", cross_element ? "cross" : "square");
  if (cast_min) line("cast_min", fmt_exact(*cast_min));
  if (cast_max) line("cast_max", fmt_exact(*cast_max));
  if (self_min) line("self_min", fmt_exact(*self_min));
  if (self_max) line("self_max", fmt_exact(*self_max));
  line("calibrate", flag(calibrate));
  line("percentile", fmt_exact(percentile));
  if (!gt_cast_dir.empty()) line("gt_cast", gt_cast_dir.string());
  if (!gt_self_dir.empty()) line("gt_self", gt_self_dir.string());
  if (!output_dir.empty()) line("output", output_dir.string());
  if (!predictions_dir.empty()) line("predictions", predictions_dir.string());
  if (!dataset.empty()) line("dataset", dataset);
  line("emit_motion", flag(emit_motion));
  line("emit_filled", flag(emit_filled));
  line("emit_dualmap", flag(emit_dualmap));
  line("emit_report", flag(emit_report));
  line("threads", std::to_string(threads));
  if (!sweep_thresholds.empty()) {
    std::string v;
    for (double t : sweep_thresholds) v += (v.empty() ? "" : ",") + fmt_exact(t);
    line("sweep_thresholds", v);
  }
  if (!sweep_intervals.empty()) {
    std::string v;
    for (const auto& iv : sweep_intervals) {
      if (!v.empty()) v += ';';
      v += fmt_exact(iv.cast_min) + "," + fmt_exact(iv.cast_max) + "," + fmt_exact(iv.self_min) +
           "," + fmt_exact(iv.self_max);
    }
    line("sweep_intervals", v);
  }
  return os.str();
}

std::optional<ShadowIntervals> PipelineConfig::intervals() const {
  const int given = int(cast_min.has_value()) + int(cast_max.has_value()) +
                    int(self_min.has_value()) + int(self_max.has_value());
  if (given == 0) return std::nullopt;
  if (given != 4) {
    throw UsageError(!cast_min   ? "cast_min"
                     : !cast_max ? "cast_max"
                     : !self_min ? "self_min"
                                 : "self_max",
                     "all four interval bounds must be given together");
  }
  return ShadowIntervals{*cast_min, *cast_max, *self_min, *self_max};
}

void PipelineConfig::set_intervals(const ShadowIntervals& iv) {
  cast_min = iv.cast_min;
  cast_max = iv.cast_max;
  self_min = iv.self_min;
  self_max = iv.self_max;
}

StructuringElement PipelineConfig::structuring_element() const {
  return cross_element ? StructuringElement::cross() : StructuringElement::square();
}

fs::path PipelineConfig::effective_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  return fs::path("shadowseg_out");
}

std::string PipelineConfig::effective_dataset() const {
  if (!dataset.empty()) return dataset;
  fs::path p = input_dir.lexically_normal();
  if (!p.has_filename()) p = p.parent_path();
  return p.filename().empty() ? std::string("dataset") : p.filename().string();
}

void PipelineConfig::validate() const {
  if (!(threshold >= 0.0)) throw UsageError("threshold", "must be >= 0");
  if (!(percentile > 0.0 && percentile < 50.0)) {
    throw UsageError("percentile", "must lie strictly between 0 and 50");
  }
  if (first_frame && last_frame && *first_frame > *last_frame) {
    throw UsageError("first", "frame range is empty (first > last)");
  }
  if (const auto iv = intervals()) {
    try {
      iv->validate();
    } catch (const ValidationError& e) {
      throw UsageError(iv->cast_min > iv->cast_max ? "cast_min" : "self_min", e.what());
    }
  }
  for (double t : sweep_thresholds) {
    if (!(t >= 0.0)) throw UsageError("sweep_thresholds", "thresholds must be >= 0");
  }
  for (const auto& iv : sweep_intervals) {
    try {
      iv.validate();
    } catch (const ValidationError& e) {
      throw UsageError("sweep_intervals", e.what());
    }
  }
  if (gt_cast_dir.empty() != gt_self_dir.empty()) {
    throw UsageError(gt_cast_dir.empty() ? "gt_cast" : "gt_self",
                     "cast and self ground-truth directories must be given together");
  }
  if (calibrate && !has_ground_truth()) {
    throw UsageError("gt_cast", "calibration needs ground-truth directories");
  }
}

}  // namespace shadowseg
