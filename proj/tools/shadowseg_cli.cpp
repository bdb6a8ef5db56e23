// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "shadowseg/shadowseg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(ss_config* c) const { ss_config_free(c); }
};
struct TextDeleter {
  void operator()(ss_text* t) const { ss_text_free(t); }
};
using ConfigPtr = std::unique_ptr<ss_config, ConfigDeleter>;
using TextPtr = std::unique_ptr<ss_text, TextDeleter>;

int report_failure(ss_status status) {
  std::cerr << "shadowseg: " << ss_status_name(status) << ": " << ss_last_error() << '\n';
  return status == SS_ERR_USAGE ? kExitUsage : kExitRuntime;
}

// Flag values captured as text and forwarded to ss_config_set under `key`.
struct Forward {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

struct CommonOptions {
  std::string config_file;
  std::vector<Forward> forwards;
  bool calibrate = false;
  CLI::Option* calibrate_opt = nullptr;
};

void add_forward(CLI::App& app, std::vector<Forward>& fw, const std::string& flag,
                 const std::string& key, const std::string& help) {
  fw.push_back({key, {}, nullptr});
  // Pointers into the vector stay valid because it is reserved up front.
  fw.back().option = app.add_option(flag, fw.back().value, help);
}

void add_common(CLI::App& app, CommonOptions& o) {
  o.forwards.reserve(32);
  app.add_option("-c,--config", o.config_file, "key = value configuration file")
      ->check(CLI::ExistingFile);
  add_forward(app, o.forwards, "-i,--input", "input", "directory of sequentially numbered frames");
  add_forward(app, o.forwards, "--first", "first", "first frame number (inclusive)");
  add_forward(app, o.forwards, "--last", "last", "last frame number (inclusive)");
  add_forward(app, o.forwards, "-t,--threshold", "threshold", "motion threshold T (default 10)");
  add_forward(app, o.forwards, "--erosion-passes", "erosion_passes", "erosion passes (default 1)");
  add_forward(app, o.forwards, "--structuring-element", "structuring_element",
              "square or cross (default square)");
  add_forward(app, o.forwards, "--cast-min", "cast_min", "cast-shadow interval lower bound");
  add_forward(app, o.forwards, "--cast-max", "cast_max", "cast-shadow interval upper bound");
  add_forward(app, o.forwards, "--self-min", "self_min", "self-shadow interval lower bound");
  add_forward(app, o.forwards, "--self-max", "self_max", "self-shadow interval upper bound");
  add_forward(app, o.forwards, "-p,--percentile", "percentile",
              "calibration trim percentile in (0, 50) (default 5)");
  add_forward(app, o.forwards, "--gt-cast", "gt_cast", "directory of cast-shadow masks");
  add_forward(app, o.forwards, "--gt-self", "gt_self", "directory of self-shadow masks");
  add_forward(app, o.forwards, "-o,--output", "output",
              "output directory (default $SHADOWSEG_OUTPUT_DIR or ./shadowseg_out)");
  add_forward(app, o.forwards, "--dataset", "dataset", "dataset name used in reports");
  add_forward(app, o.forwards, "--emit-motion", "emit_motion", "write <id>.motion.png (true/false)");
  add_forward(app, o.forwards, "--emit-filled", "emit_filled", "write <id>.filled.png (true/false)");
  add_forward(app, o.forwards, "--emit-dualmap", "emit_dualmap",
              "write <id>.dualmap.png (true/false)");
  add_forward(app, o.forwards, "--emit-report", "emit_report", "write report.txt (true/false)");
  add_forward(app, o.forwards, "-j,--threads", "threads", "worker threads, 0 = all cores");
  add_forward(app, o.forwards, "--intervals", "intervals",
              "cast_min,cast_max,self_min,self_max in one flag");
}

ss_status set(ss_config* cfg, const std::string& key, const std::string& value) {
  return ss_config_set(cfg, key.c_str(), value.c_str());
}

// Config file first, then explicit flags on top.
ss_status build_config(const CommonOptions& o, ss_config* cfg) {
  ss_status st = SS_OK;
  if (!o.config_file.empty() && (st = ss_config_load(cfg, o.config_file.c_str())) != SS_OK) {
    return st;
  }
  for (const auto& f : o.forwards) {
    if (f.option && f.option->count() > 0 && (st = set(cfg, f.key, f.value)) != SS_OK) return st;
  }
  if (o.calibrate_opt && o.calibrate_opt->count() > 0 && (st = set(cfg, "calibrate", "true")) != SS_OK) {
    return st;
  }
  return SS_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-object and cast/self shadow segmentation for frame sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ss_version()));

  CommonOptions run_o, cal_o, sweep_o, eval_o;
  auto* run = app.add_subcommand("run", "segment every frame pair and write masks/overlays");
  add_common(*run, run_o);
  run_o.calibrate_opt =
      run->add_flag("--calibrate", run_o.calibrate, "derive intervals from the ground truth first");

  auto* cal = app.add_subcommand("calibrate", "derive shadow intervals from ground truth");
  add_common(*cal, cal_o);
  std::string cal_write;
  cal->add_option("-w,--write", cal_write, "also write the intervals to this config file");

  auto* sw = app.add_subcommand("sweep", "rank threshold/interval candidates by mean F-score");
  add_common(*sw, sweep_o);
  std::string sweep_thresholds;
  std::vector<std::string> sweep_candidates;
  auto* thr_opt = sw->add_option("--thresholds", sweep_thresholds, "comma-separated T values");
  auto* cand_opt = sw->add_option("--candidate", sweep_candidates,
                                  "cast_min,cast_max,self_min,self_max (repeatable)");

  auto* ev = app.add_subcommand("eval", "score existing .dualmap.png overlays");
  add_common(*ev, eval_o);
  std::string predictions;
  ev->add_option("--predictions", predictions, "directory of <id>.dualmap.png overlays")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  ss_config* raw = nullptr;
  if (ss_config_create(&raw) != SS_OK) return report_failure(SS_ERR_INTERNAL);
  ConfigPtr cfg(raw);
  ss_status st = SS_OK;

  if (run->parsed()) {
    if ((st = build_config(run_o, cfg.get())) != SS_OK) return report_failure(st);
    ss_text* report = nullptr;
    if ((st = ss_run(cfg.get(), &report)) != SS_OK) return report_failure(st);
    TextPtr text(report);
    std::cout << ss_text_str(text.get());
    return kExitOk;
  }

  if (cal->parsed()) {
    if ((st = build_config(cal_o, cfg.get())) != SS_OK) return report_failure(st);
    ss_intervals iv{};
    if ((st = ss_calibrate(cfg.get(), &iv)) != SS_OK) return report_failure(st);
    char buf[256];
    std::snprintf(buf, sizeof buf, "cast_min = %.17g\ncast_max = %.17g\nself_min = %.17g\nself_max = %.17g\n",
                  iv.cast_min, iv.cast_max, iv.self_min, iv.self_max);
    std::cout << buf;
    if (!cal_write.empty()) {
      std::ofstream out(cal_write);
      out << buf;
      if (!out) {
        std::cerr << "shadowseg: io error: cannot write " << cal_write << '\n';
        return kExitRuntime;
      }
    }
    return kExitOk;
  }

  if (sw->parsed()) {
    if ((st = build_config(sweep_o, cfg.get())) != SS_OK) return report_failure(st);
    if (thr_opt->count() > 0 && (st = set(cfg.get(), "sweep_thresholds", sweep_thresholds)) != SS_OK) {
      return report_failure(st);
    }
    if (cand_opt->count() > 0) {
      std::string joined;
      for (const auto& c : sweep_candidates) joined += (joined.empty() ? "" : ";") + c;
      if ((st = set(cfg.get(), "sweep_intervals", joined)) != SS_OK) return report_failure(st);
    }
    ss_text* table = nullptr;
    if ((st = ss_sweep(cfg.get(), &table)) != SS_OK) return report_failure(st);
    TextPtr text(table);
    std::cout << ss_text_str(text.get());
    return kExitOk;
  }

  if ((st = build_config(eval_o, cfg.get())) != SS_OK) return report_failure(st);
  if ((st = set(cfg.get(), "predictions", predictions)) != SS_OK) return report_failure(st);
  ss_text* report = nullptr;
  if ((st = ss_eval(cfg.get(), &report)) != SS_OK) return report_failure(st);
  TextPtr text(report);
  std::cout << ss_text_str(text.get());
  return kExitOk;
}
