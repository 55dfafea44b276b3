// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wavesched/wavesched.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSimulation = 2;

struct Failure {
  int code;
  std::string message;
};

int exit_code(ws_status s) {
  return s == WS_ERR_SIMULATION ? kExitSimulation : kExitConfig;
}

void check(ws_status s) {
  if (s != WS_OK) throw Failure{exit_code(s), ws_last_error()};
}

struct ConfigDeleter {
  void operator()(ws_config* c) const { ws_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(ws_result* r) const { ws_result_destroy(r); }
};
using ConfigPtr = std::unique_ptr<ws_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<ws_result, ResultDeleter>;

std::string take(char* s) {
  std::string out(s);
  ws_string_free(s);
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int to_int(const std::string& s, const char* what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Failure{kExitConfig, std::string("invalid ") + what + " '" + s + "'"};
}

/// "8", "1..8", "1,2,4" or "1..4,8".
std::vector<int> parse_threads(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(part, "thread count"));
      continue;
    }
    const int lo = to_int(part.substr(0, dots), "thread range");
    const int hi = to_int(part.substr(dots + 2), "thread range");
    if (lo > hi) throw Failure{kExitConfig, "empty thread range '" + part + "'"};
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  return out;
}

/// "on", "off", "off,on" or "both".
std::vector<int> parse_simd(const std::string& text) {
  if (text == "both") return {0, 1};
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) {
    if (part == "on") out.push_back(1);
    else if (part == "off") out.push_back(0);
    else throw Failure{kExitConfig, "invalid --simd value '" + part + "' (on, off or both)"};
  }
  return out;
}

struct Options {
  std::string config;
  std::string platform;
  std::string policy;
  std::string threads;
  std::optional<int> frames;
  std::string grid;
  std::string workload;
  std::optional<double> mean_wu;
  std::optional<double> sigma;
  std::optional<long long> seed;
  std::string simd;
  std::vector<std::string> set;
  std::string out;
  std::string format = "json";
  std::string targets;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config,
                  "Config file (default: $WAVESCHED_CONFIG, else the bundled calibrated config)");
  cmd->add_option("--platform", o.platform, "Platform config file applied on top of --config");
  cmd->add_option("--frames", o.frames, "Frames to decode");
  cmd->add_option("--grid", o.grid, "CTU grid as RxC (default 17x30)");
  cmd->add_option("--workload", o.workload, "uniform, lognormal or trace:PATH");
  cmd->add_option("--mean-wu", o.mean_wu, "Mean reconstruction work per CTU");
  cmd->add_option("--sigma", o.sigma, "Log-std of lognormal CTU work");
  cmd->add_option("--seed", o.seed, "Workload seed");
  cmd->add_option("--set", o.set, "Extra KEY=VALUE config override (repeatable)");
  cmd->add_option("--out", o.out, "Output file (default: stdout); written atomically");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

void set(ws_config* c, const char* key, const std::string& value) {
  check(ws_config_set(c, key, value.c_str()));
}

ConfigPtr build_config(const Options& o) {
  ws_config* raw = nullptr;
  check(ws_config_create(&raw));
  ConfigPtr cfg(raw);
  std::string path = o.config;
  if (path.empty())
    if (const char* env = std::getenv("WAVESCHED_CONFIG"); env && *env) path = env;
  if (path.empty() && std::filesystem::exists(ws_default_config_path()))
    path = ws_default_config_path();
  if (!path.empty()) check(ws_config_load(cfg.get(), path.c_str()));
  if (!o.platform.empty()) check(ws_config_load(cfg.get(), o.platform.c_str()));
  if (o.frames) set(cfg.get(), "frames", std::to_string(*o.frames));
  if (!o.grid.empty()) set(cfg.get(), "grid", o.grid);
  if (!o.workload.empty()) set(cfg.get(), "workload", o.workload);
  if (o.mean_wu) set(cfg.get(), "mean_wu", std::to_string(*o.mean_wu));
  if (o.sigma) set(cfg.get(), "sigma", std::to_string(*o.sigma));
  if (o.seed) set(cfg.get(), "seed", std::to_string(*o.seed));
  for (const std::string& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Failure{kExitConfig, "--set expects KEY=VALUE, got '" + kv + "'"};
    set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1));
  }
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  check(ws_write_file(o.out.c_str(), text.c_str()));
}

std::string render(const ws_result* r, const Options& o) {
  char* text = nullptr;
  check(ws_result_render(r, o.format == "csv" ? WS_FORMAT_CSV : WS_FORMAT_JSON, &text));
  return take(text);
}

/// 0 when every cell simulated, otherwise the simulation-error exit code.
int cell_status(const ws_result* r) {
  size_t n = 0;
  check(ws_result_cell_count(r, &n));
  for (size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (ws_result_metric(r, i, "fps", &v) != WS_OK) {
      std::cerr << "wavesched: " << ws_last_error() << '\n';
      return kExitSimulation;
    }
  }
  return kExitOk;
}

int cmd_run(const Options& o) {
  ConfigPtr cfg = build_config(o);
  if (!o.policy.empty()) set(cfg.get(), "policy", o.policy);
  if (!o.threads.empty()) {
    const auto t = parse_threads(o.threads);
    if (t.size() != 1) throw Failure{kExitConfig, "run takes a single thread count; use sweep"};
    set(cfg.get(), "threads", std::to_string(t[0]));
  }
  if (!o.simd.empty()) {
    const auto s = parse_simd(o.simd);
    if (s.size() != 1) throw Failure{kExitConfig, "run takes a single --simd value; use sweep"};
    set(cfg.get(), "simd", s[0] ? "on" : "off");
  }
  ws_result* raw = nullptr;
  check(ws_simulate(cfg.get(), &raw));
  ResultPtr res(raw);
  emit(o, render(res.get(), o));
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  ConfigPtr cfg = build_config(o);
  const auto threads = parse_threads(o.threads.empty() ? "1..8" : o.threads);
  const auto simd = parse_simd(o.simd.empty() ? "off" : o.simd);
  const auto names = split(o.policy.empty() ? "big-os,little,static,affinity" : o.policy, ',');
  std::vector<const char*> policies;
  for (const auto& n : names) policies.push_back(n.c_str());
  ws_result* raw = nullptr;
  check(ws_sweep(cfg.get(), threads.data(), threads.size(), policies.data(), policies.size(),
                 simd.data(), simd.size(), &raw));
  ResultPtr res(raw);
  emit(o, render(res.get(), o));
  return cell_status(res.get());
}

int cmd_calibrate(const Options& o, const std::string& report) {
  ConfigPtr cfg = build_config(o);
  ws_config* fitted_raw = nullptr;
  ws_result* res_raw = nullptr;
  check(ws_calibrate(cfg.get(), o.targets.empty() ? nullptr : o.targets.c_str(), &fitted_raw,
                     &res_raw));
  ConfigPtr fitted(fitted_raw);
  ResultPtr res(res_raw);
  char* text = nullptr;
  check(ws_config_serialize(fitted.get(), &text));
  const std::string conf =
      "# Calibrated by `wavesched calibrate`; every platform and workload value below is\n"
      "# fitted to the reference measurements or carried over from the input config.\n" +
      take(text);
  const std::string summary = render(res.get(), o);
  if (o.out.empty()) {
    std::cout << conf;
    std::cerr << summary;
  } else {
    check(ws_write_file(o.out.c_str(), conf.c_str()));
    if (report.empty()) std::cout << summary;
  }
  if (!report.empty()) check(ws_write_file(report.c_str(), summary.c_str()));
  return kExitOk;
}

int cmd_paper_repro(const Options& o) {
  ConfigPtr cfg = build_config(o);
  ws_result* raw = nullptr;
  check(ws_paper_repro(cfg.get(), o.targets.empty() ? nullptr : o.targets.c_str(), &raw));
  ResultPtr res(raw);
  emit(o, render(res.get(), o));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of WPP HEVC decoding on big.LITTLE processors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ws_version());

  Options run_o, sweep_o, cal_o, repro_o;
  std::string report;

  auto* run = app.add_subcommand("run", "Simulate one policy and thread count");
  add_common(run, run_o);
  run->add_option("--policy", run_o.policy, "big-os, little, static or affinity");
  run->add_option("--threads", run_o.threads, "Worker threads");
  run->add_option("--simd", run_o.simd, "on or off");

  auto* sweep = app.add_subcommand("sweep", "Simulate every policy x threads x simd combination");
  add_common(sweep, sweep_o);
  sweep->add_option("--policy,--policies", sweep_o.policy,
                    "Comma-separated policies (default: all four)");
  sweep->add_option("--threads", sweep_o.threads, "Thread counts, e.g. 1..8 or 1,2,4 (default 1..8)");
  sweep->add_option("--simd", sweep_o.simd, "on, off, off,on or both (default off)");

  auto* cal = app.add_subcommand(
      "calibrate", "Fit workload scale, speed ratio and power to reference measurements");
  add_common(cal, cal_o);
  cal->add_option("--targets", cal_o.targets, "Targets CSV (default: bundled measurements)");
  cal->add_option("--report", report, "Also write the residual report to this file");

  auto* repro = app.add_subcommand(
      "paper-repro", "Reproduce the FPS/EPF policy tables and deviations from the targets");
  add_common(repro, repro_o);
  repro->add_option("--targets", repro_o.targets, "Targets CSV (default: bundled measurements)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_o);
    if (*sweep) return cmd_sweep(sweep_o);
    if (*cal) return cmd_calibrate(cal_o, report);
    if (*repro) return cmd_paper_repro(repro_o);
  } catch (const Failure& f) {
    std::cerr << "wavesched: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "wavesched: " << e.what() << '\n';
    return kExitSimulation;
  }
  return kExitConfig;
}
