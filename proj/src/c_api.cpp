// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/wavesched.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wavesched/calibration.hpp"
#include "wavesched/errors.hpp"
#include "wavesched/report_io.hpp"
#include "wavesched/settings.hpp"

struct ws_config {
  wavesched::Settings settings;
};

struct ws_result {
  std::variant<std::vector<wavesched::SweepCell>, wavesched::CalibrationResult,
               wavesched::PaperComparison>
      value;
};

namespace {

thread_local std::string g_last_error;

ws_status fail(ws_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <typename F>
ws_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return WS_OK;
  } catch (const wavesched::ConfigError& e) {
    return fail(WS_ERR_CONFIG, e.what());
  } catch (const wavesched::ParseError& e) {
    return fail(WS_ERR_CONFIG, e.what());
  } catch (const wavesched::IoError& e) {
    return fail(WS_ERR_IO, e.what());
  } catch (const wavesched::SimulationError& e) {
    return fail(WS_ERR_SIMULATION, e.what());
  } catch (const wavesched::DomainError& e) {
    return fail(WS_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(WS_ERR_SIMULATION, "out of memory");
  } catch (const std::exception& e) {
    return fail(WS_ERR_SIMULATION, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wavesched::TargetTable targets_from(const char* path) {
  return wavesched::TargetTable::load(path ? path : WAVESCHED_DEFAULT_TARGETS);
}

}  // namespace

extern "C" {

const char* ws_last_error(void) { return g_last_error.c_str(); }

const char* ws_version(void) { return "1.0.0"; }

const char* ws_default_config_path(void) { return WAVESCHED_DEFAULT_CONFIG; }

const char* ws_default_targets_path(void) { return WAVESCHED_DEFAULT_TARGETS; }

ws_status ws_config_create(ws_config** out) {
  if (!out) return fail(WS_ERR_ARGUMENT, "out is NULL");
  return guarded([&] { *out = new ws_config{}; });
}

void ws_config_destroy(ws_config* config) { delete config; }

ws_status ws_config_load(ws_config* config, const char* path) {
  if (!config || !path) return fail(WS_ERR_ARGUMENT, "config or path is NULL");
  return guarded([&] {
    wavesched::Settings s = config->settings;
    std::ifstream in(path);
    if (!in) throw wavesched::ConfigError("config", 0, std::string("cannot open '") + path + "'");
    wavesched::apply_settings(s, in);
    config->settings = s;
  });
}

ws_status ws_config_set(ws_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(WS_ERR_ARGUMENT, "NULL argument");
  return guarded([&] { wavesched::set_setting(config->settings, key, value); });
}

ws_status ws_config_serialize(const ws_config* config, char** out) {
  if (!config || !out) return fail(WS_ERR_ARGUMENT, "NULL argument");
  return guarded([&] { *out = dup(wavesched::serialize(config->settings)); });
}

ws_status ws_simulate(const ws_config* config, ws_result** out) {
  if (!config || !out) return fail(WS_ERR_ARGUMENT, "NULL argument");
  return guarded([&] {
    const auto& s = config->settings;
    wavesched::SweepCell cell{{s.policy.kind, s.policy.threads, s.simd},
                              wavesched::simulate(s.to_sim_config()).report,
                              {}};
    *out = new ws_result{std::vector<wavesched::SweepCell>{std::move(cell)}};
  });
}

ws_status ws_sweep(const ws_config* config, const int* threads, size_t thread_count,
                   const char* const* policies, size_t policy_count, const int* simd,
                   size_t simd_count, ws_result** out) {
  if (!config || !threads || !policies || !simd || !out)
    return fail(WS_ERR_ARGUMENT, "NULL argument");
  return guarded([&] {
    std::vector<int> t(threads, threads + thread_count);
    std::vector<wavesched::PolicyKind> p;
    for (size_t i = 0; i < policy_count; ++i) {
      if (!policies[i]) throw wavesched::ConfigError("policy", 0, "NULL policy name");
      try {
        p.push_back(wavesched::parse_policy(policies[i]));
      } catch (const wavesched::Error& e) {
        throw wavesched::ConfigError("policy", 0, e.what());
      }
    }
    auto flags = std::make_unique<bool[]>(simd_count);
    for (size_t i = 0; i < simd_count; ++i) flags[i] = simd[i] != 0;
    auto cells = wavesched::run_sweep(config->settings.to_sim_config(), t, p,
                                      std::span<const bool>(flags.get(), simd_count));
    *out = new ws_result{std::move(cells)};
  });
}

ws_status ws_calibrate(const ws_config* config, const char* targets_path, ws_config** out_config,
                       ws_result** out_result) {
  if (!config) return fail(WS_ERR_ARGUMENT, "config is NULL");
  return guarded([&] {
    auto res = wavesched::calibrate(config->settings, targets_from(targets_path));
    if (out_config) *out_config = new ws_config{res.settings};
    if (out_result) *out_result = new ws_result{std::move(res)};
  });
}

ws_status ws_paper_repro(const ws_config* config, const char* targets_path, ws_result** out) {
  if (!config || !out) return fail(WS_ERR_ARGUMENT, "NULL argument");
  return guarded([&] {
    *out = new ws_result{wavesched::paper_repro(config->settings, targets_from(targets_path))};
  });
}

void ws_result_destroy(ws_result* result) { delete result; }

ws_status ws_result_render(const ws_result* result, ws_format format, char** out) {
  if (!result || !out) return fail(WS_ERR_ARGUMENT, "NULL argument");
  if (format != WS_FORMAT_JSON && format != WS_FORMAT_CSV)
    return fail(WS_ERR_ARGUMENT, "unknown format");
  return guarded([&] {
    const auto f = format == WS_FORMAT_JSON ? wavesched::Format::Json : wavesched::Format::Csv;
    std::string text = std::visit(
        [f](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::vector<wavesched::SweepCell>>)
            return wavesched::render_cells(v, f);
          else if constexpr (std::is_same_v<T, wavesched::CalibrationResult>)
            return wavesched::render_calibration(v, f);
          else
            return wavesched::render_comparison(v, f);
        },
        result->value);
    *out = dup(text);
  });
}

ws_status ws_result_cell_count(const ws_result* result, size_t* out) {
  if (!result || !out) return fail(WS_ERR_ARGUMENT, "NULL argument");
  const auto* cells = std::get_if<std::vector<wavesched::SweepCell>>(&result->value);
  *out = cells ? cells->size() : 0;
  g_last_error.clear();
  return WS_OK;
}

ws_status ws_result_metric(const ws_result* result, size_t cell, const char* metric,
                           double* out) {
  if (!result || !metric || !out) return fail(WS_ERR_ARGUMENT, "NULL argument");
  const auto* cells = std::get_if<std::vector<wavesched::SweepCell>>(&result->value);
  if (!cells) return fail(WS_ERR_ARGUMENT, "result holds no simulation cells");
  if (cell >= cells->size()) return fail(WS_ERR_ARGUMENT, "cell index out of range");
  const auto& c = (*cells)[cell];
  if (!c.report) return fail(WS_ERR_SIMULATION, c.error);
  const auto& r = *c.report;
  const std::string m = metric;
  if (m == "fps") *out = r.fps;
  else if (m == "epf_j") *out = r.epf_j;
  else if (m == "energy_j") *out = r.energy_j;
  else if (m == "avg_power_w") *out = r.avg_power_w;
  else if (m == "wall_time_s") *out = r.wall_time_s;
  else if (m == "sampled_energy_j") *out = r.sampled_energy_j;
  else if (m == "migrations") *out = r.migrations;
  else if (m == "frames") *out = r.frames;
  else return fail(WS_ERR_ARGUMENT, "unknown metric '" + m + "'");
  g_last_error.clear();
  return WS_OK;
}

ws_status ws_write_file(const char* path, const char* content) {
  if (!path || !content) return fail(WS_ERR_ARGUMENT, "NULL argument");
  return guarded([&] { wavesched::write_file_atomic(path, content); });
}

void ws_string_free(char* s) { std::free(s); }

}  // extern "C"
