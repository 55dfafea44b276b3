// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "json.hpp"
#include "wavesched/errors.hpp"

namespace wavesched {

using nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

ordered_json report_json(const SimReport& r) {
  ordered_json j;
  j["frames"] = r.frames;
  j["wall_time_s"] = r.wall_time_s;
  j["fps"] = r.fps;
  j["energy_j"] = r.energy_j;
  j["epf_j"] = r.epf_j;
  j["avg_power_w"] = r.avg_power_w;
  j["sampled_energy_j"] = r.sampled_energy_j;
  j["migrations"] = r.migrations;
  j["utilization"] = r.utilization;
  j["busy_s"] = r.busy_s;
  j["core_energy_j"] = r.core_energy_j;
  j["power_samples"] = r.power_samples;
  return j;
}

ordered_json deviation_json(const Deviation& d) {
  return {{"metric", to_string(d.target.metric)},
          {"policy", to_string(d.target.policy)},
          {"threads", d.target.threads},
          {"simd", d.target.simd},
          {"target", d.target.value},
          {"simulated", d.simulated},
          {"delta_pct", d.delta_pct}};
}

void deviation_csv(std::ostream& out, std::span<const Deviation> rows) {
  out << "metric,policy,threads,simd,target,simulated,delta_pct\n";
  for (const Deviation& d : rows)
    out << to_string(d.target.metric) << ',' << to_string(d.target.policy) << ','
        << d.target.threads << ',' << (d.target.simd ? "on" : "off") << ','
        << num(d.target.value) << ',' << num(d.simulated) << ',' << num(d.delta_pct) << '\n';
}

ordered_json table_json(std::span<const PolicyTableRow> rows) {
  ordered_json out = ordered_json::array();
  for (const PolicyTableRow& r : rows)
    out.push_back({{"threads", r.threads},
                   {"big_os", r.big_os},
                   {"static", r.stat},
                   {"static_vs_big_os_pct", r.stat_vs_big_os},
                   {"affinity", r.affinity},
                   {"affinity_vs_big_os_pct", r.affinity_vs_big_os},
                   {"affinity_vs_static_pct", r.affinity_vs_static},
                   {"affinity_simd", r.affinity_simd},
                   {"affinity_simd_vs_static_pct", r.affinity_simd_vs_static},
                   {"affinity_simd_vs_affinity_pct", r.affinity_simd_vs_affinity}});
  return out;
}

void table_csv(std::ostream& out, const char* metric, std::span<const PolicyTableRow> rows) {
  for (const PolicyTableRow& r : rows)
    out << metric << ',' << r.threads << ',' << num(r.big_os) << ',' << num(r.stat) << ','
        << num(r.stat_vs_big_os) << ',' << num(r.affinity) << ',' << num(r.affinity_vs_big_os)
        << ',' << num(r.affinity_vs_static) << ',' << num(r.affinity_simd) << ','
        << num(r.affinity_simd_vs_static) << ',' << num(r.affinity_simd_vs_affinity) << '\n';
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw ConfigError("format", 0, "expected csv or json");
}

std::string render_cells(std::span<const SweepCell> cells, Format format) {
  if (format == Format::Json) {
    ordered_json arr = ordered_json::array();
    for (const SweepCell& c : cells) {
      ordered_json j{{"policy", to_string(c.key.policy)},
                     {"threads", c.key.threads},
                     {"simd", c.key.simd}};
      if (c.report) j.update(report_json(*c.report));
      else j["error"] = c.error;
      arr.push_back(std::move(j));
    }
    ordered_json doc;
    if (cells.size() == 1) {
      doc["kind"] = "run";
      for (auto& [k, v] : arr[0].items()) doc[k] = v;
    } else {
      doc["kind"] = "sweep";
      doc["cells"] = std::move(arr);
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "policy,threads,simd,frames,wall_time_s,fps,energy_j,epf_j,avg_power_w,"
         "sampled_energy_j,migrations,error\n";
  for (const SweepCell& c : cells) {
    out << to_string(c.key.policy) << ',' << c.key.threads << ',' << (c.key.simd ? "on" : "off");
    if (c.report) {
      const SimReport& r = *c.report;
      out << ',' << r.frames << ',' << num(r.wall_time_s) << ',' << num(r.fps) << ','
          << num(r.energy_j) << ',' << num(r.epf_j) << ',' << num(r.avg_power_w) << ','
          << num(r.sampled_energy_j) << ',' << r.migrations << ",\n";
    } else {
      std::string e = c.error;
      for (char& ch : e)
        if (ch == ',' || ch == '\n') ch = ';';
      out << ",,,,,,,,," << e << '\n';
    }
  }
  return out.str();
}

std::string render_calibration(const CalibrationResult& r, Format format) {
  const std::pair<const char*, double> params[] = {
      {"mean_wu", r.mean_wu},
      {"speed_ratio", r.speed_ratio},
      {"vector_speedup", r.vector_speedup},
      {"base_power_w", r.base_power_w},
      {"big_active_power_w", r.big_active_power_w},
      {"little_active_power_w", r.little_active_power_w},
      {"simd_power_factor", r.simd_power_factor},
  };
  if (format == Format::Json) {
    ordered_json doc;
    doc["kind"] = "calibration";
    ordered_json p;
    for (const auto& [k, v] : params) p[k] = v;
    doc["parameters"] = std::move(p);
    ordered_json res = ordered_json::array();
    for (const Deviation& d : r.residuals) res.push_back(deviation_json(d));
    doc["residuals"] = std::move(res);
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& [k, v] : params) out << "# " << k << " = " << num(v) << '\n';
  deviation_csv(out, r.residuals);
  return out.str();
}

std::string render_comparison(const PaperComparison& c, Format format) {
  if (format == Format::Json) {
    ordered_json doc;
    doc["kind"] = "paper_repro";
    doc["fps"] = table_json(c.fps);
    doc["epf"] = table_json(c.epf);
    ordered_json dev = ordered_json::array();
    for (const Deviation& d : c.deviations) dev.push_back(deviation_json(d));
    doc["deviations"] = std::move(dev);
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "metric,threads,big_os,static,static_vs_big_os_pct,affinity,affinity_vs_big_os_pct,"
         "affinity_vs_static_pct,affinity_simd,affinity_simd_vs_static_pct,"
         "affinity_simd_vs_affinity_pct\n";
  table_csv(out, "fps", c.fps);
  table_csv(out, "epf", c.epf);
  out << '\n';
  deviation_csv(out, c.deviations);
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp =
      dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot replace '" + path.string() + "'");
  }
}

}  // namespace wavesched
