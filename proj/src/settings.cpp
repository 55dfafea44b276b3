// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/settings.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "wavesched/errors.hpp"

namespace wavesched {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double to_double(std::string_view v, std::string_view key, int line) {
  double out = 0.0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size())
    throw ConfigError(std::string(key), line, "expected a number, got '" + std::string(v) + "'");
  return out;
}

template <typename T>
T to_int(std::string_view v, std::string_view key, int line) {
  T out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size())
    throw ConfigError(std::string(key), line, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

void set_core(Cluster& cl, std::string_view field, std::string_view value, std::string_view key,
              int line) {
  CoreType& t = cl.type;
  if (field == "name") t.name = std::string(value);
  else if (field == "cores") cl.cores = to_int<int>(value, key, line);
  else if (field == "freq_ghz") t.freq_ghz = to_double(value, key, line);
  else if (field == "speed_wu_per_s") t.speed_wu_per_s = to_double(value, key, line);
  else if (field == "active_power_w") t.active_power_w = to_double(value, key, line);
  else if (field == "idle_power_w") t.idle_power_w = to_double(value, key, line);
  else if (field == "simd_power_factor") t.simd_power_factor = to_double(value, key, line);
  else throw ConfigError(std::string(key), line, "unknown key");
}

}  // namespace

Settings::Settings() {
  const Platform p = Platform::exynos5422();
  big = p.clusters()[p.big_cluster()];
  little = p.clusters()[p.little_cluster()];
  base_power_w = p.base_power_w();
  sample_interval_s = p.sample_interval_s();
}

Platform Settings::platform() const {
  std::vector<Cluster> clusters;
  if (big.cores > 0) clusters.push_back(big);
  if (little.cores > 0) clusters.push_back(little);
  return Platform(std::move(clusters), base_power_w, sample_interval_s);
}

SimConfig Settings::to_sim_config() const {
  SimConfig c;
  c.platform = platform();
  c.policy = policy;
  c.frames = frames;
  c.dims = dims;
  c.simd = simd;
  c.oversub_penalty = oversub_penalty;
  c.workload = generate(workload, dims, frames);
  c.validate();
  return c;
}

GridDims parse_grid(std::string_view text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw ConfigError("grid", 0, "expected RxC");
  GridDims d;
  d.rows = to_int<int>(trim(text.substr(0, x)), "grid", 0);
  d.cols = to_int<int>(trim(text.substr(x + 1)), "grid", 0);
  d.validate();
  return d;
}

bool parse_on_off(std::string_view text, std::string_view key) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ConfigError(std::string(key), 0, "expected on or off");
}

void set_setting(Settings& s, std::string_view key, std::string_view value, int line) {
  const std::string k(key);
  try {
    if (key.starts_with("big.")) return set_core(s.big, key.substr(4), value, key, line);
    if (key.starts_with("little.")) return set_core(s.little, key.substr(7), value, key, line);
    if (key == "base_power_w") s.base_power_w = to_double(value, key, line);
    else if (key == "sample_interval_s") s.sample_interval_s = to_double(value, key, line);
    else if (key == "speed_ratio") {
      const double r = to_double(value, key, line);
      if (!(r > 1.0)) throw ConfigError(k, line, "big:LITTLE speed ratio must be > 1");
      s.little.type.speed_wu_per_s = s.big.type.speed_wu_per_s / r;
    } else if (key == "policy") s.policy.kind = parse_policy(value);
    else if (key == "threads") s.policy.threads = to_int<int>(value, key, line);
    else if (key == "migration_overhead_s")
      s.policy.migration_overhead_s = to_double(value, key, line);
    else if (key == "workload") {
      if (value == "uniform") s.workload.kind = WorkloadKind::Uniform;
      else if (value == "lognormal") s.workload.kind = WorkloadKind::Lognormal;
      else if (value.starts_with("trace:")) {
        s.workload.kind = WorkloadKind::Trace;
        s.workload.path = std::string(value.substr(6));
      } else {
        throw ConfigError(k, line, "expected uniform, lognormal or trace:PATH");
      }
    } else if (key == "mean_wu") s.workload.mean_wu = to_double(value, key, line);
    else if (key == "sigma") s.workload.sigma = to_double(value, key, line);
    else if (key == "seed") s.workload.seed = to_int<std::uint64_t>(value, key, line);
    else if (key == "filter_fraction")
      s.workload.params.filter_fraction = to_double(value, key, line);
    else if (key == "filter_split") {
      std::vector<double> parts;
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        parts.push_back(to_double(trim(rest.substr(0, comma)), key, line));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      if (parts.size() != 3) throw ConfigError(k, line, "expected h,v,sao");
      s.workload.params.filter_split = {parts[0], parts[1], parts[2]};
    } else if (key == "vector_fraction")
      s.workload.params.vector_fraction = to_double(value, key, line);
    else if (key == "vector_speedup")
      s.workload.params.vector_speedup = to_double(value, key, line);
    else if (key == "frames") s.frames = to_int<int>(value, key, line);
    else if (key == "grid") s.dims = parse_grid(value);
    else if (key == "simd") s.simd = parse_on_off(value, key);
    else if (key == "oversub_penalty") s.oversub_penalty = to_double(value, key, line);
    else throw ConfigError(k, line, "unknown key");
  } catch (const ConfigError& e) {
    if (e.line() > 0 || line == 0) throw;
    throw ConfigError(e.key().empty() ? k : e.key(), line, e.detail());
  } catch (const Error& e) {
    throw ConfigError(k, line, e.what());
  }
}

void apply_settings(Settings& s, std::istream& in) {
  std::string raw;
  int line = 0;
  std::optional<std::string> ratio;
  int ratio_line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", line, "expected key = value");
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("", line, "missing key");
    if (key == "speed_ratio") {
      ratio = std::string(value);
      ratio_line = line;
      continue;
    }
    set_setting(s, key, value, line);
  }
  // Relative to the final big speed, wherever it appears in the file.
  if (ratio) set_setting(s, "speed_ratio", *ratio, ratio_line);
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open '" + path.string() + "'");
  Settings s;
  apply_settings(s, in);
  return s;
}

std::string serialize(const Settings& s) {
  std::ostringstream out;
  auto core = [&](const char* prefix, const Cluster& cl) {
    const CoreType& t = cl.type;
    out << prefix << ".name = " << t.name << '\n'
        << prefix << ".cores = " << cl.cores << '\n'
        << prefix << ".freq_ghz = " << fmt(t.freq_ghz) << '\n'
        << prefix << ".speed_wu_per_s = " << fmt(t.speed_wu_per_s) << '\n'
        << prefix << ".active_power_w = " << fmt(t.active_power_w) << '\n'
        << prefix << ".idle_power_w = " << fmt(t.idle_power_w) << '\n'
        << prefix << ".simd_power_factor = " << fmt(t.simd_power_factor) << '\n';
  };
  out << "# platform\n";
  out << "base_power_w = " << fmt(s.base_power_w) << '\n';
  out << "sample_interval_s = " << fmt(s.sample_interval_s) << '\n';
  core("big", s.big);
  core("little", s.little);
  out << "# big.speed_wu_per_s / little.speed_wu_per_s = " << fmt(s.speed_ratio()) << '\n';
  out << "\n# policy\n";
  out << "policy = " << to_string(s.policy.kind) << '\n';
  out << "threads = " << s.policy.threads << '\n';
  out << "migration_overhead_s = " << fmt(s.policy.migration_overhead_s) << '\n';
  out << "\n# workload\n";
  switch (s.workload.kind) {
    case WorkloadKind::Uniform: out << "workload = uniform\n"; break;
    case WorkloadKind::Lognormal: out << "workload = lognormal\n"; break;
    case WorkloadKind::Trace: out << "workload = trace:" << s.workload.path.string() << '\n'; break;
  }
  const KernelParams& k = s.workload.params;
  out << "mean_wu = " << fmt(s.workload.mean_wu) << '\n';
  out << "sigma = " << fmt(s.workload.sigma) << '\n';
  out << "seed = " << s.workload.seed << '\n';
  out << "filter_fraction = " << fmt(k.filter_fraction) << '\n';
  out << "filter_split = " << fmt(k.filter_split.h) << ',' << fmt(k.filter_split.v) << ','
      << fmt(k.filter_split.sao) << '\n';
  out << "vector_fraction = " << fmt(k.vector_fraction) << '\n';
  out << "vector_speedup = " << fmt(k.vector_speedup) << '\n';
  out << "\n# run\n";
  out << "frames = " << s.frames << '\n';
  out << "grid = " << s.dims.rows << 'x' << s.dims.cols << '\n';
  out << "simd = " << (s.simd ? "on" : "off") << '\n';
  out << "oversub_penalty = " << fmt(s.oversub_penalty) << '\n';
  return out.str();
}

}  // namespace wavesched
