// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#include "wavesched/workload.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "wavesched/errors.hpp"

namespace wavesched {

void KernelParams::validate() const {
  if (!(filter_fraction >= 0.0 && filter_fraction < 1.0))
    throw ConfigError("filter_fraction", 0, "must be in [0, 1)");
  if (filter_split.h < 0 || filter_split.v < 0 || filter_split.sao < 0 ||
      std::abs(filter_split.h + filter_split.v + filter_split.sao - 1.0) > 1e-12)
    throw ConfigError("filter_split", 0, "components must be non-negative and sum to 1");
  if (!(vector_fraction >= 0.0 && vector_fraction <= 1.0))
    throw ConfigError("vector_fraction", 0, "must be in [0, 1]");
  if (!(vector_speedup >= 1.0)) throw ConfigError("vector_speedup", 0, "must be >= 1");
}

CostModel::CostModel(GridDims dims, std::vector<double> recon, KernelParams params)
    : dims_(dims), recon_(std::move(recon)), params_(params) {
  dims.validate();
  params.validate();
  if (recon_.size() != static_cast<size_t>(dims.ctu_count()))
    throw DomainError("cost matrix has " + std::to_string(recon_.size()) + " entries, grid needs " +
                      std::to_string(dims.ctu_count()));
  for (double c : recon_)
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("reconstruction costs must be positive");
}

double CostModel::task_cost(const TaskId& task) const {
  const double recon = recon_cost(task.coord);
  const double phi = params_.filter_fraction;
  const double filter = recon * phi / (1.0 - phi);
  switch (task.phase) {
    case Phase::Recon: return recon;
    case Phase::HFilter: return filter * params_.filter_split.h;
    case Phase::VFilter: return filter * params_.filter_split.v;
    case Phase::Sao: return filter * params_.filter_split.sao;
  }
  return recon;
}

double CostModel::effective_task_cost(const TaskId& task, bool simd) const {
  return effective_cost(task_cost(task), simd, params_.vector_fraction, params_.vector_speedup);
}

double CostModel::total_work() const {
  double sum = 0.0;
  for (double c : recon_) sum += c;
  return sum / (1.0 - params_.filter_fraction);
}

void WorkloadSpec::validate() const {
  if (!(mean_wu > 0.0)) throw ConfigError("mean_wu", 0, "must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("sigma", 0, "must be non-negative");
  if (kind == WorkloadKind::Trace && path.empty())
    throw ConfigError("workload", 0, "trace workload needs a path");
  params.validate();
}

std::vector<CostModel> generate(const WorkloadSpec& spec, GridDims dims, int frames) {
  spec.validate();
  dims.validate();
  if (frames < 1) throw DomainError("need at least one frame");
  if (spec.kind == WorkloadKind::Trace) {
    auto loaded = load_trace(spec.path, spec.params);
    if (static_cast<int>(loaded.size()) < frames)
      throw ConfigError("frames", 0,
                        "trace holds " + std::to_string(loaded.size()) + " frames, " +
                            std::to_string(frames) + " requested");
    if (loaded.front().dims() != dims)
      throw ConfigError("grid", 0,
                        "dimension mismatch: trace is " + std::to_string(loaded.front().dims().rows) +
                            "x" + std::to_string(loaded.front().dims().cols) + ", config is " +
                            std::to_string(dims.rows) + "x" + std::to_string(dims.cols));
    loaded.resize(frames, loaded.front());
    return loaded;
  }

  std::vector<CostModel> out;
  out.reserve(frames);
  std::mt19937_64 rng(spec.seed);
  // E[exp(N(mu, sigma^2))] = exp(mu + sigma^2 / 2) = mean_wu.
  std::normal_distribution<double> normal(0.0, 1.0);
  const double mu_shift = -0.5 * spec.sigma * spec.sigma;
  for (int f = 0; f < frames; ++f) {
    std::vector<double> recon(dims.ctu_count(), spec.mean_wu);
    if (spec.kind == WorkloadKind::Lognormal)
      for (double& c : recon) c = spec.mean_wu * std::exp(mu_shift + spec.sigma * normal(rng));
    out.emplace_back(dims, std::move(recon), spec.params);
  }
  return out;
}

std::vector<CostModel> parse_trace(std::istream& in, KernelParams params) {
  using Key = std::tuple<int, int, int>;
  std::map<Key, double> cells;
  std::string line;
  int lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) {
      const auto b = f.find_first_not_of(" \t\r");
      const auto e = f.find_last_not_of(" \t\r");
      fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
    }
    if (fields.size() != 4) throw ParseError(lineno, "expected 4 comma-separated fields");
    if (!seen_data && fields[0] == "frame") {
      seen_data = true;  // header
      continue;
    }
    seen_data = true;

    int frame = 0, row = 0, col = 0;
    double wu = 0.0;
    try {
      size_t pos = 0;
      frame = std::stoi(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("frame");
      row = std::stoi(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("row");
      col = std::stoi(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("col");
      wu = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument("work_units");
    } catch (const std::exception&) {
      throw ParseError(lineno, "malformed record '" + line + "'");
    }
    if (frame < 0 || row < 0 || col < 0) throw ParseError(lineno, "negative index");
    if (!(wu > 0.0) || !std::isfinite(wu)) throw ParseError(lineno, "work_units must be positive");
    const Key key{frame, row, col};
    if (!cells.emplace(key, wu).second)
      throw ParseError(lineno, "duplicate cell (frame " + std::to_string(frame) + ", row " +
                                   std::to_string(row) + ", col " + std::to_string(col) + ")");
  }
  if (cells.empty()) throw ParseError(0, "trace contains no records");

  int frames = 0;
  GridDims dims{0, 0};
  for (const auto& [key, wu] : cells) {
    frames = std::max(frames, std::get<0>(key) + 1);
    dims.rows = std::max(dims.rows, std::get<1>(key) + 1);
    dims.cols = std::max(dims.cols, std::get<2>(key) + 1);
  }

  std::vector<CostModel> out;
  for (int f = 0; f < frames; ++f) {
    std::vector<double> recon(dims.ctu_count());
    for (int i = 0; i < dims.rows; ++i) {
      for (int j = 0; j < dims.cols; ++j) {
        auto it = cells.find({f, i, j});
        if (it == cells.end())
          throw ParseError(0, "missing cell (frame " + std::to_string(f) + ", row " +
                                  std::to_string(i) + ", col " + std::to_string(j) + ")");
        recon[i * dims.cols + j] = it->second;
      }
    }
    out.emplace_back(dims, std::move(recon), params);
  }
  return out;
}

std::vector<CostModel> load_trace(const std::filesystem::path& path, KernelParams params) {
  std::ifstream in(path);
  if (!in) throw ConfigError("workload", 0, "cannot open trace '" + path.string() + "'");
  return parse_trace(in, params);
}

void write_trace(std::ostream& out, std::span<const CostModel> frames) {
  out << "frame,row,col,work_units\n" << std::setprecision(17);
  for (size_t f = 0; f < frames.size(); ++f) {
    const GridDims dims = frames[f].dims();
    for (int i = 0; i < dims.rows; ++i)
      for (int j = 0; j < dims.cols; ++j)
        out << f << ',' << i << ',' << j << ',' << frames[f].recon_cost({i, j}) << '\n';
  }
}

double effective_cost(double cost, bool simd_on, double vector_fraction, double vector_speedup) {
  if (!simd_on) return cost;
  return cost * ((1.0 - vector_fraction) + vector_fraction / vector_speedup);
}

}  // namespace wavesched
