// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "wavesched/analysis.hpp"
#include "wavesched/calibration.hpp"
#include "wavesched/engine.hpp"

namespace wavesched {

enum class Format { Json, Csv };

Format parse_format(std::string_view text);

/// One report per cell. A run is a sweep with a single cell.
std::string render_cells(std::span<const SweepCell> cells, Format format);
std::string render_calibration(const CalibrationResult& result, Format format);
std::string render_comparison(const PaperComparison& comparison, Format format);

/// Writes `content` to a temporary file next to `path` and renames it into place. Throws
/// Error when the file cannot be written.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace wavesched
