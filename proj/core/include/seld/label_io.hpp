// Copyright 2026 The seld3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELD_LABEL_IO_HPP_
#define SELD_LABEL_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "seld/types.hpp"

namespace seld {

// Label CSV rows are `frame,class,source,azimuth_deg,elevation_deg,distance_m`.
// An optional header line starting with "frame" is skipped. Azimuth and
// elevation may both be left empty (no DOA), and distance may be left empty
// (no distance); prediction files from single-field models use this.
Clip parse_labels(std::string_view text, const FrameGrid& grid, const ClassMap& classes);

// Inverse of parse_labels. No header; one LF-terminated row per annotation.
std::string write_labels(const Clip& clip);

Clip read_label_file(const std::filesystem::path& path, const FrameGrid& grid,
                     const ClassMap& classes);
void write_label_file(const std::filesystem::path& path, const Clip& clip);

// Shortest fixed-point rendering with at most `decimals` fractional digits:
// 1.5 -> "1.5", 0.0 -> "0", -0.0000001 -> "0".
std::string format_decimal(double value, int decimals = 6);

}  // namespace seld

#endif  // SELD_LABEL_IO_HPP_
