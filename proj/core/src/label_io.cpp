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

#include "seld/label_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "seld/error.hpp"
#include "seld/file_io.hpp"

namespace seld {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

int parse_int(std::string_view field, const char* column, int line) {
  int value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end)
    throw ParseError(std::string("expected integer in column '") + column + "', got '" +
                         std::string(field) + "'",
                     line);
  return value;
}

double parse_double(std::string_view field, const char* column, int line) {
  double value = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError(std::string("expected number in column '") + column + "', got '" +
                         std::string(field) + "'",
                     line);
  return value;
}

}  // namespace

Clip parse_labels(std::string_view text, const FrameGrid& grid, const ClassMap& classes) {
  std::vector<EventAnnotation> events;
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (line_no == 1 && fields[0] == "frame") continue;
    if (fields.size() != 6)
      throw ParseError("expected 6 columns, got " + std::to_string(fields.size()), line_no);

    EventAnnotation e;
    e.frame = parse_int(fields[0], "frame", line_no);
    e.class_id = parse_int(fields[1], "class", line_no);
    e.source = parse_int(fields[2], "source", line_no);
    if (e.class_id < 0 || e.class_id >= classes.size())
      throw RangeError("line " + std::to_string(line_no) + ": class index " +
                       std::to_string(e.class_id) + " outside [0, " +
                       std::to_string(classes.size()) + ")");
    if (e.frame < 0 || e.frame >= grid.frames)
      throw RangeError("line " + std::to_string(line_no) + ": frame " +
                       std::to_string(e.frame) + " outside [0, " +
                       std::to_string(grid.frames) + ")");
    const bool has_az = !fields[3].empty();
    const bool has_el = !fields[4].empty();
    if (has_az != has_el)
      throw ParseError("azimuth and elevation must both be present or both empty", line_no);
    if (has_az) {
      const double az = parse_double(fields[3], "azimuth_deg", line_no);
      const double el = parse_double(fields[4], "elevation_deg", line_no);
      e.doa = Vec3::from_spherical(deg_to_rad(az), deg_to_rad(el));
    }
    if (!fields[5].empty()) {
      const double d = parse_double(fields[5], "distance_m", line_no);
      if (!(d > 0.0))
        throw ValidationError("line " + std::to_string(line_no) +
                              ": distance must be positive, got " + std::string(fields[5]));
      e.distance = d;
    }
    events.push_back(e);
  }
  return Clip(classes, grid, std::move(events));
}

std::string format_decimal(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string write_labels(const Clip& clip) {
  std::string out;
  for (const auto& e : clip.events()) {
    out += std::to_string(e.frame);
    out += ',';
    out += std::to_string(e.class_id);
    out += ',';
    out += std::to_string(e.source);
    out += ',';
    if (e.doa) {
      out += format_decimal(rad_to_deg(e.doa->azimuth()));
      out += ',';
      out += format_decimal(rad_to_deg(e.doa->elevation()));
    } else {
      out += ',';
    }
    out += ',';
    if (e.distance) out += format_decimal(*e.distance);
    out += '\n';
  }
  return out;
}

Clip read_label_file(const std::filesystem::path& path, const FrameGrid& grid,
                     const ClassMap& classes) {
  const std::string text = read_file(path);
  try {
    return parse_labels(text, grid, classes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

void write_label_file(const std::filesystem::path& path, const Clip& clip) {
  write_file_atomic(path, write_labels(clip));
}

}  // namespace seld
