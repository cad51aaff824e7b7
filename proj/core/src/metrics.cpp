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

#include "seld/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <utility>

#include "seld/error.hpp"

namespace seld {

void MetricThresholds::validate() const {
  if (!(angular_deg > 0.0 && angular_deg <= 180.0))
    throw ValidationError("angular threshold must lie in (0, 180]");
  if (!(relative_distance > 0.0)) throw ValidationError("relative distance threshold must be positive");
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  gt_events += o.gt_events;
  pred_events += o.pred_events;
  pairs.insert(pairs.end(), o.pairs.begin(), o.pairs.end());
  return *this;
}

std::vector<int> solve_assignment(const std::vector<double>& cost, int rows, int cols) {
  if (static_cast<long>(cost.size()) != static_cast<long>(rows) * cols)
    throw ShapeError("cost matrix size does not match its dimensions");
  std::vector<int> result(rows, -1);
  if (rows == 0 || cols == 0) return result;
  if (rows > cols) {
    std::vector<double> transposed(cost.size());
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) transposed[c * rows + r] = cost[r * cols + c];
    const auto col_to_row = solve_assignment(transposed, cols, rows);
    for (int c = 0; c < cols; ++c)
      if (col_to_row[c] >= 0) result[col_to_row[c]] = c;
    return result;
  }
  // Shortest augmenting path with potentials; 1-based, rows <= cols.
  const double inf = std::numeric_limits<double>::infinity();
  const int n = rows, m = cols;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) result[p[j] - 1] = j - 1;
  return result;
}

namespace {

void check_comparable(const Clip& gt, const Clip& pred) {
  if (!(gt.grid() == pred.grid()))
    throw ValidationError("reference and prediction use different frame grids (" +
                          std::to_string(gt.num_frames()) + " vs " +
                          std::to_string(pred.num_frames()) + " frames)");
  if (!(gt.classes() == pred.classes()))
    throw ValidationError("reference and prediction use different class maps");
}

void check_fields(const Clip& clip, const MetricThresholds& thr, const char* which) {
  for (const auto& e : clip.events()) {
    if (thr.use_angular && !e.doa)
      throw ValidationError(std::string(which) + " event without DOA in frame " +
                            std::to_string(e.frame) + " but angular evaluation is enabled");
    if (thr.use_distance && !e.distance)
      throw ValidationError(std::string(which) + " event without distance in frame " +
                            std::to_string(e.frame) + " but distance evaluation is enabled");
  }
}

}  // namespace

MatchCounts match_and_count(const Clip& gt, const Clip& pred, const MetricThresholds& thr) {
  thr.validate();
  check_comparable(gt, pred);
  check_fields(gt, thr, "reference");
  check_fields(pred, thr, "prediction");

  std::map<std::pair<int, int>, std::pair<std::vector<const EventAnnotation*>,
                                          std::vector<const EventAnnotation*>>> cells;
  for (const auto& e : gt.events()) cells[{e.frame, e.class_id}].first.push_back(&e);
  for (const auto& e : pred.events()) cells[{e.frame, e.class_id}].second.push_back(&e);

  MatchCounts out;
  out.gt_events = static_cast<long>(gt.events().size());
  out.pred_events = static_cast<long>(pred.events().size());
  for (const auto& [key, lists] : cells) {
    const auto& [refs, hyps] = lists;
    const int n = static_cast<int>(refs.size());
    const int m = static_cast<int>(hyps.size());
    auto angle = [&](int i, int j) { return angular_distance_deg(*refs[i]->doa, *hyps[j]->doa); };
    auto rel = [&](int i, int j) {
      return std::abs(*hyps[j]->distance - *refs[i]->distance) / *refs[i]->distance;
    };
    std::vector<double> cost(static_cast<std::size_t>(n) * m, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        cost[i * m + j] = thr.use_angular ? angle(i, j) : thr.use_distance ? rel(i, j) : 0.0;
    const auto assignment = solve_assignment(cost, n, m);

    int paired = 0;
    for (int i = 0; i < n; ++i) {
      const int j = assignment[i];
      if (j < 0) continue;
      ++paired;
      MatchedPair pair{key.first, key.second, std::nullopt, std::nullopt, true};
      if (thr.use_angular) {
        pair.angle_deg = angle(i, j);
        pair.true_positive = pair.true_positive && *pair.angle_deg <= thr.angular_deg;
      }
      if (thr.use_distance) {
        pair.relative_distance_error = rel(i, j);
        pair.true_positive = pair.true_positive && *pair.relative_distance_error <= thr.relative_distance;
      }
      if (pair.true_positive) {
        ++out.tp;
      } else {
        ++out.fp;
        ++out.fn;
      }
      out.pairs.push_back(pair);
    }
    out.fp += m - paired;
    out.fn += n - paired;
  }
  return out;
}

double f1_score(long tp, long fp, long fn) {
  const long denom = 2 * tp + fp + fn;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double doa_error(std::span<const MatchedPair> pairs, bool events_exist) {
  double sum = 0.0;
  long n = 0;
  for (const auto& p : pairs) {
    if (!p.angle_deg) continue;
    sum += *p.angle_deg;
    ++n;
  }
  if (n == 0) return events_exist ? 180.0 : 0.0;
  return sum / static_cast<double>(n);
}

double relative_distance_error(std::span<const MatchedPair> pairs, bool events_exist) {
  double sum = 0.0;
  long n = 0;
  for (const auto& p : pairs) {
    if (!p.relative_distance_error) continue;
    sum += *p.relative_distance_error;
    ++n;
  }
  if (n == 0) return events_exist ? 1.0 : 0.0;
  return sum / static_cast<double>(n);
}

double seld_score(double f1, double doae_deg, double rde) {
  return ((1.0 - f1) + doae_deg / 180.0 + rde) / 3.0;
}

double sed_sde_score(double f1, double rde) { return ((1.0 - f1) + rde) / 2.0; }

MetricsReport make_report(const MatchCounts& counts, const MetricThresholds& thr) {
  MetricsReport r;
  r.tp = counts.tp;
  r.fp = counts.fp;
  r.fn = counts.fn;
  r.matched_pairs = static_cast<long>(counts.pairs.size());
  r.f1 = f1_score(counts.tp, counts.fp, counts.fn);
  const bool events_exist = counts.gt_events + counts.pred_events > 0;
  if (thr.use_angular) r.doae_deg = doa_error(counts.pairs, events_exist);
  if (thr.use_distance) r.rde = relative_distance_error(counts.pairs, events_exist);
  if (r.doae_deg && r.rde) r.seld = seld_score(r.f1, *r.doae_deg, *r.rde);
  if (r.rde) r.sed_sde = sed_sde_score(r.f1, *r.rde);
  return r;
}

MetricsAccumulator::MetricsAccumulator(MetricThresholds thr) : thr_(thr) { thr_.validate(); }

void MetricsAccumulator::add(const Clip& gt, const Clip& pred) {
  counts_ += match_and_count(gt, pred, thr_);
}

namespace {
std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}
std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace

std::string format_report_table(const MetricsReport& r) {
  auto row = [](const char* name, const std::string& value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-16s %12s\n", name, value.c_str());
    return std::string(buf);
  };
  std::string out = row("metric", "value");
  out += row("F1", fixed(r.f1, 4));
  out += row("DOAE (deg)", r.doae_deg ? fixed(*r.doae_deg, 2) : "-");
  out += row("RDE", r.rde ? fixed(*r.rde, 4) : "-");
  out += row("SELD score", r.seld ? fixed(*r.seld, 4) : "-");
  out += row("SED-SDE score", r.sed_sde ? fixed(*r.sed_sde, 4) : "-");
  out += row("TP", std::to_string(r.tp));
  out += row("FP", std::to_string(r.fp));
  out += row("FN", std::to_string(r.fn));
  out += row("matched pairs", std::to_string(r.matched_pairs));
  return out;
}

std::string format_report_kv(const MetricsReport& r) {
  std::string out;
  out += "f1=" + full(r.f1) + "\n";
  if (r.doae_deg) out += "doae_deg=" + full(*r.doae_deg) + "\n";
  if (r.rde) out += "rde=" + full(*r.rde) + "\n";
  if (r.seld) out += "seld_score=" + full(*r.seld) + "\n";
  if (r.sed_sde) out += "sed_sde_score=" + full(*r.sed_sde) + "\n";
  out += "tp=" + std::to_string(r.tp) + "\n";
  out += "fp=" + std::to_string(r.fp) + "\n";
  out += "fn=" + std::to_string(r.fn) + "\n";
  out += "matched_pairs=" + std::to_string(r.matched_pairs) + "\n";
  return out;
}

}  // namespace seld
