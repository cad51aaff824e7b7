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

#ifndef SELD_METRICS_HPP_
#define SELD_METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seld/types.hpp"

namespace seld {

struct MetricThresholds {
  double angular_deg = 20.0;
  double relative_distance = 1.0;
  bool use_angular = true;
  bool use_distance = true;

  void validate() const;
};

// A ground-truth event paired with a prediction of the same class in the same
// frame. Each error is present only when the corresponding metric is enabled.
struct MatchedPair {
  int frame = 0;
  int class_id = 0;
  std::optional<double> angle_deg;
  std::optional<double> relative_distance_error;
  bool true_positive = false;
};

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long gt_events = 0;
  long pred_events = 0;
  std::vector<MatchedPair> pairs;

  MatchCounts& operator+=(const MatchCounts& o);
};

// Frame-based, class-aware matching. Within each (class, frame) cell,
// predictions and references are paired by an optimal assignment that
// minimizes total angular error (relative distance error when angles are not
// evaluated). A pair is a true positive only if it passes every enabled
// threshold; otherwise it counts as one false positive and one false negative.
// Unpaired predictions are false positives, unpaired references false
// negatives.
MatchCounts match_and_count(const Clip& gt, const Clip& pred, const MetricThresholds& thr);

// Optimal assignment for a rectangular cost matrix (rows x cols, row-major).
// Returns, for each row, the assigned column or -1; min(rows, cols) rows are
// assigned and the total cost is minimal.
std::vector<int> solve_assignment(const std::vector<double>& cost, int rows, int cols);

// 2TP / (2TP + FP + FN); 1 when there is nothing to detect and nothing was
// predicted.
double f1_score(long tp, long fp, long fn);

// Mean angular error in degrees over pairs that carry an angle. With no such
// pairs: 180 if `events_exist`, otherwise 0.
double doa_error(std::span<const MatchedPair> pairs, bool events_exist);

// Mean relative distance error over pairs that carry one. With no such pairs:
// 1.0 if `events_exist`, otherwise 0.
double relative_distance_error(std::span<const MatchedPair> pairs, bool events_exist);

// (1/3) * [(1 - F1) + DOAE / 180 + RDE]
double seld_score(double f1, double doae_deg, double rde);
// (1/2) * [(1 - F1) + RDE]
double sed_sde_score(double f1, double rde);

struct MetricsReport {
  double f1 = 0.0;
  std::optional<double> doae_deg;
  std::optional<double> rde;
  std::optional<double> seld;
  std::optional<double> sed_sde;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long matched_pairs = 0;
};

MetricsReport make_report(const MatchCounts& counts, const MetricThresholds& thr);

// Accumulates counts over many clips; the report pools all pairs.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(MetricThresholds thr = {});
  void add(const Clip& gt, const Clip& pred);
  const MatchCounts& counts() const { return counts_; }
  MetricsReport report() const { return make_report(counts_, thr_); }

 private:
  MetricThresholds thr_;
  MatchCounts counts_;
};

std::string format_report_table(const MetricsReport& report);
std::string format_report_kv(const MetricsReport& report);

}  // namespace seld

#endif  // SELD_METRICS_HPP_
