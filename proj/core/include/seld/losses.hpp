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

#ifndef SELD_LOSSES_HPP_
#define SELD_LOSSES_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "seld/representations.hpp"

namespace seld {

enum class SdeLossKind { kMse, kMspe, kMape };

SdeLossKind parse_sde_loss_kind(std::string_view name);  // "mse", "mspe", "mape"
std::string sde_loss_kind_name(SdeLossKind kind);

// Weights of the multi-objective sums, one pair/triple per representation:
//   sed-doa      beta[0]*L_sed + beta[1]*L_doa
//   sed-sde      gamma[0]*L_sed + gamma[1]*L_sde
//   sed-sce      eta[0]*L_sed + eta[1]*L_sce
//   sed-doa-sde  lambda[0]*L_sed + lambda[1]*L_doa + lambda[2]*L_sde
// Defaults are the best-performing settings reported for each model.
struct LossWeights {
  std::array<double, 2> beta{0.1, 1.0};
  std::array<double, 2> gamma{0.1, 2.0};
  std::array<double, 2> eta{1.0, 1.0};
  std::array<double, 3> lambda{0.1, 1.0, 2.0};
};

struct LossComponent {
  std::string name;
  double weight = 0.0;
  double value = 0.0;
};

struct LossValue {
  double total = 0.0;
  std::vector<LossComponent> components;

  // Value of the named component; throws if absent.
  double component(std::string_view name) const;
};

constexpr double kBceEpsilon = 1e-7;
constexpr double kPercentErrorFloor = 1e-6;

// All losses below average over every (class, frame) cell, active or not.
// pred/gt are T x C; vector-valued inputs are T x 3C in component-major
// column order, masked by the T x C ground-truth activity.

double bce_sed(const Matrix& pred_a, const Matrix& gt_a);
Matrix bce_sed_gradient(const Matrix& pred_a, const Matrix& gt_a);

double mse_doa(const Matrix& pred_r, const Matrix& gt_r, const Matrix& gt_a);
Matrix mse_doa_gradient(const Matrix& pred_r, const Matrix& gt_r, const Matrix& gt_a);

double sde_loss(SdeLossKind kind, const Matrix& pred_d, const Matrix& gt_d, const Matrix& gt_a);
Matrix sde_loss_gradient(SdeLossKind kind, const Matrix& pred_d, const Matrix& gt_d,
                         const Matrix& gt_a);

double sce_loss(const Matrix& pred_s, const Matrix& gt_s, const Matrix& gt_a);
Matrix sce_loss_gradient(const Matrix& pred_s, const Matrix& gt_s, const Matrix& gt_a);

// Plain mean squared error over every element of the multi-ACCDOA tensor.
double accdoa_mse(const Matrix& pred, const Matrix& gt);
Matrix accdoa_mse_gradient(const Matrix& pred, const Matrix& gt);

struct LossConfig {
  LossWeights weights;
  SdeLossKind sde_kind = SdeLossKind::kMspe;
};

// Weighted sum matching the representation of `pred`; `gt` must be the
// encoded target of the same format.
LossValue joint_loss(const TargetTensor& pred, const TargetTensor& gt, const LossConfig& cfg);

struct LossWithGradient {
  LossValue value;
  std::vector<Matrix> gradients;  // d total / d branch output, one per branch
};
LossWithGradient joint_loss_with_gradient(const TargetTensor& pred, const TargetTensor& gt,
                                          const LossConfig& cfg);

}  // namespace seld

#endif  // SELD_LOSSES_HPP_
