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

#include "seld/losses.hpp"

#include <algorithm>
#include <cmath>

#include "seld/error.hpp"

namespace seld {

SdeLossKind parse_sde_loss_kind(std::string_view name) {
  if (name == "mse") return SdeLossKind::kMse;
  if (name == "mspe") return SdeLossKind::kMspe;
  if (name == "mape") return SdeLossKind::kMape;
  throw ValidationError("unknown SDE loss '" + std::string(name) + "' (expected mse, mspe or mape)");
}

std::string sde_loss_kind_name(SdeLossKind kind) {
  switch (kind) {
    case SdeLossKind::kMse: return "mse";
    case SdeLossKind::kMspe: return "mspe";
    case SdeLossKind::kMape: return "mape";
  }
  return "unknown";
}

double LossValue::component(std::string_view name) const {
  for (const auto& c : components)
    if (c.name == name) return c.value;
  throw ValidationError("loss has no component '" + std::string(name) + "'");
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
}

void require_vector_shape(const Matrix& pred, const Matrix& gt, const Matrix& gt_a, const char* what) {
  require_same_shape(pred, gt, what);
  if (pred.rows() != gt_a.rows() || pred.cols() != 3 * gt_a.cols())
    throw ShapeError(std::string(what) + ": vector branch must be T x 3C for activity T x C");
}

double cell_count(const Matrix& gt_a) {
  return static_cast<double>(gt_a.rows()) * static_cast<double>(gt_a.cols());
}

// Masked squared vector error shared by the DOA and SCE objectives.
double masked_vector_mse(const Matrix& pred, const Matrix& gt, const Matrix& gt_a) {
  const double n = cell_count(gt_a);
  if (n == 0.0) return 0.0;
  const int C = static_cast<int>(gt_a.cols());
  double sum = 0.0;
  for (Eigen::Index t = 0; t < gt_a.rows(); ++t) {
    for (int c = 0; c < C; ++c) {
      const double a2 = gt_a(t, c) * gt_a(t, c);
      if (a2 == 0.0) continue;
      double sq = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double diff = pred(t, vector_column(k, c, C)) - gt(t, vector_column(k, c, C));
        sq += diff * diff;
      }
      sum += a2 * sq;
    }
  }
  return sum / n;
}

Matrix masked_vector_mse_gradient(const Matrix& pred, const Matrix& gt, const Matrix& gt_a) {
  Matrix g = Matrix::Zero(pred.rows(), pred.cols());
  const double n = cell_count(gt_a);
  if (n == 0.0) return g;
  const int C = static_cast<int>(gt_a.cols());
  for (Eigen::Index t = 0; t < gt_a.rows(); ++t) {
    for (int c = 0; c < C; ++c) {
      const double a2 = gt_a(t, c) * gt_a(t, c);
      if (a2 == 0.0) continue;
      for (int k = 0; k < 3; ++k) {
        const int j = vector_column(k, c, C);
        g(t, j) = 2.0 * a2 * (pred(t, j) - gt(t, j)) / n;
      }
    }
  }
  return g;
}

void check_distances(const Matrix& gt_d, const Matrix& gt_a) {
  for (Eigen::Index t = 0; t < gt_a.rows(); ++t)
    for (Eigen::Index c = 0; c < gt_a.cols(); ++c)
      if (gt_a(t, c) != 0.0 && !(gt_d(t, c) > 0.0))
        throw ValidationError("active cell (frame " + std::to_string(t) + ", class " +
                              std::to_string(c) + ") has nonpositive distance " +
                              std::to_string(gt_d(t, c)));
}

}  // namespace

double bce_sed(const Matrix& pred_a, const Matrix& gt_a) {
  require_same_shape(pred_a, gt_a, "bce_sed");
  const double n = cell_count(gt_a);
  if (n == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pred_a.size(); ++i) {
    const double p = std::clamp(pred_a.data()[i], kBceEpsilon, 1.0 - kBceEpsilon);
    const double a = gt_a.data()[i];
    sum += a * std::log(p) + (1.0 - a) * std::log(1.0 - p);
  }
  return -sum / n;
}

Matrix bce_sed_gradient(const Matrix& pred_a, const Matrix& gt_a) {
  require_same_shape(pred_a, gt_a, "bce_sed");
  Matrix g = Matrix::Zero(pred_a.rows(), pred_a.cols());
  const double n = cell_count(gt_a);
  if (n == 0.0) return g;
  for (Eigen::Index i = 0; i < pred_a.size(); ++i) {
    const double p = pred_a.data()[i];
    if (p < kBceEpsilon || p > 1.0 - kBceEpsilon) continue;  // flat in the clamped region
    const double a = gt_a.data()[i];
    g.data()[i] = (-a / p + (1.0 - a) / (1.0 - p)) / n;
  }
  return g;
}

double mse_doa(const Matrix& pred_r, const Matrix& gt_r, const Matrix& gt_a) {
  require_vector_shape(pred_r, gt_r, gt_a, "mse_doa");
  return masked_vector_mse(pred_r, gt_r, gt_a);
}

Matrix mse_doa_gradient(const Matrix& pred_r, const Matrix& gt_r, const Matrix& gt_a) {
  require_vector_shape(pred_r, gt_r, gt_a, "mse_doa");
  return masked_vector_mse_gradient(pred_r, gt_r, gt_a);
}

double sce_loss(const Matrix& pred_s, const Matrix& gt_s, const Matrix& gt_a) {
  require_vector_shape(pred_s, gt_s, gt_a, "sce_loss");
  return masked_vector_mse(pred_s, gt_s, gt_a);
}

Matrix sce_loss_gradient(const Matrix& pred_s, const Matrix& gt_s, const Matrix& gt_a) {
  require_vector_shape(pred_s, gt_s, gt_a, "sce_loss");
  return masked_vector_mse_gradient(pred_s, gt_s, gt_a);
}

double sde_loss(SdeLossKind kind, const Matrix& pred_d, const Matrix& gt_d, const Matrix& gt_a) {
  require_same_shape(pred_d, gt_d, "sde_loss");
  require_same_shape(pred_d, gt_a, "sde_loss");
  check_distances(gt_d, gt_a);
  const double n = cell_count(gt_a);
  if (n == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pred_d.size(); ++i) {
    const double a = gt_a.data()[i];
    if (a == 0.0) continue;
    const double d = gt_d.data()[i];
    const double err = d - pred_d.data()[i];
    switch (kind) {
      case SdeLossKind::kMse:
        sum += a * a * err * err;
        break;
      case SdeLossKind::kMspe: {
        const double rel = err / std::max(d, kPercentErrorFloor);
        sum += a * a * rel * rel;
        break;
      }
      case SdeLossKind::kMape:
        sum += std::abs(a) * std::abs(err / std::max(d, kPercentErrorFloor));
        break;
    }
  }
  return sum / n;
}

Matrix sde_loss_gradient(SdeLossKind kind, const Matrix& pred_d, const Matrix& gt_d,
                         const Matrix& gt_a) {
  require_same_shape(pred_d, gt_d, "sde_loss");
  require_same_shape(pred_d, gt_a, "sde_loss");
  check_distances(gt_d, gt_a);
  Matrix g = Matrix::Zero(pred_d.rows(), pred_d.cols());
  const double n = cell_count(gt_a);
  if (n == 0.0) return g;
  for (Eigen::Index i = 0; i < pred_d.size(); ++i) {
    const double a = gt_a.data()[i];
    if (a == 0.0) continue;
    const double d = gt_d.data()[i];
    const double diff = pred_d.data()[i] - d;
    const double scale = std::max(d, kPercentErrorFloor);
    switch (kind) {
      case SdeLossKind::kMse:
        g.data()[i] = 2.0 * a * a * diff / n;
        break;
      case SdeLossKind::kMspe:
        g.data()[i] = 2.0 * a * a * diff / (scale * scale) / n;
        break;
      case SdeLossKind::kMape:
        g.data()[i] = diff == 0.0 ? 0.0 : std::abs(a) * (diff > 0.0 ? 1.0 : -1.0) / scale / n;
        break;
    }
  }
  return g;
}

double accdoa_mse(const Matrix& pred, const Matrix& gt) {
  require_same_shape(pred, gt, "accdoa_mse");
  if (pred.size() == 0) return 0.0;
  return (pred - gt).squaredNorm() / static_cast<double>(pred.size());
}

Matrix accdoa_mse_gradient(const Matrix& pred, const Matrix& gt) {
  require_same_shape(pred, gt, "accdoa_mse");
  if (pred.size() == 0) return Matrix::Zero(pred.rows(), pred.cols());
  return 2.0 * (pred - gt) / static_cast<double>(pred.size());
}

namespace {

struct Term {
  const char* name;
  double weight;
  int branch;
};

std::vector<Term> terms_for(const ReprFormat& format, const LossWeights& w) {
  const int sed = format.find_branch(BranchRole::kSed);
  const int doa = format.find_branch(BranchRole::kDoa);
  const int sde = format.find_branch(BranchRole::kSde);
  const int sce = format.find_branch(BranchRole::kSce);
  switch (format.kind()) {
    case ReprKind::kMultiAccdoa:
      return {{"accdoa", 1.0, 0}};
    case ReprKind::kSedDoa:
      return {{"sed", w.beta[0], sed}, {"doa", w.beta[1], doa}};
    case ReprKind::kSedSde:
      return {{"sed", w.gamma[0], sed}, {"sde", w.gamma[1], sde}};
    case ReprKind::kSedSce:
      return {{"sed", w.eta[0], sed}, {"sce", w.eta[1], sce}};
    case ReprKind::kSedDoaSde:
      return {{"sed", w.lambda[0], sed}, {"doa", w.lambda[1], doa}, {"sde", w.lambda[2], sde}};
  }
  return {};
}

LossWithGradient evaluate(const TargetTensor& pred, const TargetTensor& gt, const LossConfig& cfg,
                          bool with_gradient) {
  if (!(pred.format == gt.format))
    throw ShapeError("prediction format " + pred.format.name() + " does not match target format " +
                     gt.format.name());
  pred.check_shape();
  gt.check_shape();
  if (pred.frames() != gt.frames()) throw ShapeError("prediction and target frame counts differ");

  const auto terms = terms_for(pred.format, cfg.weights);
  bool any_positive = false;
  for (const auto& term : terms) {
    if (!(term.weight >= 0.0) || !std::isfinite(term.weight))
      throw ValidationError(std::string("loss weight for '") + term.name + "' must be nonnegative");
    any_positive = any_positive || term.weight > 0.0;
  }
  if (!any_positive)
    throw ValidationError("all loss weights for " + pred.format.name() + " are zero");

  LossWithGradient out;
  if (with_gradient)
    for (const auto& b : pred.branches) out.gradients.push_back(Matrix::Zero(b.rows(), b.cols()));

  const int sed = pred.format.find_branch(BranchRole::kSed);
  const Matrix* gt_a = sed >= 0 ? &gt.branches[sed] : nullptr;
  for (const auto& term : terms) {
    const Matrix& p = pred.branches[term.branch];
    const Matrix& g = gt.branches[term.branch];
    double value = 0.0;
    Matrix grad;
    const std::string name = term.name;
    if (name == "accdoa") {
      value = accdoa_mse(p, g);
      if (with_gradient) grad = accdoa_mse_gradient(p, g);
    } else if (name == "sed") {
      value = bce_sed(p, g);
      if (with_gradient) grad = bce_sed_gradient(p, g);
    } else if (name == "doa") {
      value = mse_doa(p, g, *gt_a);
      if (with_gradient) grad = mse_doa_gradient(p, g, *gt_a);
    } else if (name == "sde") {
      value = sde_loss(cfg.sde_kind, p, g, *gt_a);
      if (with_gradient) grad = sde_loss_gradient(cfg.sde_kind, p, g, *gt_a);
    } else {
      value = sce_loss(p, g, *gt_a);
      if (with_gradient) grad = sce_loss_gradient(p, g, *gt_a);
    }
    out.value.components.push_back({name, term.weight, value});
    out.value.total += term.weight * value;
    if (with_gradient) out.gradients[term.branch] += term.weight * grad;
  }
  return out;
}

}  // namespace

LossValue joint_loss(const TargetTensor& pred, const TargetTensor& gt, const LossConfig& cfg) {
  return evaluate(pred, gt, cfg, false).value;
}

LossWithGradient joint_loss_with_gradient(const TargetTensor& pred, const TargetTensor& gt,
                                          const LossConfig& cfg) {
  return evaluate(pred, gt, cfg, true);
}

}  // namespace seld
