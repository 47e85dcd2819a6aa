// scribble/weak_supervision.cc

// Copyright 2026  The scribbletext Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "scribble/weak_supervision.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scribble {

CharClass CharClass::Digit(int d) {
  if (d < 0 || d > 9) throw std::invalid_argument("digit out of range");
  return CharClass(Kind::kDigit, static_cast<char>('0' + d));
}

CharClass CharClass::Letter(char c) {
  if (c < 'a' || c > 'z') throw std::invalid_argument("letter must be a-z");
  return CharClass(Kind::kLetter, c);
}

CharClass CharClass::Parse(std::string_view name) {
  if (name == "Background") return Background();
  if (name == "Unknown") return Unknown();
  if (name == "Foreground") return Foreground();
  if (name.size() == 1) {
    const char c = name[0];
    if (c >= '0' && c <= '9') return Digit(c - '0');
    if (c >= 'a' && c <= 'z') return Letter(c);
  }
  throw std::invalid_argument("unknown character class '" + std::string(name) +
                              "'");
}

std::string CharClass::Name() const {
  switch (kind_) {
    case Kind::kBackground: return "Background";
    case Kind::kUnknown: return "Unknown";
    case Kind::kForeground: return "Foreground";
    case Kind::kDigit:
    case Kind::kLetter: return std::string(1, symbol_);
  }
  return {};
}

ClassMode ParseClassMode(std::string_view name) {
  if (name == "bf") return ClassMode::kBF;
  if (name == "all") return ClassMode::kAll;
  if (name == "allbf") return ClassMode::kAllBF;
  throw std::invalid_argument("class mode must be bf, all or allbf");
}

std::string_view ClassModeName(ClassMode mode) {
  switch (mode) {
    case ClassMode::kBF: return "bf";
    case ClassMode::kAll: return "all";
    case ClassMode::kAllBF: return "allbf";
  }
  return {};
}

int ClassCount(ClassMode mode) {
  switch (mode) {
    case ClassMode::kBF: return 2;
    case ClassMode::kAll: return 38;
    case ClassMode::kAllBF: return 39;
  }
  return 0;
}

int ClassIndex(CharClass c, ClassMode mode) {
  using Kind = CharClass::Kind;
  if (c.kind() == Kind::kBackground) return 0;
  if (mode == ClassMode::kBF) {
    if (c.kind() == Kind::kForeground) return 1;
    throw std::invalid_argument("class " + c.Name() + " not in BF taxonomy");
  }
  switch (c.kind()) {
    case Kind::kDigit: return 1 + (c.symbol() - '0');
    case Kind::kLetter: return 11 + (c.symbol() - 'a');
    case Kind::kUnknown: return 37;
    case Kind::kForeground:
      if (mode == ClassMode::kAllBF) return 38;
      break;
    case Kind::kBackground: break;
  }
  throw std::invalid_argument("class " + c.Name() + " not in " +
                              std::string(ClassModeName(mode)) + " taxonomy");
}

CharClass MapClass(CharClass c, ClassMode mode, Domain domain) {
  const bool collapse =
      mode == ClassMode::kBF ||
      (mode == ClassMode::kAllBF && domain == Domain::kReal);
  if (!collapse || c.kind() == CharClass::Kind::kBackground) return c;
  return CharClass::Foreground();
}

PseudoLabelSet GeneratePseudoLabels(std::span<const CharBox> detections,
                                    std::span<const Polyline> scribbles,
                                    double t_pseudo, std::string image_id) {
  if (!(t_pseudo >= 0.0 && t_pseudo <= 1.0))
    throw std::invalid_argument("t_pseudo must be in [0, 1]");
  PseudoLabelSet out{std::move(image_id), {}};
  for (const CharBox& det : detections) {
    if (det.score < t_pseudo) continue;
    const auto kind = det.cls.kind();
    if (kind == CharClass::Kind::kUnknown ||
        kind == CharClass::Kind::kBackground)
      continue;
    const bool touches = std::any_of(
        scribbles.begin(), scribbles.end(),
        [&](const Polyline& line) { return BoxPolylineIntersects(det.box, line); });
    if (touches) out.labels.push_back(det);
  }
  return out;
}

double BoxIou(const AxisAlignedBox& a, const AxisAlignedBox& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.Area() + b.Area() - inter);
}

std::vector<SampleDecision> SampleProposals(
    std::span<const Proposal> proposals, const PseudoLabelSet& labels,
    std::span<const Polyline> scribbles,
    std::span<const Polygon> difficult_regions, double match_iou) {
  if (!(match_iou > 0.0 && match_iou < 1.0))
    throw std::invalid_argument("match_iou must be in (0, 1)");
  std::vector<SampleDecision> out;
  out.reserve(proposals.size());
  for (const Proposal& prop : proposals) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
      const double iou = BoxIou(prop.box, labels.labels[i].box);
      if (iou > best_iou) {
        best_iou = iou;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 && best_iou >= match_iou) {
      out.push_back({SampleDecision::Kind::kPositive, best});
      continue;
    }
    const bool near_text =
        std::any_of(scribbles.begin(), scribbles.end(),
                    [&](const Polyline& l) { return BoxPolylineIntersects(prop.box, l); }) ||
        std::any_of(difficult_regions.begin(), difficult_regions.end(),
                    [&](const Polygon& p) { return BoxPolygonIntersects(prop.box, p); });
    out.push_back({near_text ? SampleDecision::Kind::kIgnored
                             : SampleDecision::Kind::kNegative,
                   -1});
  }
  return out;
}

BoxOffsets EncodeBoxOffsets(const AxisAlignedBox& proposal,
                            const AxisAlignedBox& target) {
  if (!proposal.IsValid() || !target.IsValid())
    throw std::invalid_argument("box offsets need valid boxes");
  const double pw = proposal.Width(), ph = proposal.Height();
  const Point2D pc = proposal.Center(), tc = target.Center();
  return {(tc.x - pc.x) / pw, (tc.y - pc.y) / ph,
          std::log(target.Width() / pw), std::log(target.Height() / ph)};
}

AxisAlignedBox ApplyBoxOffsets(const AxisAlignedBox& proposal,
                               const BoxOffsets& d) {
  const double pw = proposal.Width(), ph = proposal.Height();
  const Point2D pc = proposal.Center();
  const double cx = pc.x + d[0] * pw, cy = pc.y + d[1] * ph;
  const double w = pw * std::exp(d[2]), h = ph * std::exp(d[3]);
  return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
}

double SmoothL1(double error) {
  const double a = std::abs(error);
  return a < 1.0 ? 0.5 * a * a : a - 0.5;
}

CharLoss ComputeCharLoss(std::span<const BoxOffsets> predicted,
                         std::span<const BoxOffsets> targets,
                         std::span<const std::vector<double>> class_logits,
                         std::span<const CharClass> target_classes,
                         ClassMode mode) {
  if (predicted.size() != targets.size())
    throw std::invalid_argument("offset prediction/target count mismatch");
  if (class_logits.size() != target_classes.size())
    throw std::invalid_argument("logit/target count mismatch");
  CharLoss loss;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (int k = 0; k < 4; ++k) loss.regress += SmoothL1(predicted[i][k] - targets[i][k]);
  }
  if (!predicted.empty()) loss.regress /= static_cast<double>(predicted.size());

  const auto dims = static_cast<std::size_t>(ClassCount(mode));
  for (std::size_t i = 0; i < class_logits.size(); ++i) {
    const auto& logits = class_logits[i];
    if (logits.size() != dims)
      throw std::invalid_argument("logit dimension does not match class mode");
    const int target = ClassIndex(target_classes[i], mode);
    const double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - peak);
    loss.classify += peak + std::log(sum) - logits[target];
  }
  if (!class_logits.empty())
    loss.classify /= static_cast<double>(class_logits.size());
  return loss;
}

namespace {

void CheckSameShape(const RasterGrid& pred, const BinaryMask& mask) {
  if (pred.width() != mask.width() || pred.height() != mask.height())
    throw std::invalid_argument("prediction and mask dimensions differ");
}

double Clamp(double x) {
  return std::clamp(x, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
}

}  // namespace

OhemSamples SelectOhemSamples(const RasterGrid& pred, const BinaryMask& target,
                              const BinaryMask& ignore, int neg_ratio) {
  CheckSameShape(pred, target);
  CheckSameShape(pred, ignore);
  if (neg_ratio < 0) throw std::invalid_argument("neg_ratio must be >= 0");
  OhemSamples samples;
  std::vector<std::size_t> eligible;
  const auto values = pred.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (ignore.GetIndex(i)) continue;
    (target.GetIndex(i) ? samples.positives : eligible).push_back(i);
  }
  const std::size_t wanted =
      samples.positives.empty()
          ? kZeroPositiveNegatives
          : static_cast<std::size_t>(neg_ratio) * samples.positives.size();
  const std::size_t k = std::min(wanted, eligible.size());
  const auto harder = [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] > values[b] : a < b;
  };
  std::partial_sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(k),
                    eligible.end(), harder);
  eligible.resize(k);
  samples.negatives = std::move(eligible);
  return samples;
}

double LineLossOnSamples(const RasterGrid& pred, const BinaryMask& target,
                         const OhemSamples& samples) {
  CheckSameShape(pred, target);
  if (samples.size() == 0) return 0.0;
  const auto values = pred.values();
  // Running mean: exact when every sample has the same loss.
  double mean = 0.0;
  std::size_t k = 0;
  auto add = [&](double loss) { mean += (loss - mean) / static_cast<double>(++k); };
  for (std::size_t i : samples.positives) add(-std::log(Clamp(values[i])));
  for (std::size_t i : samples.negatives) add(-std::log(1.0 - Clamp(values[i])));
  return mean;
}

std::vector<double> LineLossGradient(const RasterGrid& pred,
                                     const BinaryMask& target,
                                     const OhemSamples& samples) {
  CheckSameShape(pred, target);
  std::vector<double> grad(pred.values().size(), 0.0);
  if (samples.size() == 0) return grad;
  const double n = static_cast<double>(samples.size());
  const auto values = pred.values();
  auto apply = [&](std::size_t i, double y) {
    const double x = values[i];
    // The clamp is flat outside [eps, 1 - eps].
    if (x < kProbabilityEpsilon || x > 1.0 - kProbabilityEpsilon) return;
    grad[i] = -(y - x) / (x * (1.0 - x)) / n;
  };
  for (std::size_t i : samples.positives) apply(i, 1.0);
  for (std::size_t i : samples.negatives) apply(i, 0.0);
  return grad;
}

double LineLossOhem(const RasterGrid& pred, const BinaryMask& target,
                    const BinaryMask& ignore, int neg_ratio) {
  return LineLossOnSamples(pred, target,
                           SelectOhemSamples(pred, target, ignore, neg_ratio));
}

LossBreakdown CombineLosses(const CharLoss& char_loss, double line_loss,
                            std::optional<double> rpn_loss) {
  if (rpn_loss && !(*rpn_loss >= 0.0))
    throw std::invalid_argument("rpn loss must be >= 0");
  LossBreakdown out;
  out.l_char = char_loss.Total();
  out.l_line = line_loss;
  out.l_rpn = rpn_loss;
  out.total = rpn_loss.value_or(0.0) + out.l_char + out.l_line;
  return out;
}

}  // namespace scribble
