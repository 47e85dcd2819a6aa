// scribble/weak_supervision.h

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

#ifndef SCRIBBLE_WEAK_SUPERVISION_H_
#define SCRIBBLE_WEAK_SUPERVISION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scribble/geometry.h"

namespace scribble {

/// Character classes: Background, digits 0-9, lowercase letters a-z,
/// Unknown, and the collapsed Foreground class.
class CharClass {
 public:
  enum class Kind { kBackground, kDigit, kLetter, kUnknown, kForeground };

  static CharClass Background() { return CharClass(Kind::kBackground, 0); }
  static CharClass Unknown() { return CharClass(Kind::kUnknown, 0); }
  static CharClass Foreground() { return CharClass(Kind::kForeground, 0); }
  /// Throws std::invalid_argument unless d is in 0..9.
  static CharClass Digit(int d);
  /// Throws std::invalid_argument unless c is in 'a'..'z'.
  static CharClass Letter(char c);
  /// Parses the file spelling: "Background", "0"-"9", "a"-"z", "Unknown",
  /// "Foreground". Throws std::invalid_argument otherwise.
  static CharClass Parse(std::string_view name);

  Kind kind() const { return kind_; }
  /// The digit or letter character; '\0' for the other kinds.
  char symbol() const { return symbol_; }
  bool IsCharacter() const {
    return kind_ == Kind::kDigit || kind_ == Kind::kLetter;
  }
  std::string Name() const;

  friend bool operator==(const CharClass&, const CharClass&) = default;

 private:
  CharClass(Kind kind, char symbol) : kind_(kind), symbol_(symbol) {}

  Kind kind_;
  char symbol_;
};

/// Class taxonomy used by the character head.
///   kBF:    Background / Foreground.
///   kAll:   Background, 10 digits, 26 letters, Unknown.
///   kAllBF: fine classes on synthetic data, Background / Foreground on real
///           data, sharing one head (All classes plus Foreground).
enum class ClassMode { kBF, kAll, kAllBF };
enum class Domain { kSynthetic, kReal };

ClassMode ParseClassMode(std::string_view name);  // "bf", "all", "allbf"
std::string_view ClassModeName(ClassMode mode);

/// Number of logits the character head emits in this mode (2, 38, 39).
int ClassCount(ClassMode mode);
/// Logit index of `c`; throws std::invalid_argument if the mode cannot
/// represent it (e.g. a letter under kBF).
int ClassIndex(CharClass c, ClassMode mode);

CharClass MapClass(CharClass c, ClassMode mode, Domain domain);

struct CharBox {
  AxisAlignedBox box;
  double score = 1.0;
  CharClass cls = CharClass::Unknown();

  friend bool operator==(const CharBox&, const CharBox&) = default;
};

struct PseudoLabelSet {
  std::string image_id;
  std::vector<CharBox> labels;
};

inline constexpr double kDefaultPseudoThreshold = 0.9;

/// Keeps detections with score >= t_pseudo, a class other than Unknown or
/// Background, and geometric overlap with at least one scribble. Input order
/// is preserved.
PseudoLabelSet GeneratePseudoLabels(std::span<const CharBox> detections,
                                    std::span<const Polyline> scribbles,
                                    double t_pseudo = kDefaultPseudoThreshold,
                                    std::string image_id = {});

struct Proposal {
  AxisAlignedBox box;
};

struct SampleDecision {
  enum class Kind { kPositive, kNegative, kIgnored };
  Kind kind = Kind::kIgnored;
  /// Index into the pseudo labels for positives; -1 otherwise.
  int label_index = -1;

  friend bool operator==(const SampleDecision&,
                         const SampleDecision&) = default;
};

double BoxIou(const AxisAlignedBox& a, const AxisAlignedBox& b);

inline constexpr double kDefaultMatchIou = 0.5;

/// Online proposal sampling for real images.
///   Positive: best IoU with a pseudo label >= match_iou (lowest index on
///             ties).
///   Negative: not positive, touching no scribble and no difficult region.
///   Ignored:  everything else (potential positives near scribbles).
std::vector<SampleDecision> SampleProposals(
    std::span<const Proposal> proposals, const PseudoLabelSet& labels,
    std::span<const Polyline> scribbles,
    std::span<const Polygon> difficult_regions,
    double match_iou = kDefaultMatchIou);

/// (dx, dy, dw, dh): center shift in units of proposal size, log size ratio.
using BoxOffsets = std::array<double, 4>;

BoxOffsets EncodeBoxOffsets(const AxisAlignedBox& proposal,
                            const AxisAlignedBox& target);
AxisAlignedBox ApplyBoxOffsets(const AxisAlignedBox& proposal,
                               const BoxOffsets& offsets);

double SmoothL1(double error);

struct CharLoss {
  double regress = 0.0;   // mean over positives of summed smooth-L1
  double classify = 0.0;  // mean cross-entropy over sampled proposals
  double Total() const { return regress + classify; }
};

/// Throws std::invalid_argument on count or logit-dimension mismatch, or a
/// target class the mode cannot represent.
CharLoss ComputeCharLoss(std::span<const BoxOffsets> predicted,
                         std::span<const BoxOffsets> targets,
                         std::span<const std::vector<double>> class_logits,
                         std::span<const CharClass> target_classes,
                         ClassMode mode);

inline constexpr double kProbabilityEpsilon = 1e-7;
inline constexpr int kDefaultNegativeRatio = 3;
inline constexpr std::size_t kZeroPositiveNegatives = 100;

/// Pixel indices sampled for the text-line loss.
struct OhemSamples {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;  // hardest first
  std::size_t size() const { return positives.size() + negatives.size(); }
};

/// All target pixels outside `ignore`, plus the min(ratio * |positives|,
/// eligible) eligible negatives with the largest prediction (ties: lower
/// pixel index first). With no positives, the kZeroPositiveNegatives hardest
/// negatives are taken instead.
OhemSamples SelectOhemSamples(const RasterGrid& pred, const BinaryMask& target,
                              const BinaryMask& ignore,
                              int neg_ratio = kDefaultNegativeRatio);

/// Mean binary cross-entropy over a fixed sample set, with predictions
/// clamped to [eps, 1 - eps]. Zero for an empty set.
double LineLossOnSamples(const RasterGrid& pred, const BinaryMask& target,
                         const OhemSamples& samples);

/// d(LineLossOnSamples)/d(pred) per pixel (row-major), zero outside the
/// sample set.
std::vector<double> LineLossGradient(const RasterGrid& pred,
                                     const BinaryMask& target,
                                     const OhemSamples& samples);

/// Text-line loss with 1:neg_ratio online hard negative mining.
double LineLossOhem(const RasterGrid& pred, const BinaryMask& target,
                    const BinaryMask& ignore,
                    int neg_ratio = kDefaultNegativeRatio);

struct LossBreakdown {
  double l_char = 0.0;
  double l_line = 0.0;
  std::optional<double> l_rpn;  // computed elsewhere
  double total = 0.0;
};

/// total = l_rpn (or 0) + l_char + l_line.
LossBreakdown CombineLosses(const CharLoss& char_loss, double line_loss,
                            std::optional<double> rpn_loss = std::nullopt);

}  // namespace scribble

#endif  // SCRIBBLE_WEAK_SUPERVISION_H_
