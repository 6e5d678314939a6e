/* Copyright 2026 The Coralab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "coralab/simulate.h"

#include <algorithm>

#include "coralab/error.h"
#include "coralab/format.h"
#include "coralab/metrics.h"
#include "coralab/rng.h"

namespace coralab {
namespace {

// Every schedule entry plus the final effort, sorted and deduplicated.
std::vector<int64_t> RecordPoints(const std::vector<int64_t>& schedule,
                                  int64_t n_points) {
  std::vector<int64_t> out;
  if (schedule.empty()) {
    out.resize(static_cast<size_t>(n_points));
    for (int64_t k = 1; k <= n_points; ++k) out[static_cast<size_t>(k - 1)] = k;
    return out;
  }
  for (int64_t k : schedule) {
    if (k < 1 || k > n_points) {
      throw Error(ErrorCode::kValidation,
                  "schedule entry " + std::to_string(k) + " outside [1, " +
                      std::to_string(n_points) + "]");
    }
    out.push_back(k);
  }
  out.push_back(n_points);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<uint64_t> SamplePixels(const GroundTruth& gt, int64_t n_points,
                                   uint64_t seed) {
  const int64_t n = gt.pixel_count();
  if (n_points < 1 || n_points > n) {
    throw Error(ErrorCode::kValidation,
                "point count " + std::to_string(n_points) + " outside [1, " +
                    std::to_string(n) + "]");
  }
  Rng rng(StreamSeed(seed, gt.image_id));
  return SampleWithoutReplacement(rng, static_cast<uint64_t>(n),
                                  static_cast<uint64_t>(n_points));
}

// Row-major coral flags of the ground-truth union.
std::vector<uint8_t> CoralBits(const GroundTruth& gt) {
  gt.Validate();
  return RleDecode(gt.CoralUnion()).bits();
}

Pixel UniformPixel(Rng& rng, const BinaryMask& region) {
  return NthSetPixel(region, static_cast<int64_t>(
                                 rng.Below(static_cast<uint64_t>(MaskArea(region)))));
}

}  // namespace

std::string_view SimMethodName(SimMethod method) {
  switch (method) {
    case SimMethod::kSparse:
      return "sparse";
    case SimMethod::kPrompt:
      return "prompt";
    case SimMethod::kAuto:
      return "auto";
  }
  return "sparse";
}

SimCurve SimulateSparse(const GroundTruth& gt, int64_t n_points, uint64_t seed,
                        const SparseOptions& options) {
  const std::vector<uint64_t> samples = SamplePixels(gt, n_points, seed);
  const std::vector<int64_t> record = RecordPoints(options.schedule, n_points);
  const std::vector<uint8_t> coral = CoralBits(gt);
  const int64_t n = gt.pixel_count();
  int64_t coral_total = 0;
  for (uint8_t b : coral) coral_total += b;

  SimCurve curve{SimMethod::kSparse, seed, {}};
  curve.points.reserve(record.size());
  int64_t labelled_coral = 0;
  size_t next = 0;
  for (int64_t k = 1; k <= n_points && next < record.size(); ++k) {
    labelled_coral += coral[samples[static_cast<size_t>(k - 1)]];
    if (k != record[next]) continue;
    ++next;
    // Every labelled pixel is labelled correctly.
    const int64_t correct =
        options.convention == SparseConvention::kUnlabeledIncorrect
            ? k
            : n - (coral_total - labelled_coral);
    curve.points.push_back(
        {k, static_cast<double>(correct) / static_cast<double>(n)});
  }
  return curve;
}

double EstimateCoverageSparse(const GroundTruth& gt, int64_t n_points,
                              uint64_t seed) {
  const std::vector<uint64_t> samples = SamplePixels(gt, n_points, seed);
  const std::vector<uint8_t> coral = CoralBits(gt);
  int64_t hits = 0;
  for (uint64_t s : samples) hits += coral[s];
  return static_cast<double>(hits) / static_cast<double>(n_points);
}

ImageRef GroundTruthRef(const GroundTruth& gt) {
  return ImageRef{gt.image_id, gt.file_name, gt.width, gt.height};
}

SimCurve SimulatePrompts(const GroundTruth& gt, SegmentationBackend& backend,
                         int budget, uint64_t seed,
                         const PromptSimOptions& options) {
  if (budget < 1) throw Error(ErrorCode::kValidation, "budget must be at least 1");
  gt.Validate();
  const BinaryMask truth = gt.CoralUnion();
  if (MaskArea(truth) == 0) {
    throw Error(ErrorCode::kDegenerateInput,
                "image " + std::to_string(gt.image_id) + " has no coral to click");
  }
  const ImageRef ref = GroundTruthRef(gt);
  Rng rng(StreamSeed(seed, gt.image_id));

  struct Object {
    std::vector<PointPrompt> prompts;
    BinaryMask mask;
  };
  std::vector<Object> objects;
  BinaryMask prediction = BinaryMask::Empty(gt.width, gt.height);
  SimCurve curve{SimMethod::kPrompt, seed, {}};

  for (int effort = 1; effort <= budget; ++effort) {
    const BinaryMask false_neg = MaskBoolean(truth, prediction, BooleanOp::kDifference);
    const BinaryMask false_pos = MaskBoolean(prediction, truth, BooleanOp::kDifference);
    if (MaskArea(false_neg) > 0) {
      const Pixel p = UniformPixel(rng, false_neg);
      std::vector<PointPrompt> prompts{{p.x, p.y, Polarity::kPositive}};
      BinaryMask mask = PromptToMask(backend, ref, prompts).mask;
      objects.push_back({std::move(prompts), std::move(mask)});
    } else if (MaskArea(false_pos) > 0 && options.negative_prompts) {
      const Pixel p = UniformPixel(rng, false_pos);
      auto owner = std::find_if(objects.rbegin(), objects.rend(), [&](const Object& o) {
        return MaskContains(o.mask, p.x, p.y);
      });
      owner->prompts.push_back({p.x, p.y, Polarity::kNegative});
      owner->mask = PromptToMask(backend, ref, owner->prompts).mask;
    } else {
      break;
    }
    prediction = BinaryMask::Empty(gt.width, gt.height);
    for (const Object& o : objects) {
      prediction = MaskBoolean(prediction, o.mask, BooleanOp::kUnion);
    }
    curve.points.push_back({effort, PixelAccuracy(prediction, truth)});
    if (prediction == truth) break;
  }
  return curve;
}

double EvaluateAuto(const GroundTruth& gt, SegmentationBackend& backend,
                    double min_area_fraction, double confidence_threshold) {
  gt.Validate();
  BinaryMask prediction = BinaryMask::Empty(gt.width, gt.height);
  for (const MaskProposal& p : AutoSegment(backend, GroundTruthRef(gt),
                                           min_area_fraction, confidence_threshold)) {
    prediction = MaskBoolean(prediction, p.mask, BooleanOp::kUnion);
  }
  return PixelAccuracy(prediction, gt.CoralUnion());
}

std::vector<LocationResult> AggregateLocations(
    const std::vector<std::pair<std::string, std::vector<double>>>& results) {
  std::vector<LocationResult> out;
  out.reserve(results.size());
  for (const auto& [location, accuracies] : results) {
    if (accuracies.empty()) {
      throw Error(ErrorCode::kValidation,
                  "location \"" + location + "\" has no accuracies");
    }
    double sum = 0.0;
    for (double a : accuracies) sum += a;
    out.push_back({location, accuracies,
                   sum / static_cast<double>(accuracies.size())});
  }
  return out;
}

std::string CurveCsv(const SimCurve& curve) {
  std::string out = std::string(kCurveCsvHeader) + "\n";
  const std::string method(SimMethodName(curve.method));
  const std::string seed = std::to_string(curve.seed);
  for (const CurvePoint& p : curve.points) {
    out += CsvRow({method, seed, std::to_string(p.effort), FormatReal(p.accuracy)});
  }
  return out;
}

std::string AggregateCsv(std::span<const LocationResult> results) {
  std::string out = std::string(kAggregateCsvHeader) + "\n";
  for (const LocationResult& r : results) {
    out += CsvRow({r.location, std::to_string(r.accuracies.size()),
                   FormatFixed(r.mean, 4)});
  }
  return out;
}

}  // namespace coralab
