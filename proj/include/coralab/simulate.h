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
#ifndef CORALAB_SIMULATE_H_
#define CORALAB_SIMULATE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coralab/backend.h"
#include "coralab/ground_truth.h"

namespace coralab {

enum class SimMethod { kSparse, kPrompt, kAuto };
std::string_view SimMethodName(SimMethod method);

struct CurvePoint {
  int64_t effort = 0;  // labelled points or prompts issued
  double accuracy = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// Efforts strictly increasing, accuracies in [0, 1].
struct SimCurve {
  SimMethod method = SimMethod::kSparse;
  uint64_t seed = 0;
  std::vector<CurvePoint> points;

  friend bool operator==(const SimCurve&, const SimCurve&) = default;
};

// How unlabelled pixels are scored by the sparse simulator.
enum class SparseConvention {
  // Only labelled pixels are correct: accuracy after k points is k / N.
  kUnlabeledIncorrect,
  // Unlabelled pixels are predicted background.
  kFillBackground,
};

struct SparseOptions {
  // Efforts at which accuracy is recorded; empty records every step. The
  // final effort n_points is always recorded.
  std::vector<int64_t> schedule;
  SparseConvention convention = SparseConvention::kUnlabeledIncorrect;
};

// Samples n_points distinct pixels uniformly from the image's stream
// (StreamSeed(seed, gt.image_id)) and labels each from the ground truth.
// Throws kValidation when n_points is outside [1, W*H] or the schedule is
// out of range.
SimCurve SimulateSparse(const GroundTruth& gt, int64_t n_points, uint64_t seed,
                        const SparseOptions& options = {});

// Fraction of the same sampled points that land on coral.
double EstimateCoverageSparse(const GroundTruth& gt, int64_t n_points,
                              uint64_t seed);

struct PromptSimOptions {
  // When the prediction has no false negatives left, refine with a negative
  // prompt on a false positive. Off: stop instead.
  bool negative_prompts = true;
};

// Iterative click simulation against a prepared backend. Each positive
// click on a false-negative pixel starts a new object; a negative click on
// a false-positive pixel is added to the newest object covering it, which is
// then re-queried with all of its clicks. The prediction is the union of the
// objects' current masks. Stops early once prediction == ground truth.
// Throws kDegenerateInput when the ground truth has no coral.
SimCurve SimulatePrompts(const GroundTruth& gt, SegmentationBackend& backend,
                         int budget, uint64_t seed,
                         const PromptSimOptions& options = {});

// Accuracy of the union of AutoSegment proposals against the coral union.
double EvaluateAuto(const GroundTruth& gt, SegmentationBackend& backend,
                    double min_area_fraction, double confidence_threshold);

// The backend-facing view of a ground-truth image.
ImageRef GroundTruthRef(const GroundTruth& gt);

struct LocationResult {
  std::string location;
  std::vector<double> accuracies;
  double mean = 0.0;
};

// Arithmetic mean per location, input order kept. Throws kValidation for a
// location without accuracies.
std::vector<LocationResult> AggregateLocations(
    const std::vector<std::pair<std::string, std::vector<double>>>& results);

inline constexpr const char* kCurveCsvHeader = "method,seed,effort,accuracy";
inline constexpr const char* kAggregateCsvHeader = "location,n_images,mean_accuracy";

std::string CurveCsv(const SimCurve& curve);
// Means rendered with four decimals, e.g. "Hong Kong,75,0.8888".
std::string AggregateCsv(std::span<const LocationResult> results);

}  // namespace coralab

#endif  // CORALAB_SIMULATE_H_
