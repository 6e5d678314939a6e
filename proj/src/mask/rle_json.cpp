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
#include "coralab/rle_json.h"

#include <limits>
#include <string>
#include <vector>

#include "coralab/error.h"

namespace coralab {

nlohmann::json MaskToJson(const BinaryMask& mask) {
  return nlohmann::json{{"size", {mask.height(), mask.width()}},
                        {"counts", mask.counts()}};
}

BinaryMask MaskFromJson(const nlohmann::json& value) {
  if (!value.is_object() || !value.contains("size") ||
      !value.contains("counts")) {
    throw Error(ErrorCode::kCorruptMask,
                "RLE object needs \"size\" and \"counts\"");
  }
  const auto& size = value.at("size");
  const auto& counts = value.at("counts");
  if (!size.is_array() || size.size() != 2 || !size[0].is_number_integer() ||
      !size[1].is_number_integer()) {
    throw Error(ErrorCode::kCorruptMask, "RLE size must be [height,width]");
  }
  if (!counts.is_array()) {
    // Compressed string counts are not supported.
    throw Error(ErrorCode::kCorruptMask, "RLE counts must be an integer array");
  }
  std::vector<uint32_t> runs;
  runs.reserve(counts.size());
  for (const auto& c : counts) {
    if (!c.is_number_integer() || c.get<int64_t>() < 0 ||
        c.get<int64_t>() > std::numeric_limits<uint32_t>::max()) {
      throw Error(ErrorCode::kCorruptMask,
                  "RLE counts must be non-negative integers");
    }
    runs.push_back(c.get<uint32_t>());
  }
  const int64_t height = size[0].get<int64_t>();
  const int64_t width = size[1].get<int64_t>();
  if (height <= 0 || width <= 0 || height > std::numeric_limits<int>::max() ||
      width > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::kCorruptMask, "RLE size must be positive");
  }
  return BinaryMask(static_cast<int>(width), static_cast<int>(height),
                    std::move(runs));
}

}  // namespace coralab
