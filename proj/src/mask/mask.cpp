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
#include "coralab/mask.h"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "coralab/error.h"

namespace coralab {
namespace {

void CheckDimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kDimension,
                "mask dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (int64_t{width} * height > std::numeric_limits<uint32_t>::max()) {
    throw Error(ErrorCode::kDimension, "mask too large for 32-bit run counts");
  }
}

void CheckSameSize(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kDimension,
                "mask size mismatch: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

// Accumulates alternating runs and keeps them canonical: zero-length runs
// after the first are folded into their neighbour.
class RunBuilder {
 public:
  void Append(bool value, uint32_t length) {
    if (length == 0) return;
    if (counts_.empty()) {
      if (value) counts_.push_back(0);
      counts_.push_back(length);
      current_ = value;
      return;
    }
    if (value == current_) {
      counts_.back() += length;
    } else {
      counts_.push_back(length);
      current_ = value;
    }
  }

  std::vector<uint32_t> Take() && {
    if (counts_.empty()) counts_.push_back(0);
    return std::move(counts_);
  }

 private:
  std::vector<uint32_t> counts_;
  bool current_ = false;
};

}  // namespace

BinaryRaster::BinaryRaster(int width, int height)
    : width_(width), height_(height) {
  CheckDimensions(width, height);
  bits_.assign(static_cast<size_t>(width) * height, 0);
}

BinaryRaster::BinaryRaster(int width, int height, std::vector<uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  CheckDimensions(width, height);
  if (bits_.size() != static_cast<size_t>(width) * height) {
    throw Error(ErrorCode::kDimension, "raster buffer size mismatch");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

BinaryMask::BinaryMask(int width, int height, std::vector<uint32_t> counts)
    : width_(width), height_(height), counts_(std::move(counts)) {
  CheckDimensions(width, height);
  if (counts_.empty()) {
    throw Error(ErrorCode::kCorruptMask, "mask has no runs");
  }
  uint64_t total = 0;
  for (size_t i = 0; i < counts_.size(); ++i) {
    if (i > 0 && counts_[i] == 0) {
      throw Error(ErrorCode::kCorruptMask,
                  "zero-length run at position " + std::to_string(i));
    }
    total += counts_[i];
  }
  if (total != static_cast<uint64_t>(pixel_count())) {
    throw Error(ErrorCode::kCorruptMask,
                "run counts sum to " + std::to_string(total) + ", expected " +
                    std::to_string(pixel_count()));
  }
}

BinaryMask BinaryMask::Empty(int width, int height) {
  CheckDimensions(width, height);
  return BinaryMask(width, height,
                    {static_cast<uint32_t>(int64_t{width} * height)});
}

BinaryMask BinaryMask::Full(int width, int height) {
  CheckDimensions(width, height);
  return BinaryMask(width, height,
                    {0, static_cast<uint32_t>(int64_t{width} * height)});
}

BinaryMask RleEncode(const BinaryRaster& raster) {
  RunBuilder runs;
  for (int col = 0; col < raster.width(); ++col) {
    for (int row = 0; row < raster.height(); ++row) {
      runs.Append(raster.at(row, col), 1);
    }
  }
  return BinaryMask(raster.width(), raster.height(), std::move(runs).Take());
}

BinaryRaster RleDecode(const BinaryMask& mask) {
  BinaryRaster raster(mask.width(), mask.height());
  const int h = mask.height();
  int64_t pos = 0;
  bool value = false;
  for (uint32_t run : mask.counts()) {
    if (value) {
      for (int64_t p = pos; p < pos + run; ++p) {
        raster.set(static_cast<int>(p % h), static_cast<int>(p / h), true);
      }
    }
    pos += run;
    value = !value;
  }
  return raster;
}

int64_t MaskArea(const BinaryMask& mask) {
  int64_t area = 0;
  const auto& counts = mask.counts();
  for (size_t i = 1; i < counts.size(); i += 2) area += counts[i];
  return area;
}

std::optional<BBox> MaskBBox(const BinaryMask& mask) {
  const int64_t h = mask.height();
  int min_x = mask.width(), max_x = -1;
  int min_y = mask.height(), max_y = -1;
  int64_t pos = 0;
  const auto& counts = mask.counts();
  for (size_t i = 0; i < counts.size(); ++i) {
    const int64_t start = pos;
    pos += counts[i];
    if (i % 2 == 0 || counts[i] == 0) continue;
    const int64_t last = pos - 1;
    const int x0 = static_cast<int>(start / h);
    const int x1 = static_cast<int>(last / h);
    min_x = std::min(min_x, x0);
    max_x = std::max(max_x, x1);
    if (x0 != x1) {
      // A run spanning two columns touches both the bottom and top rows.
      min_y = 0;
      max_y = mask.height() - 1;
    } else {
      min_y = std::min(min_y, static_cast<int>(start % h));
      max_y = std::max(max_y, static_cast<int>(last % h));
    }
  }
  if (max_x < 0) return std::nullopt;
  return BBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

BinaryMask MaskBoolean(const BinaryMask& a, const BinaryMask& b,
                       BooleanOp op) {
  CheckSameSize(a, b);
  const auto& ca = a.counts();
  const auto& cb = b.counts();
  size_t ia = 0, ib = 0;
  uint32_t left_a = ca[0], left_b = cb[0];
  bool va = false, vb = false;
  RunBuilder out;
  int64_t remaining = a.pixel_count();
  while (remaining > 0) {
    while (left_a == 0) {
      left_a = ca[++ia];
      va = !va;
    }
    while (left_b == 0) {
      left_b = cb[++ib];
      vb = !vb;
    }
    const uint32_t step = std::min(left_a, left_b);
    bool v = false;
    switch (op) {
      case BooleanOp::kUnion:
        v = va || vb;
        break;
      case BooleanOp::kIntersection:
        v = va && vb;
        break;
      case BooleanOp::kDifference:
        v = va && !vb;
        break;
      case BooleanOp::kXor:
        v = va != vb;
        break;
    }
    out.Append(v, step);
    left_a -= step;
    left_b -= step;
    remaining -= step;
  }
  return BinaryMask(a.width(), a.height(), std::move(out).Take());
}

bool MaskContains(const BinaryMask& mask, int x, int y) {
  if (x < 0 || y < 0 || x >= mask.width() || y >= mask.height()) return false;
  const int64_t target = int64_t{x} * mask.height() + y;
  int64_t pos = 0;
  bool value = false;
  for (uint32_t run : mask.counts()) {
    if (target < pos + run) return value;
    pos += run;
    value = !value;
  }
  return false;
}

Pixel NthSetPixel(const BinaryMask& mask, int64_t ordinal) {
  if (ordinal < 0 || ordinal >= MaskArea(mask)) {
    throw Error(ErrorCode::kDegenerateInput, "set-pixel ordinal out of range");
  }
  const int64_t h = mask.height();
  int64_t pos = 0;
  const auto& counts = mask.counts();
  for (size_t i = 0; i < counts.size(); ++i) {
    if (i % 2 == 1) {
      if (ordinal < counts[i]) {
        const int64_t p = pos + ordinal;
        return Pixel{static_cast<int>(p / h), static_cast<int>(p % h)};
      }
      ordinal -= counts[i];
    }
    pos += counts[i];
  }
  throw Error(ErrorCode::kCorruptMask, "set pixel not found");
}

BinaryMask ErodeMask(const BinaryMask& mask, int radius) {
  if (radius < 0) {
    throw Error(ErrorCode::kValidation, "erosion radius must be >= 0");
  }
  if (radius == 0) return mask;
  const BinaryRaster src = RleDecode(mask);
  const int w = src.width();
  const int h = src.height();
  // Pass 1: horizontal window. Pass 2: vertical window over pass 1. A pixel
  // survives when no in-image neighbour in the window is unset.
  std::vector<uint8_t> horiz(static_cast<size_t>(w) * h, 0);
  std::vector<int> unset_prefix(static_cast<size_t>(std::max(w, h)) + 1);
  for (int row = 0; row < h; ++row) {
    unset_prefix[0] = 0;
    for (int col = 0; col < w; ++col) {
      unset_prefix[col + 1] = unset_prefix[col] + (src.at(row, col) ? 0 : 1);
    }
    for (int col = 0; col < w; ++col) {
      const int lo = std::max(0, col - radius);
      const int hi = std::min(w - 1, col + radius);
      horiz[static_cast<size_t>(row) * w + col] =
          unset_prefix[hi + 1] - unset_prefix[lo] == 0 ? 1 : 0;
    }
  }
  BinaryRaster out(w, h);
  for (int col = 0; col < w; ++col) {
    unset_prefix[0] = 0;
    for (int row = 0; row < h; ++row) {
      unset_prefix[row + 1] =
          unset_prefix[row] + (horiz[static_cast<size_t>(row) * w + col] ? 0 : 1);
    }
    for (int row = 0; row < h; ++row) {
      const int lo = std::max(0, row - radius);
      const int hi = std::min(h - 1, row + radius);
      out.set(row, col, unset_prefix[hi + 1] - unset_prefix[lo] == 0);
    }
  }
  return RleEncode(out);
}

}  // namespace coralab
