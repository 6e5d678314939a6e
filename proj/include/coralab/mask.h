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
#ifndef CORALAB_MASK_H_
#define CORALAB_MASK_H_

#include <cstdint>
#include <optional>
#include <vector>

namespace coralab {

// Uncompressed binary raster, row-major, one byte per pixel (0 or 1).
class BinaryRaster {
 public:
  BinaryRaster(int width, int height);
  BinaryRaster(int width, int height, std::vector<uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  int64_t pixel_count() const { return int64_t{width_} * height_; }

  bool at(int row, int col) const { return bits_[Index(row, col)] != 0; }
  void set(int row, int col, bool value) {
    bits_[Index(row, col)] = value ? 1 : 0;
  }
  const std::vector<uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;

 private:
  size_t Index(int row, int col) const {
    return static_cast<size_t>(row) * width_ + col;
  }

  int width_;
  int height_;
  std::vector<uint8_t> bits_;
};

struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Run-length encoded binary mask in the uncompressed COCO layout: runs of
// alternating 0/1 over the column-major flattening, starting with zeros.
// Instances are always canonical (only the first run may be zero) so two
// masks with the same pixels always compare equal.
class BinaryMask {
 public:
  // Throws kDimension for non-positive sizes and kCorruptMask when the counts
  // do not sum to width * height or are not canonical.
  BinaryMask(int width, int height, std::vector<uint32_t> counts);

  static BinaryMask Empty(int width, int height);
  static BinaryMask Full(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int64_t pixel_count() const { return int64_t{width_} * height_; }
  const std::vector<uint32_t>& counts() const { return counts_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<uint32_t> counts_;
};

enum class BooleanOp { kUnion, kIntersection, kDifference, kXor };

BinaryMask RleEncode(const BinaryRaster& raster);
BinaryRaster RleDecode(const BinaryMask& mask);

int64_t MaskArea(const BinaryMask& mask);
// Tight box over set pixels; nullopt for an empty mask.
std::optional<BBox> MaskBBox(const BinaryMask& mask);

// Pixel-wise boolean combination, evaluated directly on the runs.
BinaryMask MaskBoolean(const BinaryMask& a, const BinaryMask& b, BooleanOp op);

bool MaskContains(const BinaryMask& mask, int x, int y);

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// The ordinal-th set pixel in column-major order. Requires
// 0 <= ordinal < MaskArea(mask).
Pixel NthSetPixel(const BinaryMask& mask, int64_t ordinal);

// Erosion with a (2r+1)x(2r+1) square structuring element. Neighbours that
// fall outside the image are ignored, so the image border is not treated as
// an object boundary.
BinaryMask ErodeMask(const BinaryMask& mask, int radius);

}  // namespace coralab

#endif  // CORALAB_MASK_H_
