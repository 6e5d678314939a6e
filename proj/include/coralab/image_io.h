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
#ifndef CORALAB_IMAGE_IO_H_
#define CORALAB_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace coralab {

// 8-bit RGB, row-major, interleaved.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Single-channel image with up to 16 bits per pixel, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> values;
};

struct ImageInfo {
  int width = 0;
  int height = 0;
};

// PNG, JPEG and WEBP by extension (case-insensitive).
bool IsSupportedImagePath(const std::filesystem::path& path);

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

// All decoders throw kImport when the data cannot be decoded.
ImageInfo ReadImageInfo(const std::filesystem::path& path);
RgbImage DecodeImage(std::span<const uint8_t> bytes);
GrayImage ReadGrayImage(const std::filesystem::path& path);

// Fixed encoder settings, so identical pixels always give identical bytes.
std::vector<uint8_t> EncodePng(const RgbImage& image);
std::vector<uint8_t> EncodeGrayPng(const GrayImage& image);

}  // namespace coralab

#endif  // CORALAB_IMAGE_IO_H_
