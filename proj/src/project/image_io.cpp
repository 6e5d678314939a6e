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
#include "coralab/image_io.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "coralab/error.h"

namespace coralab {
namespace {

cv::Mat Decode(std::span<const uint8_t> bytes, int flags) {
  if (bytes.empty()) return {};
  const cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1,
                       const_cast<uint8_t*>(bytes.data()));
  try {
    return cv::imdecode(buffer, flags);
  } catch (const cv::Exception&) {
    return {};
  }
}

std::vector<uint8_t> Encode(const cv::Mat& mat) {
  std::vector<uint8_t> out;
  const std::vector<int> params{cv::IMWRITE_PNG_COMPRESSION, 6,
                                cv::IMWRITE_PNG_STRATEGY,
                                cv::IMWRITE_PNG_STRATEGY_DEFAULT};
  if (!cv::imencode(".png", mat, out, params)) {
    throw Error(ErrorCode::kIo, "PNG encoding failed");
  }
  return out;
}

}  // namespace

bool IsSupportedImagePath(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".webp";
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
}

ImageInfo ReadImageInfo(const std::filesystem::path& path) {
  if (!IsSupportedImagePath(path)) {
    throw Error(ErrorCode::kImport,
                "unsupported image format: " + path.string());
  }
  std::vector<uint8_t> bytes;
  try {
    bytes = ReadFileBytes(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kImport, e.what());
  }
  const cv::Mat mat = Decode(bytes, cv::IMREAD_UNCHANGED);
  if (mat.empty()) {
    throw Error(ErrorCode::kImport, "cannot decode image " + path.string());
  }
  return ImageInfo{mat.cols, mat.rows};
}

RgbImage DecodeImage(std::span<const uint8_t> bytes) {
  const cv::Mat bgr = Decode(bytes, cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw Error(ErrorCode::kImport, "cannot decode image data");
  }
  RgbImage image{bgr.cols, bgr.rows, {}};
  image.rgb.resize(static_cast<size_t>(bgr.cols) * bgr.rows * 3);
  for (int row = 0; row < bgr.rows; ++row) {
    const cv::Vec3b* src = bgr.ptr<cv::Vec3b>(row);
    uint8_t* dst = image.rgb.data() + static_cast<size_t>(row) * bgr.cols * 3;
    for (int col = 0; col < bgr.cols; ++col) {
      dst[3 * col + 0] = src[col][2];
      dst[3 * col + 1] = src[col][1];
      dst[3 * col + 2] = src[col][0];
    }
  }
  return image;
}

GrayImage ReadGrayImage(const std::filesystem::path& path) {
  std::vector<uint8_t> bytes;
  try {
    bytes = ReadFileBytes(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kImport, e.what());
  }
  cv::Mat mat = Decode(bytes, cv::IMREAD_ANYDEPTH | cv::IMREAD_GRAYSCALE);
  if (mat.empty()) {
    throw Error(ErrorCode::kImport, "cannot decode image " + path.string());
  }
  if (mat.depth() == CV_8U) mat.convertTo(mat, CV_16U);
  if (mat.depth() != CV_16U) {
    throw Error(ErrorCode::kImport,
                "unsupported grayscale depth in " + path.string());
  }
  GrayImage image{mat.cols, mat.rows, {}};
  image.values.resize(static_cast<size_t>(mat.cols) * mat.rows);
  for (int row = 0; row < mat.rows; ++row) {
    const uint16_t* src = mat.ptr<uint16_t>(row);
    std::copy(src, src + mat.cols,
              image.values.begin() + static_cast<ptrdiff_t>(row) * mat.cols);
  }
  return image;
}

std::vector<uint8_t> EncodePng(const RgbImage& image) {
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int row = 0; row < image.height; ++row) {
    cv::Vec3b* dst = bgr.ptr<cv::Vec3b>(row);
    const uint8_t* src =
        image.rgb.data() + static_cast<size_t>(row) * image.width * 3;
    for (int col = 0; col < image.width; ++col) {
      dst[col] = cv::Vec3b(src[3 * col + 2], src[3 * col + 1], src[3 * col]);
    }
  }
  return Encode(bgr);
}

std::vector<uint8_t> EncodeGrayPng(const GrayImage& image) {
  const bool wide = std::any_of(image.values.begin(), image.values.end(),
                                [](uint16_t v) { return v > 255; });
  cv::Mat mat(image.height, image.width, wide ? CV_16UC1 : CV_8UC1);
  for (int row = 0; row < image.height; ++row) {
    for (int col = 0; col < image.width; ++col) {
      const uint16_t v =
          image.values[static_cast<size_t>(row) * image.width + col];
      if (wide) {
        mat.at<uint16_t>(row, col) = v;
      } else {
        mat.at<uint8_t>(row, col) = static_cast<uint8_t>(v);
      }
    }
  }
  return Encode(mat);
}

}  // namespace coralab
