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
#ifndef CORALAB_RLE_JSON_H_
#define CORALAB_RLE_JSON_H_

#include "coralab/mask.h"
#include "json.hpp"

namespace coralab {

// {"size":[height,width],"counts":[...]}, the uncompressed COCO RLE object.
nlohmann::json MaskToJson(const BinaryMask& mask);

// Throws kCorruptMask on malformed objects or inconsistent counts.
BinaryMask MaskFromJson(const nlohmann::json& value);

}  // namespace coralab

#endif  // CORALAB_RLE_JSON_H_
