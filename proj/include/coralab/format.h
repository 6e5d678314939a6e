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
#ifndef CORALAB_FORMAT_H_
#define CORALAB_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

namespace coralab {

// Shortest fixed-notation decimal that round-trips, always with a
// fractional part ("0.0", "0.25", "0.0000001").
std::string FormatReal(double value);

// Fixed-point with the given number of decimals, e.g. FormatFixed(0.88884, 4)
// == "0.8888".
std::string FormatFixed(double value, int decimals);

// One RFC 4180 record terminated by LF. Fields containing a comma, quote,
// CR or LF are quoted with embedded quotes doubled.
std::string CsvRow(const std::vector<std::string>& fields);

// Splits CSV text into records (handles quoted fields). Accepts LF or CRLF.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace coralab

#endif  // CORALAB_FORMAT_H_
