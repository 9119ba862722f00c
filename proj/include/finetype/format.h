// Copyright 2026 The Finetype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FINETYPE_FORMAT_H_
#define FINETYPE_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

namespace finetype {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);
// Fixed-point with `decimals` digits.
std::string FormatFixed(double value, int decimals);

// Strict parsers; throw Error on trailing garbage or overflow.
double ParseDouble(std::string_view text);
long ParseLong(std::string_view text);

// Backslash escapes for space, tab, newline and backslash so a string can
// sit in a space-separated text field.
std::string EscapeField(std::string_view text);
std::string UnescapeField(std::string_view text);
// Splits on single spaces.
std::vector<std::string> SplitFields(std::string_view line);

}  // namespace finetype

#endif  // FINETYPE_FORMAT_H_
