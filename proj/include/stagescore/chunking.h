// Copyright 2026 The Stagescore Authors.
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

#ifndef STAGESCORE_CHUNKING_H_
#define STAGESCORE_CHUNKING_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace stagescore {

// Splits `text` into contiguous windows of at most `max_units`
// whitespace-delimited units, greedily. A window never ends inside a marked
// quote span; when a span alone exceeds the limit its window grows to hold
// it. Each unit keeps its trailing whitespace (leading whitespace joins the
// first window), so concatenating the windows reproduces `text` exactly.
// Empty text yields no windows; unbalanced markers are an error.
absl::StatusOr<std::vector<std::string>> ChunkPassage(std::string_view text,
                                                      int max_units);

}  // namespace stagescore

#endif  // STAGESCORE_CHUNKING_H_
