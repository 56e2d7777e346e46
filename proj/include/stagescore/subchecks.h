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

#ifndef STAGESCORE_SUBCHECKS_H_
#define STAGESCORE_SUBCHECKS_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stagescore {

// Named subcheck values in reporting order. Every value lies in [0, 1].
using Subchecks = std::vector<std::pair<std::string, double>>;

// Value of `name`, or -1 when absent.
inline double SubcheckValue(const Subchecks& subchecks, std::string_view name) {
  for (const auto& [key, value] : subchecks) {
    if (key == name) return value;
  }
  return -1.0;
}

}  // namespace stagescore

#endif  // STAGESCORE_SUBCHECKS_H_
