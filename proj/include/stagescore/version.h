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

#ifndef STAGESCORE_VERSION_H_
#define STAGESCORE_VERSION_H_

#include <string_view>

#ifndef STAGESCORE_VERSION
#define STAGESCORE_VERSION "0.0.0-dev"
#endif

namespace stagescore {

inline constexpr std::string_view kEngineVersion = STAGESCORE_VERSION;

}  // namespace stagescore

#endif  // STAGESCORE_VERSION_H_
