// Copyright 2026 The ctrnli Authors.
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

#ifndef CTRNLI_LOG_HPP_
#define CTRNLI_LOG_HPP_

#include <string_view>

// Plain-string logging entry points for translation units that cannot
// include spdlog directly (the libtorch headers ship their own fmt).
namespace ctrnli::log {

void info(std::string_view message);
void debug(std::string_view message);

}  // namespace ctrnli::log

#endif  // CTRNLI_LOG_HPP_
