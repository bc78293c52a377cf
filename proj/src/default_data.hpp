// Copyright 2026 The ContribScope Authors.
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

#ifndef CONTRIBSCOPE_SRC_DEFAULT_DATA_HPP_
#define CONTRIBSCOPE_SRC_DEFAULT_DATA_HPP_

#include <string_view>

namespace contribscope {

// Contents of data/*.csv, embedded at build time.
std::string_view default_cue_lexicon_csv();
std::string_view default_role_lexicon_csv();

}  // namespace contribscope

#endif  // CONTRIBSCOPE_SRC_DEFAULT_DATA_HPP_
