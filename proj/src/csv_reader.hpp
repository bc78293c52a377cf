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

#ifndef CONTRIBSCOPE_SRC_CSV_READER_HPP_
#define CONTRIBSCOPE_SRC_CSV_READER_HPP_

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include <boost/tokenizer.hpp>

#include "contribscope/text.hpp"
#include "contribscope/types.hpp"

namespace contribscope {

// Reads a small CSV file with a fixed header. Blank lines and lines starting
// with '#' are skipped. `handle(line_number, fields)` sees exactly
// header.size() fields per record.
template <typename Handler>
void read_csv(std::istream& in, const std::vector<std::string>& header,
              Handler&& handle) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  std::string line;
  std::size_t line_number = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string> fields;
    try {
      Tokenizer tok(line, boost::escaped_list_separator<char>('\\', ',', '"'));
      for (const std::string& f : tok) fields.push_back(trim(f));
    } catch (const boost::escaped_list_error& e) {
      throw ValidationError("csv line " + std::to_string(line_number) + ": " +
                            e.what());
    }
    if (!seen_header) {
      if (fields != header) {
        throw ValidationError("csv line " + std::to_string(line_number) +
                              ": unexpected header");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ValidationError("csv line " + std::to_string(line_number) +
                            ": expected " + std::to_string(header.size()) +
                            " fields");
    }
    handle(line_number, fields);
  }
  if (!seen_header) throw ValidationError("csv: missing header");
}

}  // namespace contribscope

#endif  // CONTRIBSCOPE_SRC_CSV_READER_HPP_
