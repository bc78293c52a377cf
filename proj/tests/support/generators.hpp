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

// Seeded random generators for property tests, plus small test helpers.

#ifndef CONTRIBSCOPE_TESTS_SUPPORT_GENERATORS_HPP_
#define CONTRIBSCOPE_TESTS_SUPPORT_GENERATORS_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "contribscope/analytics.hpp"
#include "contribscope/types.hpp"

namespace contribscope::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Each role independently with probability p.
  RoleSet role_subset(double p) {
    RoleSet s;
    for (std::size_t l = 0; l < kNumRoles; ++l) s.set(l, coin(p));
    return s;
  }

  /// 1..max_authors authors with random role subsets; some authors may be
  /// left without roles.
  std::vector<RoleSet> assignment(int max_authors) {
    const int n = uniform_int(1, max_authors);
    std::vector<RoleSet> out;
    const double density = uniform(0.05, 0.6);
    for (int a = 0; a < n; ++a) out.push_back(coin(0.1) ? RoleSet{} : role_subset(density));
    return out;
  }

  Eigen::VectorXd vector(int n, double lo = -10.0, double hi = 10.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  /// Counts of 0..max_per_type per type, summed into proportions.
  TypeCounts counts(int max_per_type) {
    TypeCounts c;
    for (int i = 0; i < 5; ++i) c(i) = uniform_int(0, max_per_type);
    return c;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CONTRIBSCOPE_FIXTURES) / name;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::random_device rd;
  const auto p = std::filesystem::temp_directory_path() /
                 ("contribscope_" + tag + "_" + std::to_string(rd()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace contribscope::testing

#endif  // CONTRIBSCOPE_TESTS_SUPPORT_GENERATORS_HPP_
