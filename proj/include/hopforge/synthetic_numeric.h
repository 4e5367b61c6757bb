// Copyright 2026 The Hopforge Authors
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
#pragma once

// Synthetic numeric reasoning samples in variablised form: the question is
// phrased over symbols and the context assigns them, always including at
// least one distractor variable the question never mentions.
//
//   "x + y \n x=1; y=3; z=0;"  ->  "4"

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hopforge/qa_data_factory.h"

namespace hopforge {

enum class NumericKind {
  kSignedArith,
  kDateDiff,
  kMinMaxAvg,
  kPercent,
  kYesNoNums,
  kYesNoDates,
  kDateMinMax,
  kArgMinMax,
};

std::string_view to_string(NumericKind kind);
std::optional<NumericKind> numeric_kind_from_string(std::string_view name);
const std::vector<NumericKind>& all_numeric_kinds();

inline constexpr std::int64_t kMinSyntheticInt = -999;
inline constexpr std::int64_t kMaxSyntheticInt = 9999;
// 1700-01-01 .. 2020-12-31 inclusive.
inline constexpr std::chrono::year_month_day kMinSyntheticDate{
    std::chrono::year{1700}, std::chrono::month{1}, std::chrono::day{1}};
inline constexpr std::chrono::year_month_day kMaxSyntheticDate{
    std::chrono::year{2020}, std::chrono::month{12}, std::chrono::day{31}};

using NumericValue = std::variant<std::int64_t, std::chrono::sys_days>;

struct Assignment {
  std::string name;
  NumericValue value;
  bool distractor = false;
};

struct SyntheticSample {
  NumericKind kind = NumericKind::kSignedArith;
  std::string question;  // over variable names
  std::vector<Assignment> assignments;
  QASample sample;       // input = question \n assignments, target = exact answer
};

/// ISO yyyy-mm-dd.
std::string format_date(std::chrono::sys_days d);
std::optional<std::chrono::sys_days> parse_date(std::string_view s);

/// num/den rounded half away from zero to two decimals, trailing zeros
/// removed ("7", "-2.5", "3.33"). Throws std::invalid_argument if den == 0.
std::string format_ratio(std::int64_t num, std::int64_t den);

/// "x=1; y=3; z=0;"
std::string render_assignments(const std::vector<Assignment>& assignments);

SyntheticSample gen_synthetic_numeric(NumericKind kind, std::mt19937_64& rng,
                                      std::string_view dataset = "synthetic_numeric");

}  // namespace hopforge
