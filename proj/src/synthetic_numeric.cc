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
#include "hopforge/synthetic_numeric.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace hopforge {

namespace {

using std::chrono::sys_days;

const std::vector<std::string> kNames = {"x", "y", "z", "w", "v", "u"};

struct Names {
  std::vector<std::string> question;
  std::vector<std::string> distractors;
};

Names draw_names(std::size_t operands, std::mt19937_64& rng) {
  const std::size_t distractors = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  std::vector<std::string> pool = kNames;
  std::shuffle(pool.begin(), pool.end(), rng);
  Names n;
  n.question.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(operands));
  n.distractors.assign(pool.begin() + static_cast<std::ptrdiff_t>(operands),
                       pool.begin() + static_cast<std::ptrdiff_t>(operands + distractors));
  return n;
}

std::int64_t draw_int(std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::int64_t>(kMinSyntheticInt, kMaxSyntheticInt)(rng);
}

sys_days draw_date(std::mt19937_64& rng) {
  const auto lo = sys_days(kMinSyntheticDate).time_since_epoch().count();
  const auto hi = sys_days(kMaxSyntheticDate).time_since_epoch().count();
  return sys_days(std::chrono::days(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng)));
}

// Distinct values so min/max/arg questions have a unique answer.
template <typename Draw>
auto draw_distinct(std::size_t n, std::mt19937_64& rng, Draw draw) {
  std::vector<decltype(draw(rng))> out;
  while (out.size() < n) {
    auto v = draw(rng);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

std::string list_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += i + 1 == names.size() ? " and " : ", ";
    out += names[i];
  }
  return out;
}

std::string render_value(const NumericValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return format_date(std::get<sys_days>(v));
}

SyntheticSample finish(NumericKind kind, std::string question, const Names& names,
                       const std::vector<NumericValue>& values, std::mt19937_64& rng,
                       std::string target, std::string_view dataset, bool dates) {
  SyntheticSample s;
  s.kind = kind;
  s.question = std::move(question);
  for (std::size_t i = 0; i < names.question.size(); ++i) {
    s.assignments.push_back({names.question[i], values[i], false});
  }
  for (const auto& d : names.distractors) {
    NumericValue v = dates ? NumericValue(draw_date(rng)) : NumericValue(draw_int(rng));
    s.assignments.push_back({d, v, true});
  }
  // Present assignments in canonical name order so position leaks nothing.
  std::sort(s.assignments.begin(), s.assignments.end(), [](const Assignment& a, const Assignment& b) {
    return std::find(kNames.begin(), kNames.end(), a.name) <
           std::find(kNames.begin(), kNames.end(), b.name);
  });
  s.sample = {render_qa_input(s.question, {}, render_assignments(s.assignments)), std::move(target),
              std::string(dataset) + "_" + std::string(to_string(kind)), "group1"};
  return s;
}

}  // namespace

std::string_view to_string(NumericKind kind) {
  switch (kind) {
    case NumericKind::kSignedArith: return "signed-arith";
    case NumericKind::kDateDiff: return "date-diff";
    case NumericKind::kMinMaxAvg: return "min-max-avg";
    case NumericKind::kPercent: return "percent";
    case NumericKind::kYesNoNums: return "yn-nums";
    case NumericKind::kYesNoDates: return "yn-dates";
    case NumericKind::kDateMinMax: return "date-min-max";
    case NumericKind::kArgMinMax: return "arg-min-max";
  }
  return "unknown";
}

std::optional<NumericKind> numeric_kind_from_string(std::string_view name) {
  for (auto k : all_numeric_kinds()) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

const std::vector<NumericKind>& all_numeric_kinds() {
  static const std::vector<NumericKind> kinds = {
      NumericKind::kSignedArith, NumericKind::kDateDiff,   NumericKind::kMinMaxAvg,
      NumericKind::kPercent,     NumericKind::kYesNoNums,  NumericKind::kYesNoDates,
      NumericKind::kDateMinMax,  NumericKind::kArgMinMax};
  return kinds;
}

std::string format_date(sys_days d) {
  const std::chrono::year_month_day ymd(d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<sys_days> parse_date(std::string_view s) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (std::sscanf(std::string(s).c_str(), "%4d-%2u-%2u", &y, &m, &d) != 3) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days(ymd);
}

std::string format_ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("format_ratio: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const bool negative = num < 0;
  const std::int64_t a = negative ? -num : num;
  // Hundredths, rounded half away from zero.
  const std::int64_t hundredths = (a * 200 + den) / (2 * den);
  std::string out = std::to_string(hundredths / 100);
  const auto frac = hundredths % 100;
  if (frac != 0) {
    char buf[4];
    std::snprintf(buf, sizeof buf, "%02lld", static_cast<long long>(frac));
    std::string f(buf);
    if (f.back() == '0') f.pop_back();
    out += "." + f;
  }
  if (negative && hundredths != 0) out = "-" + out;
  return out;
}

std::string render_assignments(const std::vector<Assignment>& assignments) {
  std::string out;
  for (const auto& a : assignments) {
    if (!out.empty()) out += ' ';
    out += a.name + "=" + render_value(a.value) + ";";
  }
  return out;
}

SyntheticSample gen_synthetic_numeric(NumericKind kind, std::mt19937_64& rng,
                                      std::string_view dataset) {
  auto coin = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  switch (kind) {
    case NumericKind::kSignedArith: {
      const auto names = draw_names(2 + coin(2), rng);
      std::vector<NumericValue> values;
      std::string q = names.question[0];
      std::int64_t total = draw_int(rng);
      values.push_back(total);
      for (std::size_t i = 1; i < names.question.size(); ++i) {
        const auto v = draw_int(rng);
        values.push_back(v);
        const bool plus = coin(2) == 0;
        q += plus ? " + " : " - ";
        q += names.question[i];
        total += plus ? v : -v;
      }
      return finish(kind, q, names, values, rng, std::to_string(total), dataset, false);
    }
    case NumericKind::kDateDiff: {
      const auto names = draw_names(2, rng);
      const auto a = draw_date(rng), b = draw_date(rng);
      const auto days = (b - a).count();
      return finish(kind, "How many days are between " + list_names(names.question) + "?", names,
                    {a, b}, rng, std::to_string(days < 0 ? -days : days), dataset, true);
    }
    case NumericKind::kMinMaxAvg: {
      const auto names = draw_names(2 + coin(3), rng);
      std::vector<NumericValue> values;
      std::int64_t lo = 0, hi = 0, sum = 0;
      for (std::size_t i = 0; i < names.question.size(); ++i) {
        const auto v = draw_int(rng);
        values.push_back(v);
        lo = i == 0 ? v : std::min(lo, v);
        hi = i == 0 ? v : std::max(hi, v);
        sum += v;
      }
      const auto op = coin(3);
      static const char* kOps[] = {"min", "max", "average"};
      const std::string target = op == 0   ? std::to_string(lo)
                                 : op == 1 ? std::to_string(hi)
                                           : format_ratio(sum, static_cast<std::int64_t>(values.size()));
      return finish(kind,
                    std::string("What is the ") + kOps[op] + " of " + list_names(names.question) + "?",
                    names, values, rng, target, dataset, false);
    }
    case NumericKind::kPercent: {
      const auto names = draw_names(2, rng);
      const auto pct = std::uniform_int_distribution<std::int64_t>(1, 100)(rng);
      const auto base = draw_int(rng);
      return finish(kind,
                    "What is " + names.question[0] + " percent of " + names.question[1] + "?",
                    names, {pct, base}, rng, format_ratio(pct * base, 100), dataset, false);
    }
    case NumericKind::kYesNoNums:
    case NumericKind::kYesNoDates: {
      const bool dates = kind == NumericKind::kYesNoDates;
      const auto form = coin(3);  // 0: greater/after, 1: less/before, 2: between
      const auto names = draw_names(form == 2 ? 3 : 2, rng);
      std::vector<std::int64_t> raw;
      for (std::size_t i = 0; i < names.question.size(); ++i) {
        raw.push_back(dates ? draw_date(rng).time_since_epoch().count() : draw_int(rng));
      }
      // Force equality now and then so the strict comparisons get exercised.
      if (coin(8) == 0) raw[1] = raw[0];
      bool yes = false;
      std::string q;
      const auto& n = names.question;
      if (form == 0) {
        yes = raw[0] > raw[1];
        q = "Is " + n[0] + (dates ? " after " : " > ") + n[1] + "?";
      } else if (form == 1) {
        yes = raw[0] < raw[1];
        q = "Is " + n[0] + (dates ? " before " : " < ") + n[1] + "?";
      } else {
        yes = raw[0] > std::min(raw[1], raw[2]) && raw[0] < std::max(raw[1], raw[2]);
        q = "Is " + n[0] + " between " + n[1] + " and " + n[2] + "?";
      }
      std::vector<NumericValue> values;
      for (auto r : raw) {
        values.push_back(dates ? NumericValue(sys_days(std::chrono::days(r))) : NumericValue(r));
      }
      return finish(kind, q, names, values, rng, yes ? "yes" : "no", dataset, dates);
    }
    case NumericKind::kDateMinMax: {
      const auto names = draw_names(2 + coin(3), rng);
      const auto dates = draw_distinct(names.question.size(), rng, draw_date);
      const bool earliest = coin(2) == 0;
      const auto best = earliest ? *std::min_element(dates.begin(), dates.end())
                                 : *std::max_element(dates.begin(), dates.end());
      std::vector<NumericValue> values(dates.begin(), dates.end());
      return finish(kind,
                    std::string("Which is the ") + (earliest ? "earliest" : "latest") + " of " +
                        list_names(names.question) + "?",
                    names, values, rng, format_date(best), dataset, true);
    }
    case NumericKind::kArgMinMax: {
      const auto names = draw_names(2 + coin(3), rng);
      const auto nums = draw_distinct(names.question.size(), rng, draw_int);
      const bool smallest = coin(2) == 0;
      const auto it = smallest ? std::min_element(nums.begin(), nums.end())
                               : std::max_element(nums.begin(), nums.end());
      std::vector<NumericValue> values(nums.begin(), nums.end());
      return finish(kind,
                    std::string("Which is the ") + (smallest ? "smallest" : "largest") + " of " +
                        list_names(names.question) + "?",
                    names, values, rng, names.question[static_cast<std::size_t>(it - nums.begin())],
                    dataset, false);
    }
  }
  throw std::invalid_argument("unknown numeric kind");
}

}  // namespace hopforge
