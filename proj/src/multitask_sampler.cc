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
#include "hopforge/multitask_sampler.h"

#include <cmath>
#include <istream>

#include "hopforge/text.h"
#include "json.hpp"

namespace hopforge {

namespace {

const TaskSpec& weighted_draw(const std::vector<const TaskSpec*>& pool, std::vector<double> w,
                              std::mt19937_64& rng) {
  std::discrete_distribution<std::size_t> d(w.begin(), w.end());
  return *pool[d(rng)];
}

std::vector<double> pool_error_weights(const std::vector<const TaskSpec*>& pool, double eps) {
  std::vector<TaskSpec> copy;
  for (const auto* t : pool) copy.push_back(*t);
  return error_weights(copy, eps);
}

}  // namespace

std::string_view to_string(TaskGroup g) {
  switch (g) {
    case TaskGroup::kGroup1: return "group1";
    case TaskGroup::kGroup2: return "group2";
    case TaskGroup::kMlm: return "mlm";
  }
  return "unknown";
}

TaskGroup task_group_from_string(std::string_view s) {
  if (s == "group1") return TaskGroup::kGroup1;
  if (s == "group2") return TaskGroup::kGroup2;
  if (s == "mlm") return TaskGroup::kMlm;
  throw SamplerError("unknown task group '" + std::string(s) + "'");
}

void Schedule::validate() const {
  if (stage != 1 && stage != 2) throw SamplerError("stage must be 1 or 2");
  for (double l : {lambda_mlm, lambda_group2}) {
    if (!(l >= 0.0 && l <= 1.0)) throw SamplerError("lambda must lie in [0,1]");
  }
  if (!(epsilon >= 0.0)) throw SamplerError("epsilon must be non-negative");
}

std::vector<double> error_weights(std::span<const TaskSpec> tasks, double epsilon) {
  std::vector<double> w;
  double total = 0.0;
  for (const auto& t : tasks) {
    const double acc = t.last_dev_accuracy.value_or(0.0);
    if (!(acc >= 0.0 && acc <= 1.0)) {
      throw SamplerError("accuracy of " + t.name + " outside [0,1]");
    }
    w.push_back((1.0 - acc) + epsilon);
    total += w.back();
  }
  if (total <= 0.0) {
    // Every task mastered with a zero floor: fall back to uniform.
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
    return w;
  }
  for (auto& x : w) x /= total;
  return w;
}

const TaskSpec& next_task(const Schedule& schedule, std::span<const TaskSpec> tasks,
                          std::mt19937_64& rng) {
  schedule.validate();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<const TaskSpec*> mlm, group1, group2;
  for (const auto& t : tasks) {
    if (schedule.stage == 1 && t.stage2_only) continue;
    switch (t.group) {
      case TaskGroup::kMlm: mlm.push_back(&t); break;
      case TaskGroup::kGroup1: group1.push_back(&t); break;
      case TaskGroup::kGroup2: group2.push_back(&t); break;
    }
  }

  if (schedule.stage == 1) {
    if (u(rng) < schedule.lambda_mlm) {
      if (mlm.empty()) throw SamplerError("stage 1 needs an MLM task");
      if (mlm.size() == 1) return *mlm.front();
      std::uniform_int_distribution<std::size_t> pick(0, mlm.size() - 1);
      return *mlm[pick(rng)];
    }
    std::vector<const TaskSpec*> rest = group1;
    rest.insert(rest.end(), group2.begin(), group2.end());
    if (rest.empty()) throw SamplerError("stage 1 has no non-MLM tasks");
    return weighted_draw(rest, pool_error_weights(rest, schedule.epsilon), rng);
  }

  if (u(rng) < schedule.lambda_group2) {
    if (group2.empty()) throw SamplerError("stage 2 has no group 2 tasks");
    return weighted_draw(group2, pool_error_weights(group2, schedule.epsilon), rng);
  }
  group1.insert(group1.end(), mlm.begin(), mlm.end());
  if (group1.empty()) throw SamplerError("stage 2 has no group 1 tasks");
  std::uniform_int_distribution<std::size_t> pick(0, group1.size() - 1);
  return *group1[pick(rng)];
}

std::vector<std::size_t> reduce_dev(std::size_t count, std::size_t target) {
  if (count == 0) return {};
  if (target == 0) throw SamplerError("reduce_dev target must be positive");
  const auto n = std::max<long long>(
      1, std::llround(static_cast<double>(count) / static_cast<double>(target)));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; i += static_cast<std::size_t>(n)) out.push_back(i);
  return out;
}

std::vector<TaskSpec> load_task_manifest(std::istream& in) {
  std::vector<TaskSpec> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TaskSpec t;
      t.name = j.at("name").get<std::string>();
      t.group = task_group_from_string(j.at("group").get<std::string>());
      t.sample_count = j.value("sample_count", std::size_t{0});
      t.stage2_only = j.value("stage2_only", false);
      if (j.contains("accuracy") && !j["accuracy"].is_null()) {
        t.last_dev_accuracy = j["accuracy"].get<double>();
      }
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw SamplerError("manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void apply_accuracies(std::vector<TaskSpec>& tasks, std::istream& accuracy_json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(accuracy_json);
  } catch (const nlohmann::json::exception& e) {
    throw SamplerError(std::string("accuracy file: ") + e.what());
  }
  for (auto& t : tasks) {
    if (!j.contains(t.name)) continue;
    const double acc = j[t.name].get<double>();
    if (!(acc >= 0.0 && acc <= 1.0)) throw SamplerError("accuracy of " + t.name + " outside [0,1]");
    t.last_dev_accuracy = acc;
  }
}

}  // namespace hopforge
