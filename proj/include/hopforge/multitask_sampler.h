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

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hopforge {

class SamplerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TaskGroup { kGroup1, kGroup2, kMlm };

std::string_view to_string(TaskGroup g);
TaskGroup task_group_from_string(std::string_view s);

struct TaskSpec {
  std::string name;
  TaskGroup group = TaskGroup::kGroup1;
  std::optional<double> last_dev_accuracy;  // unset counts as 0
  std::size_t sample_count = 0;
  /// Stage-2-only tasks (e.g. RATD datasets) are ignored in stage 1.
  bool stage2_only = false;
};

struct Schedule {
  int stage = 1;
  double lambda_mlm = 0.35;
  double lambda_group2 = 0.8;
  double epsilon = 0.01;

  void validate() const;
};

/// w_i proportional to (1 - acc_i) + epsilon, normalised to sum to 1.
std::vector<double> error_weights(std::span<const TaskSpec> tasks, double epsilon = 0.01);

/// Stage 1: the MLM task with probability lambda_mlm, otherwise an
/// error-based draw over every other task. Stage 2: an error-based draw over
/// group 2 with probability lambda_group2, otherwise a uniform draw over
/// group 1 (which then also holds the MLM task). Throws SamplerError when the
/// chosen pool is empty.
const TaskSpec& next_task(const Schedule& schedule, std::span<const TaskSpec> tasks,
                          std::mt19937_64& rng);

/// Every n-th index with n = max(1, round(c / 1250)).
std::vector<std::size_t> reduce_dev(std::size_t count, std::size_t target = 1250);

/// Manifest JSONL: {"name","group","sample_count"?,"stage2_only"?}.
/// Accuracy JSON object: {"task": accuracy, ...}.
std::vector<TaskSpec> load_task_manifest(std::istream& in);
void apply_accuracies(std::vector<TaskSpec>& tasks, std::istream& accuracy_json);

}  // namespace hopforge
