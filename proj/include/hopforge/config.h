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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hopforge/context_assembly.h"
#include "hopforge/evidence_set.h"
#include "hopforge/reranker_fusion.h"

namespace hopforge {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat TOML-ish key=value file. "[section]" headers prefix subsequent keys
/// as "section.key". Lines starting with '#' or ';' are comments; values may
/// be wrapped in double quotes.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  double get_double(std::string_view key, double fallback) const;
  std::size_t get_size(std::string_view key, std::size_t fallback) const;
  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

struct PipelineConfig {
  static constexpr std::size_t kDefaultK = 150;
  static constexpr std::size_t kInDomainEvalK = 25;
  static constexpr std::size_t kRatdK = 60;

  std::size_t t_max = 4;
  std::size_t k = kDefaultK;  // paragraphs retrieved per hop
  FusionConfig fusion;
  EvidenceConfig evidence;
  std::size_t token_budget = kDefaultTokenBudget;
  std::size_t query_sentences = 5;  // top evidence sentences whose paragraphs feed the next query
  std::size_t workers = 4;          // concurrent queries in run_batch

  /// Throws ConfigError when a value is out of range.
  void validate() const;
};

/// Reads keys from the pipeline, fusion, evidence and context sections over
/// `base`. Unknown keys in those sections raise ConfigError; other sections
/// are left alone.
PipelineConfig pipeline_config_from(const KeyValueConfig& kv, PipelineConfig base = {});

/// One row of the per-model training hyperparameter table.
struct ModelHyperparams {
  std::string model;      // config section name, e.g. "retriever"
  std::string optimizer;  // "adam" or "adamw"
  double initial_lr = 0.0;
  std::size_t batch_size = 0;
  std::size_t grad_accum = 1;
  std::size_t train_steps = 0;

  /// Train steps count batches, so optimizer steps = train_steps / grad_accum.
  std::size_t optimizer_steps() const { return train_steps / grad_accum; }
  bool operator==(const ModelHyperparams&) const = default;
};

std::vector<ModelHyperparams> default_hyperparams();

/// Applies "[model] initial_lr / batch_size / grad_accum / train_steps /
/// optimizer" overrides. Unknown models or keys raise ConfigError.
std::vector<ModelHyperparams> hyperparams_from(const KeyValueConfig& kv,
                                               std::vector<ModelHyperparams> base =
                                                   default_hyperparams());

}  // namespace hopforge
