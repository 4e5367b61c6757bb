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
#include "hopforge/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hopforge/text.h"

namespace hopforge {

namespace {

double to_double(std::string_view key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + v + "'");
  }
}

std::size_t to_size(std::string_view key, const std::string& v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    // Allow "99K" / "1M" shorthand, as in training tables.
    if (!v.empty() && (v.back() == 'K' || v.back() == 'M')) {
      const auto base = to_size(key, v.substr(0, v.size() - 1));
      return base * (v.back() == 'K' ? 1000 : 1000000);
    }
    throw ConfigError("'" + std::string(key) + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::pair<std::string_view, std::string_view> split_key(std::string_view full) {
  auto dot = full.find('.');
  if (dot == std::string_view::npos) return {{}, full};
  return {full.substr(0, dot), full.substr(dot + 1)};
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig out;
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = text::trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section");
      section = std::string(text::trim(s.substr(1, s.size() - 2)));
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = text::trim(s.substr(0, eq));
    auto value = text::trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    out.values_[std::move(full)] = std::string(value);
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in);
}

bool KeyValueConfig::contains(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  return v ? to_double(key, *v) : fallback;
}

std::size_t KeyValueConfig::get_size(std::string_view key, std::size_t fallback) const {
  auto v = get(key);
  return v ? to_size(key, *v) : fallback;
}

void PipelineConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(t_max, "pipeline.t_max");
  positive(k, "pipeline.k");
  positive(token_budget, "context.token_budget");
  positive(query_sentences, "pipeline.query_sentences");
  positive(workers, "pipeline.workers");
  positive(evidence.max_set, "evidence.max_set");
  positive(evidence.max_selected, "evidence.max_selected");
  positive(evidence.per_hop_candidates, "evidence.per_hop_candidates");
  if (!(fusion.w >= 0.0 && fusion.w <= 1.0)) throw ConfigError("fusion.w must lie in [0,1]");
  if (!(evidence.threshold >= 0.0 && evidence.threshold <= 1.0)) {
    throw ConfigError("evidence.threshold must lie in [0,1]");
  }
  if (evidence.max_set > 9) throw ConfigError("evidence.max_set cannot exceed 9");
  if (evidence.min_selected > evidence.max_selected) {
    throw ConfigError("evidence.min_selected exceeds evidence.max_selected");
  }
}

PipelineConfig pipeline_config_from(const KeyValueConfig& kv, PipelineConfig c) {
  static const std::set<std::string, std::less<>> known = {
      "pipeline.t_max",          "pipeline.k",
      "pipeline.query_sentences", "pipeline.workers",
      "fusion.w",                "evidence.threshold",
      "evidence.threshold_target", "evidence.max_selected",
      "evidence.min_selected",   "evidence.max_set",
      "evidence.per_hop_candidates", "context.token_budget"};
  static const std::set<std::string, std::less<>> owned = {"pipeline", "fusion", "evidence",
                                                           "context"};
  for (const auto& [key, value] : kv.values()) {
    auto [section, name] = split_key(key);
    if (owned.contains(section) && !known.contains(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  c.t_max = kv.get_size("pipeline.t_max", c.t_max);
  c.k = kv.get_size("pipeline.k", c.k);
  c.query_sentences = kv.get_size("pipeline.query_sentences", c.query_sentences);
  c.workers = kv.get_size("pipeline.workers", c.workers);
  c.fusion.w = kv.get_double("fusion.w", c.fusion.w);
  c.evidence.threshold = kv.get_double("evidence.threshold", c.evidence.threshold);
  c.evidence.max_selected = kv.get_size("evidence.max_selected", c.evidence.max_selected);
  c.evidence.min_selected = kv.get_size("evidence.min_selected", c.evidence.min_selected);
  c.evidence.max_set = kv.get_size("evidence.max_set", c.evidence.max_set);
  c.evidence.per_hop_candidates =
      kv.get_size("evidence.per_hop_candidates", c.evidence.per_hop_candidates);
  if (auto t = kv.get("evidence.threshold_target")) {
    if (*t == "combined") {
      c.evidence.target = ThresholdTarget::kCombined;
    } else if (*t == "sentence") {
      c.evidence.target = ThresholdTarget::kSentenceScore;
    } else {
      throw ConfigError("evidence.threshold_target must be 'combined' or 'sentence'");
    }
  }
  c.token_budget = kv.get_size("context.token_budget", c.token_budget);
  c.validate();
  return c;
}

std::vector<ModelHyperparams> default_hyperparams() {
  return {
      {"retriever", "adam", 2e-5, 150, 1, 99'000},
      {"retriever_memory_bank", "adam", 1e-5, 250, 1, 59'000},
      {"paragraph_reranker", "adam", 5e-5, 12, 8, 140'000},
      {"evidence_set_scorer", "adam", 5e-5, 12, 8, 140'000},
      {"qa_stage1", "adamw", 2e-5, 32, 4, 1'000'000},
      {"qa_stage2_base", "adamw", 2e-5, 32, 4, 1'000'000},
      {"qa_stage2_base_ratd", "adamw", 2e-5, 32, 4, 1'000'000},
      {"drop_finetuned", "adamw", 2e-5, 32, 4, 260'000},
      {"iirc_g_finetuned", "adamw", 2e-5, 32, 4, 40'000},
      {"iirc_r_finetuned", "adamw", 2e-5, 32, 4, 40'000},
  };
}

std::vector<ModelHyperparams> hyperparams_from(const KeyValueConfig& kv,
                                               std::vector<ModelHyperparams> base) {
  static const std::set<std::string, std::less<>> pipeline_sections = {"pipeline", "fusion",
                                                                       "evidence", "context"};
  for (const auto& [key, value] : kv.values()) {
    auto [section, name] = split_key(key);
    if (section.empty() || pipeline_sections.contains(section)) continue;
    auto it = std::find_if(base.begin(), base.end(),
                           [&](const ModelHyperparams& m) { return m.model == section; });
    if (it == base.end()) throw ConfigError("unknown model section '" + std::string(section) + "'");
    if (name == "initial_lr") {
      it->initial_lr = to_double(key, value);
    } else if (name == "batch_size") {
      it->batch_size = to_size(key, value);
    } else if (name == "grad_accum") {
      it->grad_accum = to_size(key, value);
      if (it->grad_accum == 0) throw ConfigError(key + " must be positive");
    } else if (name == "train_steps") {
      it->train_steps = to_size(key, value);
    } else if (name == "optimizer") {
      if (value != "adam" && value != "adamw") throw ConfigError(key + " must be adam or adamw");
      it->optimizer = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return base;
}

}  // namespace hopforge
