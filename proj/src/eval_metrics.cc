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
#include "hopforge/eval_metrics.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <thread>

#include "hopforge/text.h"
#include "json.hpp"

namespace hopforge {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

double number_value(std::string_view w) { return std::stod(std::string(w)); }

std::size_t bag_overlap(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.size();
}

double f1_from(std::size_t common, std::size_t n_pred, std::size_t n_gold) {
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(n_pred);
  const double r = static_cast<double>(common) / static_cast<double>(n_gold);
  return 2.0 * p * r / (p + r);
}

}  // namespace

std::vector<std::string> normalize_words(std::string_view s) {
  std::string cleaned;
  cleaned.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const bool prev_digit = i > 0 && is_digit(s[i - 1]);
    const bool next_digit = i + 1 < s.size() && is_digit(s[i + 1]);
    if (c == ',' && prev_digit && next_digit) continue;  // 1,000 -> 1000
    if (c == '.' && prev_digit && next_digit) {
      cleaned += c;
      continue;
    }
    const bool word_start = i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]));
    if (c == '-' && next_digit && word_start) {
      cleaned += c;
      continue;
    }
    if (text::is_ascii_punct(c)) {
      cleaned += ' ';
      continue;
    }
    cleaned += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  std::vector<std::string> out;
  for (auto w : text::split_whitespace(cleaned)) {
    if (w == "a" || w == "an" || w == "the") continue;
    out.emplace_back(w);
  }
  return out;
}

std::vector<std::string> normalize_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& w : normalize_words(s)) {
    auto t = text::digit_tokenize(w);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

bool is_number_word(std::string_view w) {
  std::size_t i = 0;
  if (i < w.size() && w[i] == '-') ++i;
  const auto digits_start = i;
  while (i < w.size() && is_digit(w[i])) ++i;
  if (i == digits_start) return false;
  if (i < w.size() && w[i] == '.') {
    ++i;
    const auto frac_start = i;
    while (i < w.size() && is_digit(w[i])) ++i;
    if (i == frac_start) return false;
  }
  return i == w.size();
}

double token_f1(std::string_view prediction, std::string_view gold) {
  const auto p = normalize_tokens(prediction);
  const auto g = normalize_tokens(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  return f1_from(bag_overlap(p, g), p.size(), g.size());
}

double numeracy_f1(std::string_view prediction, std::string_view gold) {
  const auto gw = normalize_words(gold);
  if (gw.size() == 1 && is_number_word(gw.front())) {
    const double target = number_value(gw.front());
    bool found = false;
    for (const auto& w : normalize_words(prediction)) {
      if (is_number_word(w) && number_value(w) == target) {
        found = true;
        break;
      }
    }
    if (!found) return 0.0;
  }
  return token_f1(prediction, gold);
}

int binary_match(std::string_view prediction, std::string_view gold) {
  const auto g = normalize_words(gold);
  if (g.size() != 1 || (g[0] != "yes" && g[0] != "no")) {
    throw MetricError("binary gold must be yes or no, got '" + std::string(gold) + "'");
  }
  const std::string opposite = g[0] == "yes" ? "no" : "yes";
  const auto p = normalize_words(prediction);
  const bool has_gold = std::find(p.begin(), p.end(), g[0]) != p.end();
  const bool has_opposite = std::find(p.begin(), p.end(), opposite) != p.end();
  return has_gold && !has_opposite ? 1 : 0;
}

std::size_t multichoice_select(std::string_view prediction, const std::vector<std::string>& options) {
  if (options.empty()) throw MetricError("multiple choice needs at least one option");
  std::size_t best = 0;
  double best_f1 = -1.0;
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double f = token_f1(prediction, options[i]);
    if (f > best_f1) {
      best_f1 = f;
      best = i;
    }
  }
  return best;
}

std::optional<std::size_t> resolve_option(std::string_view gold,
                                          const std::vector<std::string>& options) {
  auto g = text::trim(gold);
  auto letter_index = [&](char c) -> std::optional<std::size_t> {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (c < 'A' || c > 'Z') return std::nullopt;
    const auto idx = static_cast<std::size_t>(c - 'A');
    if (idx >= options.size()) return std::nullopt;
    return idx;
  };
  if (g.size() >= 3 && g[0] == '(' && g[2] == ')') return letter_index(g[1]);
  if (g.size() == 1 && std::isupper(static_cast<unsigned char>(g[0]))) return letter_index(g[0]);
  const auto norm = normalize_words(g);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (normalize_words(options[i]) == norm) return i;
  }
  return std::nullopt;
}

int multichoice_em(std::string_view prediction, const std::vector<std::string>& options,
                   std::size_t gold_index) {
  if (gold_index >= options.size()) throw MetricError("gold option index out of range");
  return multichoice_select(prediction, options) == gold_index ? 1 : 0;
}

SentenceScores sentence_em_f1(const std::set<SentenceId>& predicted, const std::set<SentenceId>& gold,
                              bool strict) {
  if (gold.empty()) throw MetricError("sentence metrics need a non-empty gold set");
  std::vector<SentenceId> common;
  std::set_intersection(predicted.begin(), predicted.end(), gold.begin(), gold.end(),
                        std::back_inserter(common));
  SentenceScores s;
  s.f1 = predicted.empty() ? 0.0 : f1_from(common.size(), predicted.size(), gold.size());
  const bool covers = common.size() == gold.size();
  s.em = (strict ? covers && predicted.size() == gold.size() : covers) ? 1.0 : 0.0;
  return s;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

BootstrapResult paired_bootstrap(std::span<const double> a, std::span<const double> b,
                                 std::size_t resamples, std::uint64_t seed, std::size_t threads) {
  if (a.size() != b.size()) throw MetricError("paired bootstrap needs equal-length score lists");
  if (a.empty()) throw MetricError("paired bootstrap needs at least one sample");
  if (resamples == 0) throw MetricError("paired bootstrap needs at least one resample");
  const auto n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];

  // mean(b*) >= mean(a*)  <=>  sum(a* - b*) <= 0. A small tolerance keeps
  // exact ties (e.g. identical inputs) from flipping on rounding noise.
  const double tol = 1e-12 * static_cast<double>(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> hits{0};
  auto worker = [&] {
    std::size_t local = 0;
    for (std::size_t r = next++; r < resamples; r = next++) {
      std::uint64_t state = text::splitmix64(seed ^ text::splitmix64(r + 1));
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        state += 0x9E3779B97F4A7C15ull;
        const auto z = text::splitmix64(state);
        const auto idx = static_cast<std::size_t>((static_cast<unsigned __int128>(z) * n) >> 64);
        sum += diff[idx];
      }
      if (sum <= tol) ++local;
    }
    hits += local;
  };
  {
    std::size_t t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    t = std::min(t, resamples);
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker);
  }

  BootstrapResult out;
  out.resamples = resamples;
  out.p_value = static_cast<double>(hits.load()) / static_cast<double>(resamples);
  out.significant = out.p_value < kSignificanceLevel;
  out.mean_a = mean(a);
  out.mean_b = mean(b);
  return out;
}

std::vector<GoldRecord> load_gold_jsonl(std::istream& in) {
  std::vector<GoldRecord> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      GoldRecord g;
      g.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      g.type = j.value("type", std::string("span"));
      if (g.type == "sent_set") {
        for (const auto& s : j.at("gold")) {
          g.gold_sentences.insert({s.at(0).get<std::string>(), s.at(1).get<std::size_t>()});
        }
      } else {
        g.gold = j.at("gold").get<std::string>();
      }
      if (j.contains("options")) g.options = j["options"].get<std::vector<std::string>>();
      static const std::set<std::string> types = {"span", "num", "binary", "mc", "sent_set"};
      if (!types.contains(g.type)) throw MetricError("unknown gold type '" + g.type + "'");
      if (g.type == "mc" && g.options.empty()) throw MetricError("mc gold lacks options");
      out.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw MetricError("gold line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<PredictionRecord> load_predictions_jsonl(std::istream& in) {
  std::vector<PredictionRecord> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      PredictionRecord p;
      p.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      const auto& pred = j.at("prediction");
      if (pred.is_array()) {
        for (const auto& s : pred) {
          p.sentences.insert({s.at(0).get<std::string>(), s.at(1).get<std::size_t>()});
        }
      } else {
        p.prediction = pred.get<std::string>();
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw MetricError("prediction line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Evaluation evaluate(const std::vector<GoldRecord>& gold, const std::vector<PredictionRecord>& preds,
                    bool strict_sentence_em) {
  std::map<std::string, const PredictionRecord*> by_id;
  for (const auto& p : preds) by_id[p.id] = &p;
  Evaluation e;
  for (const auto& g : gold) {
    double score = 0.0;
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      ++e.missing;
      if (g.type == "sent_set") e.sentence_em.push_back(0.0);
    } else {
      const auto& p = *it->second;
      if (g.type == "span" || g.type == "num") {
        score = numeracy_f1(p.prediction, g.gold);
      } else if (g.type == "binary") {
        score = binary_match(p.prediction, g.gold);
      } else if (g.type == "mc") {
        auto idx = resolve_option(g.gold, g.options);
        if (!idx) throw MetricError("gold '" + g.gold + "' matches no option for " + g.id);
        score = multichoice_em(p.prediction, g.options, *idx);
      } else {
        const auto s = sentence_em_f1(p.sentences, g.gold_sentences, strict_sentence_em);
        score = s.f1;
        e.sentence_em.push_back(s.em);
      }
    }
    e.ids.push_back(g.id);
    e.scores.push_back(score);
    e.by_type[g.type].push_back(score);
  }
  return e;
}

std::string evaluation_report(const Evaluation& e, const BootstrapResult* comparison) {
  nlohmann::json types = nlohmann::json::object();
  for (const auto& [t, v] : e.by_type) types[t] = {{"count", v.size()}, {"mean", mean(v)}};
  nlohmann::json out{{"count", e.scores.size()},
                     {"mean", mean(e.scores)},
                     {"missing", e.missing},
                     {"types", std::move(types)}};
  if (!e.sentence_em.empty()) out["sentence_em"] = mean(e.sentence_em);
  if (comparison) {
    out["bootstrap"] = {{"p_value", comparison->p_value},
                        {"resamples", comparison->resamples},
                        {"significant", comparison->significant},
                        {"mean_a", comparison->mean_a},
                        {"mean_b", comparison->mean_b}};
  }
  return out.dump(2);
}

}  // namespace hopforge
