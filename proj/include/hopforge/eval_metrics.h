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
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hopforge {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lowercase, drop punctuation (keeping decimal points and removing
/// thousands separators inside numbers), drop a/an/the, split on whitespace.
std::vector<std::string> normalize_words(std::string_view s);

/// normalize_words() then digit-split, i.e. the token bag used by F1.
std::vector<std::string> normalize_tokens(std::string_view s);

/// True for "3", "-12", "4.50" style words.
bool is_number_word(std::string_view w);

/// Bag-of-tokens F1 over normalize_tokens(). Two empty bags score 1.
double token_f1(std::string_view prediction, std::string_view gold);

/// token_f1, except that a gold that normalises to a single number scores 0
/// unless the prediction contains that number.
double numeracy_f1(std::string_view prediction, std::string_view gold);

/// 1 iff the gold label ("yes"/"no") appears in the prediction and the
/// opposite label does not. Throws MetricError for another gold.
int binary_match(std::string_view prediction, std::string_view gold);

/// Index of the option with the highest token_f1 against the prediction;
/// the first listed option wins ties. Throws MetricError on no options.
std::size_t multichoice_select(std::string_view prediction, const std::vector<std::string>& options);

/// Resolves "B", "(B) bridge" or "bridge" to an option index.
std::optional<std::size_t> resolve_option(std::string_view gold, const std::vector<std::string>& options);

int multichoice_em(std::string_view prediction, const std::vector<std::string>& options,
                   std::size_t gold_index);

using SentenceId = std::pair<std::string, std::size_t>;

struct SentenceScores {
  double em = 0.0;
  double f1 = 0.0;
};

/// em = 1 iff gold is a subset of the prediction (or equal, when `strict`).
/// Throws MetricError on an empty gold set.
SentenceScores sentence_em_f1(const std::set<SentenceId>& predicted, const std::set<SentenceId>& gold,
                              bool strict = false);

struct BootstrapResult {
  double p_value = 1.0;
  std::size_t resamples = 0;
  bool significant = false;  // p < 0.05
  double mean_a = 0.0;
  double mean_b = 0.0;
};

inline constexpr double kSignificanceLevel = 0.05;

/// One-sided paired bootstrap for "a beats b": p is the fraction of index
/// resamples where mean(b) >= mean(a). Resample r draws from its own seeded
/// stream, so results do not depend on `threads`.
BootstrapResult paired_bootstrap(std::span<const double> a, std::span<const double> b,
                                 std::size_t resamples = 10000, std::uint64_t seed = 0,
                                 std::size_t threads = 0);

double mean(std::span<const double> v);

// ---------------------------------------------------------------------------
// File-level evaluation

struct GoldRecord {
  std::string id;
  std::string type;  // span | num | binary | mc | sent_set
  std::string gold;
  std::vector<std::string> options;  // mc
  std::set<SentenceId> gold_sentences;  // sent_set
};

struct PredictionRecord {
  std::string id;
  std::string prediction;
  std::set<SentenceId> sentences;  // sent_set predictions
};

std::vector<GoldRecord> load_gold_jsonl(std::istream& in);
std::vector<PredictionRecord> load_predictions_jsonl(std::istream& in);

struct Evaluation {
  std::vector<std::string> ids;  // gold order
  std::vector<double> scores;    // primary score per sample (missing prediction = 0)
  std::map<std::string, std::vector<double>> by_type;
  std::vector<double> sentence_em;  // sent_set samples only
  std::size_t missing = 0;
};

Evaluation evaluate(const std::vector<GoldRecord>& gold, const std::vector<PredictionRecord>& preds,
                    bool strict_sentence_em = false);

/// Report JSON: {"count","mean","missing","types":{t:{"count","mean"}},"sentence_em"?}.
std::string evaluation_report(const Evaluation& e, const BootstrapResult* comparison = nullptr);

}  // namespace hopforge
