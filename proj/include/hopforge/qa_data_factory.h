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
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopforge/context_assembly.h"
#include "hopforge/qa_format.h"
#include "hopforge/text.h"

namespace hopforge {

class DataFactoryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::string_view kNoAnswer = "<No Answer>";

struct QASample {
  std::string input;   // one of the QA input templates
  std::string target;
  std::string dataset;
  std::string group;

  bool operator==(const QASample&) const = default;
};

/// {"input","target","dataset","group"}
std::string qa_sample_record(const QASample& s);

// ---------------------------------------------------------------------------
// Retrieval-augmented samples

enum class RatdVariant { kFull, kMax4Paras };

inline constexpr std::size_t kMax4ParasFragments = 4;

/// Reading-comprehension sample over an Iterator context. Fragments are
/// re-packed so the whole input stays within `budget`. Throws
/// DataFactoryError on an empty context.
QASample emit_ratd(std::string_view question, std::string_view answer, const PackedContext& packed,
                   RatdVariant variant, std::string_view dataset, const std::vector<QaOption>& options = {},
                   std::size_t budget = kDefaultTokenBudget,
                   const text::TokenCounter& counter = text::default_token_counter());

QASample emit_opendomain(std::string_view question, std::string_view answer,
                         std::string_view dataset, const std::vector<QaOption>& options = {});

// ---------------------------------------------------------------------------
// Gold + distractor contexts

/// A paragraph given as sentences. `gold` lists gold sentence indices; an
/// empty list on a gold paragraph means "unlabelled", i.e. the whole text is
/// evidence.
struct LabelledParagraph {
  std::string title;
  std::vector<std::string> sentences;
  std::vector<std::size_t> gold;
};

struct ContextBuildOptions {
  double title_withhold = 0.1;
  std::size_t budget = kDefaultTokenBudget;
  double length_tolerance = 0.2;  // negatives within +/-20% of the mean positive length
  double drop_paragraph = 0.5;    // unanswerable: chance a dropped sentence takes its paragraph
};

struct ContextBuild {
  QASample sample;
  std::size_t paragraphs = 0;      // paragraphs rendered into the context
  std::size_t titles_withheld = 0;
  std::vector<std::string> context_sentences;  // every sentence present, in context order
  std::vector<std::string> missing_gold;       // unanswerable builds only
};

/// Fully evidential context: every gold sentence plus distractor sentences
/// and paragraphs, filled toward the budget without cutting sentences.
/// Throws DataFactoryError with no gold paragraphs or when the gold
/// sentences alone do not fit.
ContextBuild build_goldplusdistractors(std::string_view question, std::string_view answer,
                                       const std::vector<LabelledParagraph>& golds,
                                       const std::vector<LabelledParagraph>& negatives,
                                       std::mt19937_64& rng, std::string_view dataset,
                                       const ContextBuildOptions& options = {},
                                       const std::vector<QaOption>& mc_options = {},
                                       const text::TokenCounter& counter =
                                           text::default_token_counter());

/// As above, but at least one gold unit (a labelled gold sentence or an
/// unlabelled gold paragraph) is removed and the target is "<No Answer>".
ContextBuild build_unanswerable(std::string_view question,
                                const std::vector<LabelledParagraph>& golds,
                                const std::vector<LabelledParagraph>& negatives,
                                std::mt19937_64& rng, std::string_view dataset,
                                const ContextBuildOptions& options = {},
                                const std::vector<QaOption>& mc_options = {},
                                const text::TokenCounter& counter = text::default_token_counter());

// ---------------------------------------------------------------------------
// Self-supervised span masking

enum class MaskKind { kEntity, kRandom };

/// Word-index span [begin, end) over whitespace tokens.
struct MaskedSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  MaskKind kind = MaskKind::kRandom;
  std::string text;
};

using SpanDetector =
    std::function<std::vector<std::pair<std::size_t, std::size_t>>(const std::vector<std::string>&)>;

/// Capitalised runs (ignoring a lone sentence-initial word) and words with
/// common noun suffixes.
std::vector<std::pair<std::size_t, std::size_t>> detect_entity_spans(
    const std::vector<std::string>& words);

struct MaskOptions {
  double entity_probability = 0.65;
  double span_rate = 0.05;  // masked spans per word
  std::size_t max_random_span = 3;
  std::size_t budget = kDefaultTokenBudget;
  SpanDetector detector = detect_entity_spans;
};

struct SelfSupervisedSample {
  QASample sample;
  std::string text;                // unmasked concatenation
  std::vector<MaskedSpan> spans;   // in text order
};

inline std::string mask_sentinel(std::size_t i) { return "<extra_id_" + std::to_string(i) + ">"; }

/// Concatenates paragraphs toward the budget and masks spans. The input is
/// the masked text in open-domain form; the target lists sentinel + span
/// pairs in order.
SelfSupervisedSample build_selfsupervised(const std::vector<std::string>& paragraphs,
                                          std::mt19937_64& rng, std::string_view dataset,
                                          const MaskOptions& options = {},
                                          const text::TokenCounter& counter =
                                              text::default_token_counter());

/// Re-inserts spans at their sentinels; the inverse of masking.
std::string unmask(std::string_view masked_input_text, std::string_view target);

}  // namespace hopforge
