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
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hopforge/corpus_store.h"
#include "hopforge/qa_format.h"
#include "hopforge/text.h"

namespace hopforge {

inline constexpr std::size_t kDefaultTokenBudget = 512;

class ContextError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A contiguous run of sentences [first_sentence, last_sentence] from one
/// paragraph.
struct Fragment {
  std::string para_id;
  std::string title;
  std::string text;
  std::size_t first_sentence = 0;
  std::size_t last_sentence = 0;
  double p = 0.0;
  double s_max = 0.0;        // best selected-sentence score inside the fragment
  double order_score = 0.0;  // 0.5 p + 0.5 s_max

  bool operator==(const Fragment&) const = default;
};

/// Expands each selected sentence by one neighbour on either side and merges
/// overlapping or touching windows. `selected` maps sentence index to its
/// score; the fragment's s_max is the largest score it covers. Throws
/// ContextError for an out-of-range index.
std::vector<Fragment> recover_fragment(const Paragraph& paragraph,
                                       const std::map<std::size_t, double>& selected, double p = 0.0);
std::vector<Fragment> recover_fragment(const Paragraph& paragraph,
                                       const std::set<std::size_t>& selected);

/// Sets order_score and sorts descending; ties by para_id, then position.
std::vector<Fragment> order_fragments(std::vector<Fragment> fragments);

struct InitialParagraph {
  std::string title;
  std::string text;
  bool operator==(const InitialParagraph&) const = default;
};

struct PackedContext {
  std::string context;
  std::vector<Fragment> fragments;  // included, in context order
  std::optional<InitialParagraph> initial;  // rendered first when present
  std::size_t token_count = 0;

  std::size_t fragment_count() const { return fragments.size(); }
};

/// Greedy packing in the given order. A fragment that would push the context
/// over `budget` tokens is skipped whole and later, shorter ones may still
/// fit. Throws ContextError if the initial paragraph alone is over budget.
PackedContext pack(const std::vector<Fragment>& ordered, std::size_t budget = kDefaultTokenBudget,
                   const std::optional<InitialParagraph>& initial = std::nullopt,
                   const text::TokenCounter& counter = text::default_token_counter());

/// Keeps only the first `n` fragments, re-rendering the context.
PackedContext truncate_fragments(const PackedContext& packed, std::size_t n,
                                 const text::TokenCounter& counter = text::default_token_counter());

/// {"question","context","fragments":[{"title","text","order_score"}],"token_count"}
std::string context_record(std::string_view question, const PackedContext& packed);

}  // namespace hopforge
