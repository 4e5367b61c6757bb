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
#include "hopforge/context_assembly.h"

#include <algorithm>

#include "json.hpp"

namespace hopforge {

namespace {

std::string join_sentences(const Paragraph& para, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i <= last; ++i) {
    if (!out.empty()) out += ' ';
    out += para.sentence(i);
  }
  return out;
}

void append(std::string& ctx, std::string_view piece) {
  if (!ctx.empty()) ctx += ' ';
  ctx += piece;
}

}  // namespace

std::vector<Fragment> recover_fragment(const Paragraph& paragraph,
                                       const std::map<std::size_t, double>& selected, double p) {
  const auto n = paragraph.sentence_count();
  std::vector<Fragment> out;
  for (const auto& [idx, score] : selected) {
    if (idx >= n) {
      throw ContextError("sentence " + std::to_string(idx) + " out of range for " +
                         paragraph.para_id);
    }
    const std::size_t lo = idx == 0 ? 0 : idx - 1;
    const std::size_t hi = std::min(idx + 1, n - 1);
    // Map iteration is ascending, so only the last window can overlap.
    if (!out.empty() && lo <= out.back().last_sentence + 1) {
      auto& f = out.back();
      f.last_sentence = std::max(f.last_sentence, hi);
      f.s_max = std::max(f.s_max, score);
      continue;
    }
    Fragment f;
    f.para_id = paragraph.para_id;
    f.title = paragraph.title;
    f.first_sentence = lo;
    f.last_sentence = hi;
    f.p = p;
    f.s_max = score;
    out.push_back(std::move(f));
  }
  for (auto& f : out) {
    f.text = join_sentences(paragraph, f.first_sentence, f.last_sentence);
    f.order_score = 0.5 * f.p + 0.5 * f.s_max;
  }
  return out;
}

std::vector<Fragment> recover_fragment(const Paragraph& paragraph,
                                       const std::set<std::size_t>& selected) {
  std::map<std::size_t, double> scores;
  for (auto i : selected) scores[i] = 0.0;
  return recover_fragment(paragraph, scores);
}

std::vector<Fragment> order_fragments(std::vector<Fragment> fragments) {
  for (auto& f : fragments) f.order_score = 0.5 * f.p + 0.5 * f.s_max;
  std::stable_sort(fragments.begin(), fragments.end(), [](const Fragment& a, const Fragment& b) {
    if (a.order_score != b.order_score) return a.order_score > b.order_score;
    if (a.para_id != b.para_id) return a.para_id < b.para_id;
    return a.first_sentence < b.first_sentence;
  });
  return fragments;
}

PackedContext pack(const std::vector<Fragment>& ordered, std::size_t budget,
                   const std::optional<InitialParagraph>& initial,
                   const text::TokenCounter& counter) {
  PackedContext out;
  if (initial) {
    out.context = render_titled(initial->title, initial->text);
    out.token_count = counter(out.context);
    if (out.token_count > budget) {
      throw ContextError("initial paragraph needs " + std::to_string(out.token_count) +
                         " tokens, budget is " + std::to_string(budget));
    }
    out.initial = initial;
  }
  for (const auto& f : ordered) {
    std::string candidate = out.context;
    append(candidate, render_titled(f.title, f.text));
    const auto tokens = counter(candidate);
    if (tokens > budget) continue;
    out.context = std::move(candidate);
    out.token_count = tokens;
    out.fragments.push_back(f);
  }
  return out;
}

PackedContext truncate_fragments(const PackedContext& packed, std::size_t n,
                                 const text::TokenCounter& counter) {
  std::vector<Fragment> keep(packed.fragments.begin(),
                             packed.fragments.begin() +
                                 static_cast<std::ptrdiff_t>(std::min(n, packed.fragments.size())));
  return pack(keep, static_cast<std::size_t>(-1), packed.initial, counter);
}

std::string context_record(std::string_view question, const PackedContext& packed) {
  nlohmann::json frags = nlohmann::json::array();
  for (const auto& f : packed.fragments) {
    frags.push_back({{"title", f.title}, {"text", f.text}, {"order_score", f.order_score}});
  }
  return nlohmann::json{{"question", question},
                        {"context", packed.context},
                        {"fragments", std::move(frags)},
                        {"token_count", packed.token_count}}
      .dump();
}

}  // namespace hopforge
