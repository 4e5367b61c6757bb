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
#include "hopforge/qa_data_factory.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include <spdlog/spdlog.h>

#include "json.hpp"

namespace hopforge {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::size_t word_length(const LabelledParagraph& p) {
  std::size_t n = 0;
  for (const auto& s : p.sentences) n += text::count_words(s);
  return n;
}

struct Slot {
  const LabelledParagraph* para = nullptr;
  std::vector<bool> included;
  bool withheld = false;
};

struct Addition {
  std::size_t slot = 0;
  std::size_t sentence = 0;
  bool whole = false;
};

class Assembler {
 public:
  Assembler(std::string_view question, const std::vector<QaOption>& mc,
            const text::TokenCounter& counter)
      : question_(question), mc_(mc), counter_(counter) {}

  std::vector<Slot> slots;

  std::string context() const {
    std::vector<std::string> pieces;
    for (const auto& s : slots) {
      std::vector<std::string> kept;
      for (std::size_t i = 0; i < s.included.size(); ++i) {
        if (s.included[i]) kept.push_back(s.para->sentences[i]);
      }
      if (kept.empty()) continue;
      pieces.push_back(render_titled(s.withheld ? "" : s.para->title, join(kept)));
    }
    return join(pieces);
  }

  std::string input() const { return render_qa_input(question_, mc_, context()); }
  std::size_t tokens() const { return counter_(input()); }

  ContextBuild finish(std::string_view target, std::string dataset) const {
    ContextBuild out;
    out.sample = {input(), std::string(target), std::move(dataset), "group2"};
    for (const auto& s : slots) {
      bool any = false;
      for (std::size_t i = 0; i < s.included.size(); ++i) {
        if (!s.included[i]) continue;
        any = true;
        out.context_sentences.push_back(s.para->sentences[i]);
      }
      if (any) {
        ++out.paragraphs;
        out.titles_withheld += s.withheld ? 1 : 0;
      }
    }
    return out;
  }

 private:
  std::string_view question_;
  const std::vector<QaOption>& mc_;
  const text::TokenCounter& counter_;
};

// `mandatory[g]` holds the sentences of gold g that must appear; `forbidden[g]`
// those that must not; `dropped[g]` removes the paragraph entirely.
ContextBuild assemble(std::string_view question, std::string_view target, std::string dataset,
                      const std::vector<LabelledParagraph>& golds,
                      const std::vector<std::set<std::size_t>>& mandatory,
                      const std::vector<std::set<std::size_t>>& forbidden,
                      const std::vector<bool>& dropped,
                      const std::vector<LabelledParagraph>& negatives, std::mt19937_64& rng,
                      const ContextBuildOptions& options, const std::vector<QaOption>& mc,
                      const text::TokenCounter& counter) {
  std::bernoulli_distribution withhold(options.title_withhold);
  Assembler a(question, mc, counter);
  std::vector<Addition> additions;

  double mean_len = 0.0;
  for (const auto& g : golds) mean_len += static_cast<double>(word_length(g));
  mean_len /= static_cast<double>(golds.size());

  for (std::size_t g = 0; g < golds.size(); ++g) {
    if (dropped[g]) continue;
    Slot s{&golds[g], std::vector<bool>(golds[g].sentences.size(), false), withhold(rng)};
    for (auto i : mandatory[g]) s.included[i] = true;
    for (std::size_t i = 0; i < s.included.size(); ++i) {
      if (!s.included[i] && !forbidden[g].contains(i)) additions.push_back({a.slots.size(), i, false});
    }
    a.slots.push_back(std::move(s));
  }

  std::vector<const LabelledParagraph*> matched;
  for (const auto& n : negatives) {
    const auto len = static_cast<double>(word_length(n));
    if (std::abs(len - mean_len) <= options.length_tolerance * mean_len) matched.push_back(&n);
  }
  if (matched.empty() && !negatives.empty()) {
    spdlog::debug("no length-matched negatives, using all {}", negatives.size());
    for (const auto& n : negatives) matched.push_back(&n);
  }
  for (const auto* n : matched) {
    additions.push_back({a.slots.size(), 0, true});
    a.slots.push_back({n, std::vector<bool>(n->sentences.size(), false), withhold(rng)});
  }

  if (a.tokens() > options.budget) {
    throw DataFactoryError("gold sentences alone exceed the token budget");
  }

  // Shuffle paragraph order, remapping addition slot indices.
  std::vector<std::size_t> perm(a.slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> where(perm.size());
  std::vector<Slot> shuffled;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    where[perm[i]] = i;
    shuffled.push_back(std::move(a.slots[perm[i]]));
  }
  a.slots = std::move(shuffled);
  for (auto& add : additions) add.slot = where[add.slot];

  std::shuffle(additions.begin(), additions.end(), rng);
  for (const auto& add : additions) {
    auto& s = a.slots[add.slot];
    auto before = s.included;
    if (add.whole) {
      std::fill(s.included.begin(), s.included.end(), true);
    } else {
      s.included[add.sentence] = true;
    }
    if (a.tokens() > options.budget) s.included = std::move(before);
  }
  return a.finish(target, std::move(dataset));
}

std::vector<std::set<std::size_t>> gold_mandatory(const std::vector<LabelledParagraph>& golds) {
  std::vector<std::set<std::size_t>> out;
  for (const auto& g : golds) {
    std::set<std::size_t> m;
    for (auto i : g.gold) {
      if (i >= g.sentences.size()) throw DataFactoryError("gold sentence index out of range");
      m.insert(i);
    }
    if (g.gold.empty()) {
      for (std::size_t i = 0; i < g.sentences.size(); ++i) m.insert(i);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::string qa_sample_record(const QASample& s) {
  return nlohmann::json{{"input", s.input},
                        {"target", s.target},
                        {"dataset", s.dataset},
                        {"group", s.group}}
      .dump();
}

QASample emit_ratd(std::string_view question, std::string_view answer, const PackedContext& packed,
                   RatdVariant variant, std::string_view dataset,
                   const std::vector<QaOption>& options, std::size_t budget,
                   const text::TokenCounter& counter) {
  if (packed.context.empty()) throw DataFactoryError("RATD sample needs a non-empty context");
  std::vector<Fragment> fragments = packed.fragments;
  if (variant == RatdVariant::kMax4Paras && fragments.size() > kMax4ParasFragments) {
    fragments.resize(kMax4ParasFragments);
  }
  const auto head = counter(render_qa_input(question, options));
  const auto room = budget > head ? budget - head : 0;
  const auto repacked = pack(fragments, room, packed.initial, counter);
  if (repacked.context.empty()) throw DataFactoryError("RATD context does not fit the budget");
  std::string name(dataset);
  name += variant == RatdVariant::kFull ? "_ratd" : "_ratd_max4paras";
  return {render_qa_input(question, options, repacked.context), std::string(answer), name,
          "group2"};
}

QASample emit_opendomain(std::string_view question, std::string_view answer,
                         std::string_view dataset, const std::vector<QaOption>& options) {
  return {render_qa_input(question, options), std::string(answer),
          std::string(dataset) + "_opendomain", "group2"};
}

ContextBuild build_goldplusdistractors(std::string_view question, std::string_view answer,
                                       const std::vector<LabelledParagraph>& golds,
                                       const std::vector<LabelledParagraph>& negatives,
                                       std::mt19937_64& rng, std::string_view dataset,
                                       const ContextBuildOptions& options,
                                       const std::vector<QaOption>& mc_options,
                                       const text::TokenCounter& counter) {
  if (golds.empty()) throw DataFactoryError("gold+distractor sample needs at least one gold");
  const auto mandatory = gold_mandatory(golds);
  const std::vector<std::set<std::size_t>> forbidden(golds.size());
  const std::vector<bool> dropped(golds.size(), false);
  return assemble(question, answer, std::string(dataset) + "_goldplusdistractors", golds,
                  mandatory, forbidden, dropped, negatives, rng, options, mc_options, counter);
}

ContextBuild build_unanswerable(std::string_view question,
                                const std::vector<LabelledParagraph>& golds,
                                const std::vector<LabelledParagraph>& negatives,
                                std::mt19937_64& rng, std::string_view dataset,
                                const ContextBuildOptions& options,
                                const std::vector<QaOption>& mc_options,
                                const text::TokenCounter& counter) {
  if (golds.empty()) throw DataFactoryError("unanswerable sample needs at least one gold");
  auto mandatory = gold_mandatory(golds);
  std::vector<std::set<std::size_t>> forbidden(golds.size());
  std::vector<bool> dropped(golds.size(), false);

  // A gold unit is one labelled sentence, or a whole unlabelled paragraph.
  struct Unit {
    std::size_t gold;
    std::optional<std::size_t> sentence;
  };
  std::vector<Unit> units;
  for (std::size_t g = 0; g < golds.size(); ++g) {
    if (golds[g].gold.empty()) {
      units.push_back({g, std::nullopt});
    } else {
      for (auto i : mandatory[g]) units.push_back({g, i});
    }
  }
  std::shuffle(units.begin(), units.end(), rng);
  const auto drop = std::uniform_int_distribution<std::size_t>(1, units.size())(rng);
  std::bernoulli_distribution drop_para(options.drop_paragraph);
  for (std::size_t u = 0; u < drop; ++u) {
    const auto& unit = units[u];
    if (!unit.sentence || drop_para(rng)) {
      dropped[unit.gold] = true;
    } else {
      mandatory[unit.gold].erase(*unit.sentence);
      forbidden[unit.gold].insert(*unit.sentence);
    }
  }

  auto build = assemble(question, kNoAnswer, std::string(dataset) + "_noanswer", golds, mandatory,
                        forbidden, dropped, negatives, rng, options, mc_options, counter);
  for (std::size_t g = 0; g < golds.size(); ++g) {
    const auto all = gold_mandatory({golds[g]}).front();
    for (auto i : all) {
      if (dropped[g] || forbidden[g].contains(i)) build.missing_gold.push_back(golds[g].sentences[i]);
    }
  }
  return build;
}

std::vector<std::pair<std::size_t, std::size_t>> detect_entity_spans(
    const std::vector<std::string>& words) {
  static const std::vector<std::string_view> suffixes = {"tion", "sion", "ment", "ness", "ity",
                                                         "ism",  "ship", "ance", "ence"};
  auto core = [](std::string_view w) {
    while (!w.empty() && text::is_ascii_punct(w.back())) w.remove_suffix(1);
    while (!w.empty() && text::is_ascii_punct(w.front())) w.remove_prefix(1);
    return w;
  };
  auto capital = [&](std::size_t i) {
    auto w = core(words[i]);
    return !w.empty() && w.front() >= 'A' && w.front() <= 'Z';
  };
  auto sentence_start = [&](std::size_t i) {
    if (i == 0) return true;
    const auto& prev = words[i - 1];
    return !prev.empty() && (prev.back() == '.' || prev.back() == '!' || prev.back() == '?');
  };
  auto ends_clause = [&](std::size_t i) {
    const auto& w = words[i];
    return !w.empty() && text::is_ascii_punct(w.back());
  };

  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < words.size()) {
    if (capital(i)) {
      std::size_t j = i + 1;
      while (j < words.size() && capital(j) && !ends_clause(j - 1)) ++j;
      if (!(j == i + 1 && sentence_start(i))) out.push_back({i, j});
      i = j;
      continue;
    }
    auto w = core(words[i]);
    for (auto s : suffixes) {
      if (w.size() > s.size() + 2 && w.ends_with(s)) {
        out.push_back({i, i + 1});
        break;
      }
    }
    ++i;
  }
  return out;
}

namespace {

// Greedy paragraph concatenation whose unmasked token count, plus one for
// the separator, stays within `budget`.
std::string assemble_text(const std::vector<std::string>& paragraphs, std::size_t budget,
                          const text::TokenCounter& counter) {
  std::string text;
  for (const auto& p : paragraphs) {
    std::string candidate = text;
    for (auto w : text::split_whitespace(p)) {
      if (!candidate.empty()) candidate += ' ';
      candidate += w;
    }
    if (counter(candidate) + 1 > budget) continue;
    text = std::move(candidate);
  }
  return text;
}

SelfSupervisedSample mask_text(std::string text, std::mt19937_64& rng, std::string_view dataset,
                               const MaskOptions& options) {
  SelfSupervisedSample out;
  out.text = std::move(text);
  std::vector<std::string> words;
  for (auto w : text::split_whitespace(out.text)) words.emplace_back(w);
  if (words.empty()) throw DataFactoryError("self-supervised sample needs non-empty text");

  const auto wanted = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(options.span_rate * static_cast<double>(words.size()))));
  // blocked[i] marks words that are masked or adjacent to a mask, so
  // sentinels never touch.
  std::vector<bool> blocked(words.size() + 1, false);
  auto is_free = [&](std::size_t b, std::size_t e) {
    if (b > 0 && blocked[b - 1]) return false;
    for (std::size_t i = b; i <= e && i < words.size(); ++i) {
      if (blocked[i]) return false;
    }
    return true;
  };
  auto take = [&](std::size_t b, std::size_t e, MaskKind kind) {
    for (std::size_t i = b; i < e; ++i) blocked[i] = true;
    std::vector<std::string> piece(words.begin() + static_cast<std::ptrdiff_t>(b),
                                   words.begin() + static_cast<std::ptrdiff_t>(e));
    out.spans.push_back({b, e, kind, join(piece)});
  };

  auto entities = options.detector ? options.detector(words) : decltype(options.detector(words)){};
  std::shuffle(entities.begin(), entities.end(), rng);
  std::size_t next_entity = 0;
  std::bernoulli_distribution pick_entity(options.entity_probability);
  std::uniform_int_distribution<std::size_t> span_len(1, std::max<std::size_t>(1, options.max_random_span));

  for (std::size_t n = 0; n < wanted; ++n) {
    bool placed = false;
    if (pick_entity(rng)) {
      while (next_entity < entities.size() && !placed) {
        auto [b, e] = entities[next_entity++];
        if (e <= words.size() && b < e && is_free(b, e)) {
          take(b, e, MaskKind::kEntity);
          placed = true;
        }
      }
    }
    for (int attempt = 0; attempt < 32 && !placed; ++attempt) {
      const auto len = std::min(span_len(rng), words.size());
      const auto b = std::uniform_int_distribution<std::size_t>(0, words.size() - len)(rng);
      if (is_free(b, b + len)) {
        take(b, b + len, MaskKind::kRandom);
        placed = true;
      }
    }
  }
  std::sort(out.spans.begin(), out.spans.end(),
            [](const MaskedSpan& a, const MaskedSpan& b) { return a.begin < b.begin; });

  std::vector<std::string> masked;
  std::vector<std::string> target;
  std::size_t i = 0;
  for (std::size_t s = 0; s < out.spans.size(); ++s) {
    const auto& span = out.spans[s];
    for (; i < span.begin; ++i) masked.push_back(words[i]);
    masked.push_back(mask_sentinel(s));
    target.push_back(mask_sentinel(s));
    target.push_back(span.text);
    i = span.end;
  }
  for (; i < words.size(); ++i) masked.push_back(words[i]);

  out.sample = {render_qa_input(join(masked)), join(target), std::string(dataset), "mlm"};
  return out;
}

}  // namespace

SelfSupervisedSample build_selfsupervised(const std::vector<std::string>& paragraphs,
                                          std::mt19937_64& rng, std::string_view dataset,
                                          const MaskOptions& options,
                                          const text::TokenCounter& counter) {
  // A sentinel can count as more tokens than the words it hides, so a masked
  // input may overshoot. Retry on a tighter text budget from the same RNG
  // state until it fits.
  std::size_t text_budget = options.budget;
  while (true) {
    auto attempt_rng = rng;
    auto out = mask_text(assemble_text(paragraphs, text_budget, counter), attempt_rng, dataset,
                         options);
    const auto tokens = counter(out.sample.input);
    if (tokens <= options.budget) {
      rng = attempt_rng;
      return out;
    }
    const auto overflow = tokens - options.budget;
    if (overflow >= text_budget) throw DataFactoryError("masked sample cannot fit the token budget");
    text_budget -= overflow;
  }
}

std::string unmask(std::string_view masked_text, std::string_view target) {
  // Split the target on sentinels.
  std::vector<std::string> spans;
  for (std::size_t s = 0;; ++s) {
    const auto tag = mask_sentinel(s);
    auto at = target.find(tag);
    if (at == std::string_view::npos) break;
    auto start = at + tag.size();
    auto next = target.find(mask_sentinel(s + 1), start);
    auto piece = target.substr(start, next == std::string_view::npos ? std::string_view::npos
                                                                       : next - start);
    spans.emplace_back(text::trim(piece));
  }
  std::string out(masked_text);
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto tag = mask_sentinel(s);
    auto at = out.find(tag);
    if (at == std::string::npos) throw DataFactoryError("sentinel " + tag + " missing from input");
    out.replace(at, tag.size(), spans[s]);
  }
  return out;
}

}  // namespace hopforge
