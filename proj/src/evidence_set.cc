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
#include "hopforge/evidence_set.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace hopforge {

namespace {

using Key = std::pair<std::string, std::size_t>;

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0,1]: " + std::to_string(v));
  }
}

template <typename T>
bool key_less(const T& a, const T& b) {
  if (a.para_id != b.para_id) return a.para_id < b.para_id;
  return a.sent_idx < b.sent_idx;
}

}  // namespace

double combined_score(double p, double s_e) { return 0.5 * p + 0.5 * s_e; }

std::vector<EvidenceCandidate> select_next(const EvidenceSetState& prior,
                                           const std::vector<EvidenceCandidate>& reranked,
                                           const EvidenceConfig& config) {
  std::map<Key, EvidenceCandidate> pool;
  for (const auto& s : prior.sentences) {
    pool[{s.para_id, s.sent_idx}] = {s.para_id, s.sent_idx, s.title, s.text, s.p, s.combined};
  }
  const auto fresh = std::min(config.per_hop_candidates, reranked.size());
  for (std::size_t i = 0; i < fresh; ++i) {
    const auto& c = reranked[i];
    auto [it, inserted] = pool.try_emplace({c.para_id, c.sent_idx}, c);
    if (!inserted && c.score >= it->second.score) it->second = c;
  }
  std::vector<EvidenceCandidate> out;
  out.reserve(pool.size());
  for (auto& [key, c] : pool) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const EvidenceCandidate& a, const EvidenceCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return key_less(a, b);
  });
  if (out.size() > config.max_set) out.resize(config.max_set);
  return out;
}

EvidenceSetState commit(std::size_t hop, std::vector<EvidenceSentence> scored, double e,
                        const EvidenceConfig& config) {
  if (scored.empty()) throw std::invalid_argument("commit needs at least one candidate");
  require_unit(e, "e");
  for (auto& s : scored) {
    require_unit(s.p, "p");
    require_unit(s.s_e, "s_e");
    s.combined = combined_score(s.p, s.s_e);
  }
  std::sort(scored.begin(), scored.end(), [](const EvidenceSentence& a, const EvidenceSentence& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    return key_less(a, b);
  });
  // Duplicates keep their best-ranked occurrence.
  std::vector<EvidenceSentence> unique;
  for (auto& s : scored) {
    bool dup = std::any_of(unique.begin(), unique.end(), [&](const EvidenceSentence& u) {
      return u.para_id == s.para_id && u.sent_idx == s.sent_idx;
    });
    if (!dup) unique.push_back(std::move(s));
  }

  std::vector<EvidenceSentence> kept;
  for (const auto& s : unique) {
    if (kept.size() >= config.max_selected) break;
    const double v = config.target == ThresholdTarget::kCombined ? s.combined : s.s_e;
    if (v > config.threshold) kept.push_back(s);
  }
  if (kept.size() < config.min_selected) {
    const auto n = std::min(config.min_selected, unique.size());
    kept.assign(unique.begin(), unique.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return {hop, std::move(kept), e};
}

EvidenceSetState finalize(std::span<const EvidenceSetState> history) {
  if (history.empty()) throw std::invalid_argument("finalize needs a non-empty hop history");
  const EvidenceSetState* best = &history.front();
  for (const auto& s : history) {
    if (s.e > best->e) best = &s;
  }
  return *best;
}

std::string trace_line(const EvidenceSetState& state) {
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : state.sentences) {
    sentences.push_back({{"para_id", s.para_id},
                         {"sent_idx", s.sent_idx},
                         {"p", s.p},
                         {"s_e", s.s_e},
                         {"combined", s.combined}});
  }
  return nlohmann::json{{"hop", state.hop}, {"e", state.e}, {"sentences", std::move(sentences)}}
      .dump();
}

}  // namespace hopforge
