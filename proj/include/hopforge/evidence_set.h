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
#include <span>
#include <string>
#include <vector>

namespace hopforge {

enum class ThresholdTarget {
  kCombined,       // threshold 0.5p + 0.5s_e (default)
  kSentenceScore,  // threshold s_e alone
};

struct EvidenceConfig {
  double threshold = 0.1;
  std::size_t max_selected = 5;        // sentences kept per hop
  std::size_t min_selected = 2;        // fallback when too few clear the threshold
  std::size_t max_set = 9;             // sentences handed to the evidence scorer
  std::size_t per_hop_candidates = 9;  // reranked sentences considered per hop
  ThresholdTarget target = ThresholdTarget::kCombined;
};

/// A sentence competing for the next evidence set. `score` is what the
/// candidate is ranked by before evidence scoring: the fused reranker score
/// for fresh sentences, the last combined score for carried-over ones.
struct EvidenceCandidate {
  std::string para_id;
  std::size_t sent_idx = 0;
  std::string title;
  std::string text;
  double p = 0.0;
  double score = 0.0;

  bool operator==(const EvidenceCandidate&) const = default;
};

struct EvidenceSentence {
  std::string para_id;
  std::size_t sent_idx = 0;
  std::string title;
  std::string text;
  double p = 0.0;
  double s_e = 0.0;
  double combined = 0.0;  // 0.5 p + 0.5 s_e

  bool operator==(const EvidenceSentence&) const = default;
};

struct EvidenceSetState {
  std::size_t hop = 0;
  std::vector<EvidenceSentence> sentences;
  double e = 0.0;

  bool operator==(const EvidenceSetState&) const = default;
};

double combined_score(double p, double s_e);

/// Union of the prior set and the top `per_hop_candidates` reranked sentences
/// (`reranked` must already be in rank order), deduplicated by
/// (para_id, sent_idx) keeping the higher score, capped at `max_set`.
std::vector<EvidenceCandidate> select_next(const EvidenceSetState& prior,
                                           const std::vector<EvidenceCandidate>& reranked,
                                           const EvidenceConfig& config = {});

/// Ranks scored candidates by combined score and keeps up to `max_selected`
/// that clear the threshold, or the top `min_selected` if fewer qualify.
/// `scored[i].combined` is recomputed. Throws std::invalid_argument when
/// `scored` is empty or a score leaves [0, 1].
EvidenceSetState commit(std::size_t hop, std::vector<EvidenceSentence> scored, double e,
                        const EvidenceConfig& config = {});

/// The state with the highest e; the earliest hop wins ties.
EvidenceSetState finalize(std::span<const EvidenceSetState> history);

/// One JSON line: {hop, e, sentences:[{para_id, sent_idx, p, s_e, combined}]}.
std::string trace_line(const EvidenceSetState& state);

}  // namespace hopforge
