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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hopforge/config.h"
#include "hopforge/context_assembly.h"
#include "hopforge/corpus_store.h"
#include "hopforge/dense_index.h"
#include "hopforge/evidence_set.h"
#include "hopforge/reranker_fusion.h"
#include "hopforge/scorers.h"
#include "hopforge/text.h"

namespace hopforge {

struct HopTrace {
  std::size_t t = 0;
  std::string query;
  std::vector<SearchResult> retrieved;
  std::vector<RankedSentence> reranked;  // the candidates offered to select_next
  EvidenceSetState state;
};

/// One JSON object per hop: {t, query, retrieved:[{para_id,score}], reranked, e, sentences}.
std::string hop_trace_line(const HopTrace& hop);

/// Raised when a scorer or the index fails twice in a row. Carries the hops
/// completed before the failure.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& what, std::vector<HopTrace> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<HopTrace>& partial_trace() const { return partial_; }

 private:
  std::vector<HopTrace> partial_;
};

struct QueryResult {
  PackedContext context;
  EvidenceSetState final_state;
  std::vector<HopTrace> hops;
  std::size_t best_hop = 0;
};

struct QueryInput {
  std::string id;
  std::string question;
  std::optional<InitialParagraph> initial;
  std::optional<std::string> answer;
};

/// Parses {"id","question","initial_paragraph"?,"answer"?}. The initial
/// paragraph is either a string or {"title","text"}. Throws
/// std::invalid_argument on malformed input.
QueryInput parse_query_line(std::string_view line);

/// Context record for one query, extended with id, best hop, evidence and the
/// answer when known.
std::string result_record(const QueryInput& input, const QueryResult& result);

/// The iterative retrieve / rerank / evidence-score loop. All collaborators
/// must outlive the Iterator and tolerate concurrent calls.
class Iterator {
 public:
  Iterator(const CorpusStore& store, const VectorSearcher& index, const Embedder& embedder,
           const ParagraphScorer& reranker, const EvidenceScorer& evidence,
           PipelineConfig config = {}, text::TokenCounter counter = text::default_token_counter());

  const PipelineConfig& config() const { return config_; }

  QueryResult run_query(std::string_view question,
                        const std::optional<InitialParagraph>& initial = std::nullopt) const;

  /// Reads query JSONL from `in` and writes one record per line to `out` in
  /// input order. Failures become {"line","id"?,"error"} records. Hop traces
  /// (including partial ones) go to `trace` when given. Returns the number of
  /// failed lines.
  std::size_t run_batch(std::istream& in, std::ostream& out, std::ostream* trace = nullptr) const;

 private:
  std::string hop_query(std::string_view question, const EvidenceSetState& state) const;

  const CorpusStore& store_;
  const VectorSearcher& index_;
  const Embedder& embedder_;
  const ParagraphScorer& reranker_;
  const EvidenceScorer& evidence_;
  PipelineConfig config_;
  text::TokenCounter counter_;
};

}  // namespace hopforge
