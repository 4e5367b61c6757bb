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
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopforge/corpus_store.h"

namespace hopforge {

class PathError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxPathHops = 4;
inline constexpr std::size_t kAdversarialNegatives = 2;

/// Gold paragraphs in learnable order. gold_sentences[i] lists the gold
/// sentence indices of gold_para_ids[i]; it may be empty (unlabelled) or
/// shorter than the path.
struct ReasoningPath {
  std::string qid;
  std::string question;
  std::vector<std::string> gold_para_ids;
  std::vector<std::vector<std::size_t>> gold_sentences;
  std::vector<std::string> negative_para_ids;  // pre-mined adversarial negatives, optional

  /// Throws PathError unless 1 <= hops <= kMaxPathHops with distinct golds.
  void validate() const;
};

/// {"id","question","path":[para_id],"gold_sentences"?:[[idx]],"negatives"?:[para_id]}
ReasoningPath parse_path_line(std::string_view line);

struct RetrievalSample {
  std::string qid;
  std::size_t hop = 0;
  std::string query;                // question plus gold paragraphs 0..hop-1
  std::string pos_para_id;          // gold paragraph `hop`
  std::vector<std::string> neg_para_ids;
  /// Samples sharing a batch_group are co-batched so positives of other
  /// examples serve as in-batch negatives.
  std::string batch_group;

  bool operator==(const RetrievalSample&) const = default;
};

/// One sample per hop, in path order.
std::vector<RetrievalSample> expand_path(const ReasoningPath& path, const CorpusStore& store);

/// Attaches `count` adversarial negatives: pre-mined ones first, then first
/// paragraphs of documents hyperlinked from the gold paragraphs, then random
/// non-gold paragraphs (seeded by qid and salt). Gold paragraphs and
/// paragraphs of gold documents are never used.
RetrievalSample attach_negatives(RetrievalSample sample, const ReasoningPath& path,
                                 const CorpusStore& store,
                                 std::size_t count = kAdversarialNegatives,
                                 std::string_view salt = "neg");

struct RetrievalLoss {
  double probability = 0.0;  // softmax mass on the positive
  double loss = 0.0;         // -ln(probability)
};

/// Softmax over inner products with D = {positive} plus negatives, computed
/// with log-sum-exp. Throws std::invalid_argument on a dimension mismatch.
RetrievalLoss retrieval_loss(std::span<const double> query, std::span<const double> positive,
                             const std::vector<std::vector<double>>& negatives);

/// One scored instance of a shared-normalization pair.
struct TrainInstance {
  std::string para_id;               // reranker instances only
  std::string input;                 // serialized model input
  double label = 0.0;                // p for reranker, e for evidence scorer
  std::vector<double> sentence_labels;  // s_p or s_e targets
  std::vector<std::pair<std::string, std::size_t>> sentences;  // evidence instances only
};

struct SharedNormPair {
  std::string pair_id;
  std::string query;
  TrainInstance positive;
  TrainInstance negative;
};

/// Depth for the reranker sample: two-hop paths draw 1 or 2 uniformly, other
/// paths use their full length.
std::size_t reranker_depth(std::size_t hops, std::mt19937_64& rng);

/// One pair per path: the query holds gold paragraphs 0..depth-2 and scores
/// gold depth-1 against a substituted negative paragraph.
std::vector<SharedNormPair> build_reranker_samples(const ReasoningPath& path,
                                                   const CorpusStore& store,
                                                   std::string_view salt = "rerank");

/// 1.0 iff `set` contains every gold sentence.
double evidence_label(const std::set<std::pair<std::string, std::size_t>>& set,
                      const std::set<std::pair<std::string, std::size_t>>& gold);

struct EvidenceSampleOptions {
  double from_positive_paragraph = 0.5;  // share of substitutes drawn from gold paragraphs
  std::size_t max_sentences = 9;
  std::size_t extra_distractors = 2;  // negatives added to the fully evidential set
};

/// One pair per path: a fully evidential set and a copy in which at least
/// one gold sentence is replaced by a negative sentence. Requires sentence
/// labels; paths without any are skipped (empty result).
std::vector<SharedNormPair> build_evidence_samples(const ReasoningPath& path,
                                                   const CorpusStore& store,
                                                   const EvidenceSampleOptions& options = {},
                                                   std::string_view salt = "evidence");

std::string retrieval_sample_record(const RetrievalSample& s);
/// Two JSON lines, one per pair member, sharing pair_id.
std::vector<std::string> pair_records(const SharedNormPair& pair);

}  // namespace hopforge
