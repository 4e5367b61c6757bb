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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hopforge {

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense encoder shared by queries and paragraphs. Implementations must be
/// deterministic, keep dim() constant and tolerate concurrent calls.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<std::vector<float>> embed_batch(std::span<const std::string> texts) const = 0;
  /// Serialized retriever queries; defaults to the document encoder.
  virtual std::vector<std::vector<float>> embed_query_batch(
      std::span<const std::string> queries) const {
    return embed_batch(queries);
  }

  std::vector<float> embed(std::string_view text) const;
  std::vector<float> embed_query(std::string_view query) const;
};

struct AnswerSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const AnswerSpan&) const = default;
};
struct InsufficientEvidence {
  bool operator==(const InsufficientEvidence&) const = default;
};
/// Debug-only span head output; never consumed by the pipeline.
using SpanPrediction = std::variant<AnswerSpan, InsufficientEvidence>;

struct ParagraphScore {
  double p = 0.0;
  std::vector<double> s_p;  // one per [SM] marker
  std::optional<SpanPrediction> span;
  bool operator==(const ParagraphScore&) const = default;
};

struct EvidenceScore {
  double e = 0.0;
  std::vector<double> s_e;  // one per evidence sentence
  std::optional<SpanPrediction> span;
  bool operator==(const EvidenceScore&) const = default;
};

/// Scores serialized reranker inputs (see serialization.h).
class ParagraphScorer {
 public:
  virtual ~ParagraphScorer() = default;
  virtual std::vector<ParagraphScore> score(std::span<const std::string> inputs) const = 0;
};

/// Scores serialized evidence-set inputs.
class EvidenceScorer {
 public:
  virtual ~EvidenceScorer() = default;
  virtual std::vector<EvidenceScore> score(std::span<const std::string> inputs) const = 0;
};

// Throws ScorerError when counts disagree with the input's [SM] markers or
// any score leaves [0, 1].
void validate_score(const ParagraphScore& score, std::string_view input);
void validate_score(const EvidenceScore& score, std::string_view input);

// ---------------------------------------------------------------------------
// Deterministic stubs. Values are a pure function of the input bytes:
//   h = fnv1a64(input);  value_i = unit_from_hash(h, i)
// Paragraph:  p = value_0,  s_p[j] = value_{j+1}
// Evidence:   e = value_0,  s_e[j] = value_{j+1}
// Embedding:  v_i = 2 * unit_from_hash(fnv1a64(text) ^ seed, i) - 1, then L2-normalized.

class StubEmbedder : public Embedder {
 public:
  explicit StubEmbedder(std::size_t dim, std::uint64_t seed = 0);
  std::size_t dim() const override { return dim_; }
  std::vector<std::vector<float>> embed_batch(std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class StubParagraphScorer : public ParagraphScorer {
 public:
  std::vector<ParagraphScore> score(std::span<const std::string> inputs) const override;
};

class StubEvidenceScorer : public EvidenceScorer {
 public:
  std::vector<EvidenceScore> score(std::span<const std::string> inputs) const override;
};

// ---------------------------------------------------------------------------
// Gold-annotation oracle: gold (question, sentence) pairs score 1.0, anything
// else scores at most kOracleNegativeCeiling.

inline constexpr double kOracleNegativeCeiling = 0.05;

class GoldAnnotations {
 public:
  void add(std::string question, std::string sentence);
  bool is_gold(std::string_view question, std::string_view sentence) const;
  std::size_t gold_count(std::string_view question) const;
  bool empty() const { return gold_.empty(); }

  /// JSONL: {"question": str, "sentences": [str, ...]}
  static GoldAnnotations load_jsonl(const std::filesystem::path& path);

 private:
  std::map<std::string, std::set<std::string>, std::less<>> gold_;
};

/// p = 1.0 when the paragraph holds a gold sentence for the question.
class OracleParagraphScorer : public ParagraphScorer {
 public:
  explicit OracleParagraphScorer(GoldAnnotations gold) : gold_(std::move(gold)) {}
  std::vector<ParagraphScore> score(std::span<const std::string> inputs) const override;

 private:
  GoldAnnotations gold_;
};

/// e = 1.0 when the set holds every gold sentence; otherwise
/// kOracleNegativeCeiling scaled by the covered gold fraction.
class OracleEvidenceScorer : public EvidenceScorer {
 public:
  explicit OracleEvidenceScorer(GoldAnnotations gold) : gold_(std::move(gold)) {}
  std::vector<EvidenceScore> score(std::span<const std::string> inputs) const override;

 private:
  GoldAnnotations gold_;
};

}  // namespace hopforge
