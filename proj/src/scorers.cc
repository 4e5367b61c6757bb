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
#include "hopforge/scorers.h"

#include <cmath>
#include <fstream>

#include "hopforge/serialization.h"
#include "hopforge/text.h"
#include "json.hpp"

namespace hopforge {

namespace {

bool in_unit_range(double v) { return v >= 0.0 && v <= 1.0; }

void check_unit(double v, const char* what) {
  if (!in_unit_range(v)) {
    throw ScorerError(std::string(what) + " score outside [0,1]: " + std::to_string(v));
  }
}

double oracle_negative(std::string_view question, std::string_view sentence) {
  std::string key(question);
  key += '\x1f';
  key += sentence;
  return kOracleNegativeCeiling * text::unit_from_hash(text::fnv1a64(key), 0);
}

}  // namespace

std::vector<float> Embedder::embed(std::string_view text) const {
  std::string t(text);
  auto out = embed_batch(std::span<const std::string>(&t, 1));
  if (out.size() != 1) throw ScorerError("embedder returned wrong batch size");
  return std::move(out.front());
}

std::vector<float> Embedder::embed_query(std::string_view query) const {
  std::string q(query);
  auto out = embed_query_batch(std::span<const std::string>(&q, 1));
  if (out.size() != 1) throw ScorerError("embedder returned wrong batch size");
  return std::move(out.front());
}

void validate_score(const ParagraphScore& score, std::string_view input) {
  auto markers = count_sentence_markers(input);
  if (score.s_p.size() != markers) {
    throw ScorerError("paragraph score has " + std::to_string(score.s_p.size()) +
                      " sentence scores for " + std::to_string(markers) + " markers");
  }
  check_unit(score.p, "paragraph");
  for (double s : score.s_p) check_unit(s, "sentence");
}

void validate_score(const EvidenceScore& score, std::string_view input) {
  auto markers = count_sentence_markers(input);
  if (score.s_e.size() != markers) {
    throw ScorerError("evidence score has " + std::to_string(score.s_e.size()) +
                      " sentence scores for " + std::to_string(markers) + " markers");
  }
  check_unit(score.e, "evidence set");
  for (double s : score.s_e) check_unit(s, "sentence");
}

StubEmbedder::StubEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw std::invalid_argument("embedding dim must be positive");
}

std::vector<std::vector<float>> StubEmbedder::embed_batch(
    std::span<const std::string> texts) const {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  std::vector<double> v(dim_);
  for (const auto& t : texts) {
    const std::uint64_t h = text::fnv1a64(t) ^ seed_;
    double norm = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      v[i] = 2.0 * text::unit_from_hash(h, i) - 1.0;
      norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    std::vector<float> row(dim_);
    for (std::size_t i = 0; i < dim_; ++i) row[i] = static_cast<float>(v[i] / norm);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ParagraphScore> StubParagraphScorer::score(std::span<const std::string> inputs) const {
  std::vector<ParagraphScore> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    auto parsed = parse_reranker_input(in);
    const auto h = text::fnv1a64(in);
    ParagraphScore s;
    s.p = text::unit_from_hash(h, 0);
    for (std::size_t j = 0; j < parsed.sentences.size(); ++j) {
      s.s_p.push_back(text::unit_from_hash(h, j + 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvidenceScore> StubEvidenceScorer::score(std::span<const std::string> inputs) const {
  std::vector<EvidenceScore> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    auto parsed = parse_evidence_input(in);
    const auto h = text::fnv1a64(in);
    EvidenceScore s;
    s.e = text::unit_from_hash(h, 0);
    for (std::size_t j = 0; j < parsed.sentences.size(); ++j) {
      s.s_e.push_back(text::unit_from_hash(h, j + 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void GoldAnnotations::add(std::string question, std::string sentence) {
  gold_[std::move(question)].insert(std::string(text::trim(sentence)));
}

bool GoldAnnotations::is_gold(std::string_view question, std::string_view sentence) const {
  auto it = gold_.find(question);
  if (it == gold_.end()) return false;
  return it->second.count(std::string(text::trim(sentence))) > 0;
}

std::size_t GoldAnnotations::gold_count(std::string_view question) const {
  auto it = gold_.find(question);
  return it == gold_.end() ? 0 : it->second.size();
}

GoldAnnotations GoldAnnotations::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gold annotations " + path.string());
  GoldAnnotations gold;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto q = j.at("question").get<std::string>();
    for (const auto& s : j.at("sentences")) gold.add(q, s.get<std::string>());
  }
  return gold;
}

std::vector<ParagraphScore> OracleParagraphScorer::score(
    std::span<const std::string> inputs) const {
  std::vector<ParagraphScore> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    auto parsed = parse_reranker_input(in);
    ParagraphScore s;
    bool any_gold = false;
    for (const auto& sent : parsed.sentences) {
      bool gold = gold_.is_gold(parsed.question, sent);
      any_gold = any_gold || gold;
      s.s_p.push_back(gold ? 1.0 : oracle_negative(parsed.question, sent));
    }
    s.p = any_gold ? 1.0 : oracle_negative(parsed.question, parsed.title);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<EvidenceScore> OracleEvidenceScorer::score(std::span<const std::string> inputs) const {
  std::vector<EvidenceScore> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    auto parsed = parse_evidence_input(in);
    EvidenceScore s;
    std::set<std::string> covered;
    for (const auto& sent : parsed.sentences) {
      bool gold = gold_.is_gold(parsed.question, sent.text);
      if (gold) covered.insert(std::string(text::trim(sent.text)));
      s.s_e.push_back(gold ? 1.0 : oracle_negative(parsed.question, sent.text));
    }
    const auto total = gold_.gold_count(parsed.question);
    if (total > 0 && covered.size() == total) {
      s.e = 1.0;
    } else if (total > 0) {
      s.e = kOracleNegativeCeiling * static_cast<double>(covered.size()) /
            static_cast<double>(total);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hopforge
