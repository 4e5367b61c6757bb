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

// HTTP client for an external scoring service.
//
//   POST /embed           {"texts": [...]}   -> {"dim": d, "vectors": [[...], ...]}
//   POST /score_paragraph {"inputs": [...]}  -> {"scores": [{"p": f, "s_p": [...]}, ...]}
//   POST /score_evidence  {"inputs": [...]}  -> {"scores": [{"e": f, "s_e": [...]}, ...]}
//
// Scores are expected to be sigmoid outputs already; the client clamps them
// into [0, 1]. Requests are split into batches of at most `max_batch` inputs
// with at most `max_in_flight` batches outstanding.

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "hopforge/scorers.h"

namespace hopforge {

inline constexpr const char* kScorerUrlEnv = "HOPFORGE_SCORER_URL";

struct RemoteScorerOptions {
  std::size_t max_batch = 32;
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds timeout{60000};
};

class RemoteScorerClient {
 public:
  explicit RemoteScorerClient(std::string base_url, RemoteScorerOptions options = {});

  std::vector<std::vector<float>> embed(std::span<const std::string> texts) const;
  std::vector<ParagraphScore> score_paragraphs(std::span<const std::string> inputs) const;
  std::vector<EvidenceScore> score_evidence(std::span<const std::string> inputs) const;

  const std::string& base_url() const { return base_url_; }
  /// Dim reported by the last /embed response, if any.
  std::optional<std::size_t> reported_dim() const;

 private:
  std::string post(const std::string& path, const std::string& body) const;

  std::string base_url_;
  RemoteScorerOptions options_;
  mutable std::mutex mu_;
  mutable std::optional<std::size_t> dim_;
};

class RemoteEmbedder : public Embedder {
 public:
  explicit RemoteEmbedder(std::shared_ptr<const RemoteScorerClient> client)
      : client_(std::move(client)) {}
  /// Probes the service with a one-text request on first use.
  std::size_t dim() const override;
  std::vector<std::vector<float>> embed_batch(std::span<const std::string> texts) const override;

 private:
  std::shared_ptr<const RemoteScorerClient> client_;
};

class RemoteParagraphScorer : public ParagraphScorer {
 public:
  explicit RemoteParagraphScorer(std::shared_ptr<const RemoteScorerClient> client)
      : client_(std::move(client)) {}
  std::vector<ParagraphScore> score(std::span<const std::string> inputs) const override {
    return client_->score_paragraphs(inputs);
  }

 private:
  std::shared_ptr<const RemoteScorerClient> client_;
};

class RemoteEvidenceScorer : public EvidenceScorer {
 public:
  explicit RemoteEvidenceScorer(std::shared_ptr<const RemoteScorerClient> client)
      : client_(std::move(client)) {}
  std::vector<EvidenceScore> score(std::span<const std::string> inputs) const override {
    return client_->score_evidence(inputs);
  }

 private:
  std::shared_ptr<const RemoteScorerClient> client_;
};

}  // namespace hopforge
