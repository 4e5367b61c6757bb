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
#include <memory>
#include <string>
#include <thread>

#include "hopforge/scorers.h"

namespace hopforge {

// JSON bodies of the scorer wire contract. Shared by the HTTP service, the
// client, and transcript tests so every side encodes identically.
std::string encode_embed_response(std::size_t dim, const std::vector<std::vector<float>>& vectors);
std::string encode_paragraph_response(const std::vector<ParagraphScore>& scores);
std::string encode_evidence_response(const std::vector<EvidenceScore>& scores);

/// Serves the scorer wire contract from in-process scorers. Used for local
/// testing and as a drop-in stand-in for a model server.
class ScorerService {
 public:
  ScorerService(const Embedder& embedder, const ParagraphScorer& paragraph_scorer,
                const EvidenceScorer& evidence_scorer, std::size_t max_batch = 256);
  ~ScorerService();
  ScorerService(const ScorerService&) = delete;
  ScorerService& operator=(const ScorerService&) = delete;

  /// Binds and serves on a background thread. Port 0 picks a free port.
  /// Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks serving on the calling thread.
  void serve(const std::string& host, int port);
  void stop();

  std::string url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

}  // namespace hopforge
