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
#include "hopforge/remote_scorer.h"

#include <gtest/gtest.h>

#include <sstream>

#include "hopforge/iterator_pipeline.h"
#include "hopforge/scorer_service.h"
#include "hopforge/serialization.h"
#include "json.hpp"
#include "planted_corpus.h"

namespace hopforge {
namespace {

class RemoteScorerTest : public ::testing::Test {
 protected:
  void SetUp() override { service_.start(); }
  void TearDown() override { service_.stop(); }

  std::shared_ptr<RemoteScorerClient> client(std::size_t max_batch = 32) {
    return std::make_shared<RemoteScorerClient>(service_.url(),
                                                RemoteScorerOptions{max_batch, 2});
  }

  StubEmbedder embedder_{16, 5};
  StubParagraphScorer paragraphs_;
  StubEvidenceScorer evidence_;
  ScorerService service_{embedder_, paragraphs_, evidence_, 8};
};

std::vector<std::string> reranker_inputs(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(serialize_reranker_input("Q" + std::to_string(i) + "?", "T",
                                           {"A.", "B " + std::to_string(i) + "."}));
  }
  return out;
}

TEST_F(RemoteScorerTest, EmbedMatchesStub) {
  RemoteEmbedder remote(client());
  EXPECT_EQ(remote.dim(), 16u);
  const std::vector<std::string> texts{"alpha", "beta", "gamma"};
  EXPECT_EQ(remote.embed_batch(texts), embedder_.embed_batch(texts));
}

TEST_F(RemoteScorerTest, ParagraphScoresMatchStub) {
  RemoteParagraphScorer remote(client());
  const auto inputs = reranker_inputs(5);
  EXPECT_EQ(remote.score(inputs), paragraphs_.score(inputs));
}

TEST_F(RemoteScorerTest, EvidenceScoresMatchStub) {
  RemoteEvidenceScorer remote(client());
  const std::vector<std::string> inputs{serialize_evidence_input("Q?", {{"T", "A."}, {"U", "B."}})};
  EXPECT_EQ(remote.score(inputs), evidence_.score(inputs));
}

TEST_F(RemoteScorerTest, ClientSplitsLargeRequestsIntoBatches) {
  RemoteParagraphScorer remote(client(3));
  const auto inputs = reranker_inputs(20);
  EXPECT_EQ(remote.score(inputs), paragraphs_.score(inputs));
}

TEST_F(RemoteScorerTest, OversizeBatchIsRejectedWith413) {
  RemoteParagraphScorer remote(client(32));
  const auto inputs = reranker_inputs(9);
  try {
    remote.score(inputs);
    FAIL() << "expected ScorerError";
  } catch (const ScorerError& e) {
    EXPECT_NE(std::string(e.what()).find("413"), std::string::npos);
  }
}

TEST_F(RemoteScorerTest, MalformedInputIsRejectedWith400) {
  RemoteParagraphScorer remote(client());
  const std::vector<std::string> inputs{"garbage"};
  try {
    remote.score(inputs);
    FAIL() << "expected ScorerError";
  } catch (const ScorerError& e) {
    EXPECT_NE(std::string(e.what()).find("400"), std::string::npos);
  }
}

TEST_F(RemoteScorerTest, EmptyRequestNeedsNoRoundTrip) {
  RemoteParagraphScorer remote(client());
  EXPECT_TRUE(remote.score(std::span<const std::string>{}).empty());
}

TEST(RemoteScorerClientTest, UnreachableServiceThrows) {
  RemoteScorerClient client("http://127.0.0.1:1", RemoteScorerOptions{4, 1, std::chrono::milliseconds(500)});
  const std::vector<std::string> texts{"x"};
  EXPECT_THROW(client.embed(texts), ScorerError);
}

TEST(RemoteScorerClientTest, RejectsUnusableOptions) {
  EXPECT_THROW(RemoteScorerClient("http://x", RemoteScorerOptions{4, 1, std::chrono::milliseconds(0)}),
               ScorerError);
  EXPECT_THROW(RemoteScorerClient("http://x", RemoteScorerOptions{0, 1}), ScorerError);
  EXPECT_THROW(RemoteScorerClient("http://x", RemoteScorerOptions{4, 0}), ScorerError);
}

TEST(WireEncodingTest, ResponseGoldens) {
  EXPECT_EQ(encode_paragraph_response({ParagraphScore{0.5, {0.25}, {}}}),
            R"({"scores":[{"p":0.5,"s_p":[0.25]}]})");
  EXPECT_EQ(encode_evidence_response({EvidenceScore{1.0, {0.0, 0.5}, InsufficientEvidence{}}}),
            R"({"scores":[{"e":1.0,"s_e":[0.0,0.5],"span":"insufficient"}]})");
  EXPECT_EQ(encode_embed_response(2, {{0.5f, -0.5f}}), R"({"dim":2,"vectors":[[0.5,-0.5]]})");
}

// A service whose scores leave [0,1] must be clamped by the client.
class OutOfRangeScorer : public ParagraphScorer {
 public:
  std::vector<ParagraphScore> score(std::span<const std::string> inputs) const override {
    std::vector<ParagraphScore> out;
    for (const auto& in : inputs) {
      out.push_back({1.7, std::vector<double>(count_sentence_markers(in), -0.3), {}});
    }
    return out;
  }
};

TEST(RemoteClampTest, ScoresAreClampedIntoUnitRange) {
  StubEmbedder embedder(4);
  OutOfRangeScorer paragraphs;
  StubEvidenceScorer evidence;
  ScorerService service(embedder, paragraphs, evidence);
  service.start();
  RemoteParagraphScorer remote(std::make_shared<RemoteScorerClient>(service.url()));
  const auto s = remote.score(reranker_inputs(1));
  EXPECT_DOUBLE_EQ(s[0].p, 1.0);
  EXPECT_DOUBLE_EQ(s[0].s_p[0], 0.0);
  service.stop();
}

TEST(RemotePipelineTest, RemoteMimicOfStubGivesIdenticalOutput) {
  const auto planted = testing::make_planted_corpus(4, 60, 3, 9);
  StubEmbedder embedder(32, 1);
  StubParagraphScorer paragraphs;
  StubEvidenceScorer evidence;
  auto matrix = std::make_shared<EmbeddingMatrix>(build_index(planted.store, embedder));
  FlatIndex index(matrix);

  PipelineConfig config;
  config.k = 10;
  config.t_max = 3;
  config.workers = 2;

  std::string questions;
  for (std::size_t i = 0; i < planted.chains.size(); ++i) {
    questions += nlohmann::json{{"id", "q" + std::to_string(i)},
                                {"question", planted.chains[i].question}}
                     .dump() +
                 "\n";
  }

  Iterator local(planted.store, index, embedder, paragraphs, evidence, config);
  std::istringstream local_in(questions);
  std::ostringstream local_out, local_trace;
  EXPECT_EQ(local.run_batch(local_in, local_out, &local_trace), 0u);

  ScorerService service(embedder, paragraphs, evidence);
  service.start();
  auto client = std::make_shared<RemoteScorerClient>(service.url(),
                                                     RemoteScorerOptions{4, 2});
  RemoteEmbedder remote_embedder(client);
  RemoteParagraphScorer remote_paragraphs(client);
  RemoteEvidenceScorer remote_evidence(client);
  Iterator remote(planted.store, index, remote_embedder, remote_paragraphs, remote_evidence,
                  config);
  std::istringstream remote_in(questions);
  std::ostringstream remote_out, remote_trace;
  EXPECT_EQ(remote.run_batch(remote_in, remote_out, &remote_trace), 0u);
  service.stop();

  EXPECT_FALSE(local_out.str().empty());
  EXPECT_EQ(remote_out.str(), local_out.str());
  EXPECT_EQ(remote_trace.str(), local_trace.str());
}

}  // namespace
}  // namespace hopforge
