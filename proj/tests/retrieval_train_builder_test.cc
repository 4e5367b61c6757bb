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
#include "hopforge/retrieval_train_builder.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hopforge/serialization.h"
#include "json.hpp"
#include "oracles.h"
#include "planted_corpus.h"

namespace hopforge {
namespace {

const std::string kBody = "alpha beta gamma delta epsilon zeta eta theta.";

// Gold g0 links to A, B and the other gold g1; g1 links nowhere.
CorpusStore toy_corpus() {
  std::vector<RawDocument> docs{
      {"g0", "G0", {{"G0 first. " + kBody, {"A", "G1", "B"}}, {"G0 second. " + kBody, {}}}},
      {"g1", "G1", {{"G1 first. " + kBody, {}}}},
      {"a", "A", {{"A first. " + kBody, {}}}},
      {"b", "B", {{"B first. " + kBody, {}}}},
      {"c", "C", {{"C first. " + kBody, {}}}},
      {"d", "D", {{"D first. " + kBody, {}}}},
      {"e", "E", {{"E first. " + kBody, {}}}}};
  return CorpusStore::ingest(docs);
}

ReasoningPath path(std::vector<std::string> golds, std::string qid = "q1") {
  ReasoningPath p;
  p.qid = std::move(qid);
  p.question = "Q?";
  p.gold_para_ids = std::move(golds);
  return p;
}

TEST(RetrievalLossTest, HandWorkedExample) {
  const std::vector<double> q{1, 0}, pos{1, 0};
  const auto r = retrieval_loss(q, pos, {{0, 1}});
  EXPECT_NEAR(r.probability, std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-12);
  EXPECT_NEAR(r.probability, 0.73106, 1e-5);
  EXPECT_NEAR(r.loss, 0.31326, 1e-5);
}

TEST(RetrievalLossTest, TrivialCases) {
  const std::vector<double> q{0.3, -2}, pos{1, 4};
  const auto none = retrieval_loss(q, pos, {});
  EXPECT_DOUBLE_EQ(none.probability, 1.0);
  EXPECT_DOUBLE_EQ(none.loss, 0.0);
  EXPECT_NEAR(retrieval_loss(q, pos, {pos}).probability, 0.5, 1e-12);
  EXPECT_THROW(retrieval_loss(q, pos, {{1, 2, 3}}), std::invalid_argument);
}

TEST(RetrievalLossTest, AgreesWithNaiveSoftmax) {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 500; ++t) {
    const std::size_t dim = 1 + rng() % 16;
    auto vec = [&] {
      std::vector<double> v(dim);
      for (auto& x : v) x = g(rng);
      return v;
    };
    const auto q = vec(), pos = vec();
    std::vector<std::vector<double>> negs;
    for (std::size_t i = 0; i < rng() % 8; ++i) negs.push_back(vec());
    const auto got = retrieval_loss(q, pos, negs);
    const auto [p, loss] = oracle::softmax_loss(q, pos, negs);
    EXPECT_NEAR(got.probability, p, 1e-9);
    EXPECT_NEAR(got.loss, loss, 1e-9);
  }
}

TEST(RetrievalLossTest, ProbabilitiesSumToOne) {
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<double>> d(2 + rng() % 6, std::vector<double>(4));
    for (auto& v : d) for (auto& x : v) x = g(rng);
    std::vector<double> q(4);
    for (auto& x : q) x = g(rng);
    double total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::vector<std::vector<double>> negs;
      for (std::size_t j = 0; j < d.size(); ++j) if (j != i) negs.push_back(d[j]);
      total += retrieval_loss(q, d[i], negs).probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(RetrievalLossTest, LossFallsAsPositiveScoreRises) {
  const std::vector<double> q{1.0};
  double prev = INFINITY;
  for (double s = -5; s <= 5; s += 0.25) {
    const std::vector<double> pos{s};
    const auto l = retrieval_loss(q, pos, {{0.5}, {-1.0}}).loss;
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(ExpandPathTest, FourHopPath) {
  const auto planted = testing::make_planted_corpus(4, 20, 4, 1);
  const auto& chain = planted.chains[3];
  ASSERT_EQ(chain.para_ids.size(), 4u);
  ReasoningPath p{"c3", chain.question, chain.para_ids, {}, {}};
  const auto samples = expand_path(p, planted.store);
  ASSERT_EQ(samples.size(), 4u);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(samples[t].hop, t);
    EXPECT_EQ(samples[t].pos_para_id, chain.para_ids[t]);
    EXPECT_EQ(samples[t].batch_group, "c3");
    const auto segs = query_segments(samples[t].query);
    ASSERT_EQ(segs.size(), t);
    for (std::size_t j = 0; j < t; ++j) {
      EXPECT_EQ(segs[j].title, chain.titles[j]);
      EXPECT_EQ(segs[j].text, planted.store.paragraph(chain.para_ids[j]).text);
    }
    EXPECT_EQ(query_question(samples[t].query), chain.question);
  }
}

TEST(ExpandPathTest, SingleHopAndErrors) {
  const auto store = toy_corpus();
  const auto s = expand_path(path({"a_0"}), store);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].query, "Q?");
  EXPECT_THROW(expand_path(path({}), store), PathError);
  EXPECT_THROW(expand_path(path({"a_0", "b_0", "c_0", "d_0", "e_0"}), store), PathError);
  EXPECT_THROW(expand_path(path({"a_0", "a_0"}), store), PathError);
}

TEST(AttachNegativesTest, HyperlinkedDocsAreMined) {
  const auto store = toy_corpus();
  const auto p = path({"g0_0", "g1_0"});
  const auto s = attach_negatives(expand_path(p, store)[0], p, store);
  EXPECT_EQ(s.neg_para_ids, (std::vector<std::string>{"a_0", "b_0"}));
}

TEST(AttachNegativesTest, PreMinedNegativesComeFirst) {
  const auto store = toy_corpus();
  auto p = path({"g0_0"});
  p.negative_para_ids = {"e_0", "g0_1"};  // g0_1 belongs to a gold document
  const auto s = attach_negatives(expand_path(p, store)[0], p, store);
  EXPECT_EQ(s.neg_para_ids, (std::vector<std::string>{"e_0", "a_0"}));
}

TEST(AttachNegativesTest, RandomPaddingAvoidsGolds) {
  const auto store = toy_corpus();
  for (int i = 0; i < 50; ++i) {
    const auto p = path({"g1_0", "c_0"}, "q" + std::to_string(i));
    for (const auto& s : expand_path(p, store)) {
      const auto out = attach_negatives(s, p, store);
      ASSERT_EQ(out.neg_para_ids.size(), 2u);
      for (const auto& id : out.neg_para_ids) {
        EXPECT_NE(id, "g1_0");
        EXPECT_NE(id, "c_0");
        EXPECT_NE(id, out.pos_para_id);
      }
      EXPECT_NE(out.neg_para_ids[0], out.neg_para_ids[1]);
      EXPECT_EQ(attach_negatives(s, p, store), out);
    }
  }
}

TEST(RerankerSamplesTest, DepthRule) {
  std::mt19937_64 rng(5);
  std::size_t ones = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto d = reranker_depth(2, rng);
    ASSERT_TRUE(d == 1 || d == 2);
    ones += d == 1;
    EXPECT_EQ(reranker_depth(3, rng), 3u);
    EXPECT_EQ(reranker_depth(4, rng), 4u);
    EXPECT_EQ(reranker_depth(1, rng), 1u);
  }
  EXPECT_NEAR(ones / 10000.0, 0.5, 0.05);
}

TEST(RerankerSamplesTest, PairSharesQueryAndDiffersInParagraph) {
  const auto planted = testing::make_planted_corpus(3, 30, 3, 2);
  const auto& chain = planted.chains[2];
  ReasoningPath p{"c2", chain.question, chain.para_ids, {{chain.gold_index[0]}, {chain.gold_index[1]}, {chain.gold_index[2]}}, {}};
  const auto pairs = build_reranker_samples(p, planted.store);
  ASSERT_EQ(pairs.size(), 1u);
  const auto& pair = pairs[0];
  EXPECT_EQ(pair.positive.para_id, chain.para_ids[2]);
  EXPECT_NE(pair.negative.para_id, pair.positive.para_id);
  EXPECT_EQ(query_segments(pair.query).size(), 2u);
  const auto pos = parse_reranker_input(pair.positive.input);
  const auto neg = parse_reranker_input(pair.negative.input);
  EXPECT_EQ(pos.query, neg.query);
  EXPECT_EQ(pos.query, pair.query);
  EXPECT_DOUBLE_EQ(pair.positive.label, 1.0);
  EXPECT_DOUBLE_EQ(pair.negative.label, 0.0);
  ASSERT_EQ(pair.positive.sentence_labels.size(), 3u);
  EXPECT_DOUBLE_EQ(pair.positive.sentence_labels[chain.gold_index[2]], 1.0);
  const auto records = pair_records(pair);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(nlohmann::json::parse(records[0]).at("pair_id"), nlohmann::json::parse(records[1]).at("pair_id"));
}

TEST(RerankerSamplesTest, TwoHopDepthVariesAcrossQuestions) {
  const auto planted = testing::make_planted_corpus(2, 20, 2, 2);
  const auto& chain = planted.chains[1];
  std::size_t ones = 0;
  for (int i = 0; i < 2000; ++i) {
    ReasoningPath p{"id" + std::to_string(i), chain.question, chain.para_ids, {}, {}};
    const auto pairs = build_reranker_samples(p, planted.store);
    ASSERT_EQ(pairs.size(), 1u);
    ones += query_segments(pairs[0].query).empty();
  }
  EXPECT_NEAR(ones / 2000.0, 0.5, 0.05);
}

using KeySet = std::set<std::pair<std::string, std::size_t>>;

TEST(EvidenceLabelTest, SubsetRule) {
  const KeySet gold{{"a", 0}, {"b", 1}};
  EXPECT_DOUBLE_EQ(evidence_label(gold, gold), 1.0);
  EXPECT_DOUBLE_EQ(evidence_label({{"a", 0}, {"b", 1}, {"c", 2}}, gold), 1.0);
  EXPECT_DOUBLE_EQ(evidence_label({{"a", 0}}, gold), 0.0);
}

TEST(EvidenceSamplesTest, PairLabelsAndShape) {
  const auto planted = testing::make_planted_corpus(8, 60, 4, 4);
  for (std::size_t c = 0; c < planted.chains.size(); ++c) {
    const auto& chain = planted.chains[c];
    ReasoningPath p{"c" + std::to_string(c), chain.question, chain.para_ids, {}, {}};
    EXPECT_TRUE(build_evidence_samples(p, planted.store).empty());  // unlabelled
    for (auto i : chain.gold_index) p.gold_sentences.push_back({i});
    const auto pairs = build_evidence_samples(p, planted.store);
    ASSERT_EQ(pairs.size(), 1u);
    const auto& pair = pairs[0];
    EXPECT_DOUBLE_EQ(pair.positive.label, 1.0);
    EXPECT_DOUBLE_EQ(pair.negative.label, 0.0);
    EXPECT_EQ(pair.positive.sentences.size(), chain.para_ids.size() + 2);
    EXPECT_LE(pair.negative.sentences.size(), pair.positive.sentences.size());
    EXPECT_EQ(parse_evidence_input(pair.positive.input).question, chain.question);
    EXPECT_EQ(parse_evidence_input(pair.negative.input).sentences.size(), pair.negative.sentences.size());
    double gold_in_neg = 0;
    for (double l : pair.negative.sentence_labels) gold_in_neg += l;
    EXPECT_LT(gold_in_neg, static_cast<double>(chain.para_ids.size()));
    EXPECT_EQ(build_evidence_samples(p, planted.store)[0].negative.input, pair.negative.input);
  }
}

TEST(PathParseTest, LineFormat) {
  const auto p = parse_path_line(
      R"({"id":"q","question":"Q?","path":["a_0","b_0"],"gold_sentences":[[0],[1,2]],"negatives":["c_0"]})");
  EXPECT_EQ(p.gold_para_ids.size(), 2u);
  EXPECT_EQ(p.gold_sentences[1], (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(p.negative_para_ids, std::vector<std::string>{"c_0"});
  EXPECT_THROW(parse_path_line(R"({"id":"q","question":"Q?","path":[]})"), PathError);
  EXPECT_THROW(parse_path_line("nope"), PathError);
}

TEST(RecordTest, RetrievalSampleSchema) {
  RetrievalSample s{"q", 1, "Q? [QSEP] T | x.", "b_0", {"c_0", "d_0"}, "q"};
  const auto j = nlohmann::json::parse(retrieval_sample_record(s));
  EXPECT_EQ(j.at("query"), s.query);
  EXPECT_EQ(j.at("pos_para_id"), "b_0");
  EXPECT_EQ(j.at("neg_para_ids").size(), 2u);
  EXPECT_EQ(j.at("pair_id"), "q");
}

}  // namespace
}  // namespace hopforge
