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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "json.hpp"
#include "oracles.h"

namespace hopforge {
namespace {

EvidenceSentence sent(std::string para, std::size_t idx, double p, double s_e) {
  return {std::move(para), idx, "T", "S.", p, s_e, 0.0};
}

EvidenceCandidate cand(std::string para, std::size_t idx, double score) {
  return {std::move(para), idx, "T", "S.", score, score};
}

// Builds sentences whose combined score equals `c` exactly (p = s_e = c).
std::vector<EvidenceSentence> with_combined(const std::vector<double>& cs) {
  std::vector<EvidenceSentence> out;
  for (std::size_t i = 0; i < cs.size(); ++i) out.push_back(sent("p" + std::to_string(i), 0, cs[i], cs[i]));
  return out;
}

TEST(CombinedScoreTest, IsTheMean) { EXPECT_NEAR(combined_score(0.2, 0.6), 0.4, 1e-12); }

TEST(CommitTest, KeepsOnlyThoseOverThreshold) {
  const auto s = commit(0, with_combined({0.9, 0.8, 0.05, 0.04}), 0.7);
  ASSERT_EQ(s.sentences.size(), 2u);
  EXPECT_EQ(s.sentences[0].para_id, "p0");
  EXPECT_EQ(s.sentences[1].para_id, "p1");
  EXPECT_DOUBLE_EQ(s.e, 0.7);
}

TEST(CommitTest, FallsBackToTopTwo) {
  const auto s = commit(1, with_combined({0.02, 0.1, 0.07}), 0.1);
  ASSERT_EQ(s.sentences.size(), 2u);
  EXPECT_EQ(s.sentences[0].para_id, "p1");
  EXPECT_EQ(s.sentences[1].para_id, "p2");
  EXPECT_EQ(s.hop, 1u);
}

TEST(CommitTest, CapsAtFive) {
  const auto s = commit(0, with_combined({0.5, 0.6, 0.7, 0.8, 0.9, 0.3, 0.4}), 0.5);
  ASSERT_EQ(s.sentences.size(), 5u);
  EXPECT_EQ(s.sentences.front().para_id, "p4");
  EXPECT_EQ(s.sentences.back().para_id, "p0");
}

TEST(CommitTest, SingleCandidateIsKept) {
  EXPECT_EQ(commit(0, with_combined({0.0}), 0.0).sentences.size(), 1u);
}

TEST(CommitTest, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(commit(0, {}, 0.5), std::invalid_argument);
  EXPECT_THROW(commit(0, with_combined({0.5}), 1.5), std::invalid_argument);
  EXPECT_THROW(commit(0, {sent("a", 0, 0.5, -0.1)}, 0.5), std::invalid_argument);
}

TEST(CommitTest, DuplicatesCollapse) {
  const auto s = commit(0, {sent("a", 1, 0.9, 0.9), sent("a", 1, 0.3, 0.3), sent("b", 0, 0.5, 0.5)}, 0.5);
  ASSERT_EQ(s.sentences.size(), 2u);
  EXPECT_DOUBLE_EQ(s.sentences[0].combined, 0.9);
}

TEST(CommitTest, SentenceScoreTargetIsConfigurable) {
  EvidenceConfig config;
  config.target = ThresholdTarget::kSentenceScore;
  // Combined 0.5 clears 0.1 for all three, but only one s_e does.
  const auto s = commit(0, {sent("a", 0, 0.95, 0.05), sent("b", 0, 0.9, 0.2), sent("c", 0, 0.99, 0.01)},
                        0.5, config);
  ASSERT_EQ(s.sentences.size(), 2u);  // floor of two
  EXPECT_EQ(commit(0, {sent("a", 0, 0.95, 0.05), sent("b", 0, 0.9, 0.2), sent("c", 0, 0.99, 0.01)}, 0.5)
                .sentences.size(),
            3u);
}

TEST(CommitTest, PropertiesAgainstReference) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (int t = 0; t < 2000; ++t) {
    std::vector<EvidenceSentence> in;
    std::vector<oracle::CommitItem> items;
    const auto n = 1 + rng() % 9;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = u(rng), s = u(rng);
      in.push_back(sent("p" + std::to_string(rng() % 100), i, p, s));
      items.push_back({in.back().para_id, i, p, s});
    }
    const auto state = commit(0, in, 0.5);
    const auto ref = oracle::commit_reference(items);
    ASSERT_EQ(state.sentences.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(state.sentences[i].para_id, items[ref[i]].para_id);
      EXPECT_EQ(state.sentences[i].sent_idx, items[ref[i]].sent_idx);
      EXPECT_NEAR(state.sentences[i].combined, 0.5 * items[ref[i]].p + 0.5 * items[ref[i]].s_e, 1e-9);
    }
    if (n >= 2) {
      EXPECT_GE(state.sentences.size(), 2u);
    }
    EXPECT_LE(state.sentences.size(), 5u);
    // Everything kept outranks everything dropped.
    double min_kept = 1.0;
    for (const auto& s : state.sentences) min_kept = std::min(min_kept, s.combined);
    for (const auto& s : in) {
      const bool kept = std::any_of(state.sentences.begin(), state.sentences.end(), [&](const auto& k) {
        return k.para_id == s.para_id && k.sent_idx == s.sent_idx;
      });
      if (!kept) {
        EXPECT_LE(0.5 * s.p + 0.5 * s.s_e, min_kept + 1e-12);
      }
    }
    EXPECT_EQ(commit(0, in, 0.5), state);
  }
}

TEST(SelectNextTest, EmptyPriorTakesTopReranked) {
  std::vector<EvidenceCandidate> ranked;
  for (int i = 0; i < 12; ++i) ranked.push_back(cand("p" + std::to_string(i), 0, 1.0 - i * 0.05));
  const auto out = select_next({}, ranked);
  ASSERT_EQ(out.size(), 9u);
  EXPECT_EQ(out.front().para_id, "p0");
  EXPECT_EQ(out.back().para_id, "p8");
}

TEST(SelectNextTest, PriorFivePlusSevenNewCapsAtNine) {
  EvidenceSetState prior;
  const double old_scores[] = {0.9, 0.7, 0.5, 0.3, 0.1};
  for (int i = 0; i < 5; ++i) {
    auto s = sent("old" + std::to_string(i), 0, 0.0, 0.0);
    s.combined = old_scores[i];
    prior.sentences.push_back(s);
  }
  const double new_scores[] = {0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2};
  std::vector<EvidenceCandidate> ranked;
  for (int i = 0; i < 7; ++i) ranked.push_back(cand("new" + std::to_string(i), 0, new_scores[i]));
  const auto out = select_next(prior, ranked);
  ASSERT_EQ(out.size(), 9u);
  std::set<std::string> ids;
  for (const auto& c : out) ids.insert(c.para_id);
  EXPECT_FALSE(ids.count("old4"));   // 0.1
  EXPECT_FALSE(ids.count("new6"));   // 0.2
  EXPECT_TRUE(ids.count("new5"));    // 0.3 ties old3 and wins on para_id
  EXPECT_FALSE(ids.count("old3"));
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(out[i - 1].score, out[i].score);
}

TEST(SelectNextTest, DuplicateAppearsOnce) {
  EvidenceSetState prior;
  auto s = sent("a", 2, 0.4, 0.4);
  s.combined = 0.4;
  prior.sentences.push_back(s);
  const auto out = select_next(prior, {cand("a", 2, 0.7), cand("b", 0, 0.5)});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].para_id, "a");
  EXPECT_DOUBLE_EQ(out[0].score, 0.7);
}

TEST(SelectNextTest, OnlyPerHopCandidatesAreConsidered) {
  EvidenceConfig config;
  config.per_hop_candidates = 2;
  const auto out = select_next({}, {cand("a", 0, 0.9), cand("b", 0, 0.8), cand("c", 0, 0.7)}, config);
  EXPECT_EQ(out.size(), 2u);
}

TEST(FinalizeTest, ArgmaxAndEarliestTie) {
  std::vector<EvidenceSetState> h{{0, {}, 0.2}, {1, {}, 0.9}, {2, {}, 0.4}};
  EXPECT_EQ(finalize(h).hop, 1u);
  std::vector<EvidenceSetState> tie{{0, {}, 0.5}, {1, {}, 0.5}};
  EXPECT_EQ(finalize(tie).hop, 0u);
  std::vector<EvidenceSetState> one{{3, {}, 0.1}};
  EXPECT_EQ(finalize(one).hop, 3u);
  EXPECT_THROW(finalize(std::vector<EvidenceSetState>{}), std::invalid_argument);
}

TEST(FinalizeTest, ResultDominatesHistory) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<EvidenceSetState> h;
    for (std::size_t i = 0; i < 1 + rng() % 5; ++i) h.push_back({i, {}, std::round(u(rng) * 4) / 4});
    const auto best = finalize(h);
    for (const auto& s : h) {
      EXPECT_GE(best.e, s.e);
      if (s.e == best.e) {
        EXPECT_GE(s.hop, best.hop);
      }
    }
  }
}

TEST(TraceLineTest, Schema) {
  const auto state = commit(2, {sent("a_0", 1, 0.4, 0.6)}, 0.3);
  const auto j = nlohmann::json::parse(trace_line(state));
  EXPECT_EQ(j.at("hop"), 2);
  EXPECT_DOUBLE_EQ(j.at("e").get<double>(), 0.3);
  EXPECT_EQ(j.at("sentences")[0].at("para_id"), "a_0");
  EXPECT_EQ(j.at("sentences")[0].at("sent_idx"), 1);
  EXPECT_NEAR(j.at("sentences")[0].at("combined").get<double>(), 0.5, 1e-12);
}

}  // namespace
}  // namespace hopforge
