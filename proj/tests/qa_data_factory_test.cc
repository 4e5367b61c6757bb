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
#include "hopforge/qa_data_factory.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "json.hpp"

namespace hopforge {
namespace {

LabelledParagraph para(std::string title, std::size_t n, std::size_t words_each,
                       std::vector<std::size_t> gold = {}) {
  LabelledParagraph p;
  p.title = title;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = title + "-s" + std::to_string(i);
    for (std::size_t w = 1; w < words_each; ++w) s += " filler";
    p.sentences.push_back(s + ".");
  }
  p.gold = std::move(gold);
  return p;
}

PackedContext packed_fragments(std::size_t n, std::size_t words_each) {
  std::vector<Fragment> fs;
  for (std::size_t i = 0; i < n; ++i) {
    Fragment f;
    f.para_id = "p" + std::to_string(i);
    f.title = "T" + std::to_string(i);
    f.text = "Fragment";
    for (std::size_t w = 1; w < words_each; ++w) f.text += " text";
    fs.push_back(f);
  }
  return pack(fs, 100000);
}

TEST(EmitRatdTest, FullVariantRespectsBudget) {
  const auto packed = packed_fragments(12, 60);
  const auto s = emit_ratd("Q?", "ans", packed, RatdVariant::kFull, "hotpotqa");
  EXPECT_LE(text::count_digit_tokens(s.input), 512u);
  EXPECT_EQ(s.dataset, "hotpotqa_ratd");
  EXPECT_EQ(s.target, "ans");
  EXPECT_EQ(parse_qa_input(s.input).form, QaForm::kReadingComprehension);
  EXPECT_EQ(s, emit_ratd("Q?", "ans", packed, RatdVariant::kFull, "hotpotqa"));
}

TEST(EmitRatdTest, Max4ParasKeepsFirstFour) {
  const auto packed = packed_fragments(6, 5);
  const auto s = emit_ratd("Q?", "ans", packed, RatdVariant::kMax4Paras, "strategyqa");
  EXPECT_EQ(s.dataset, "strategyqa_ratd_max4paras");
  const auto ctx = parse_qa_input(s.input).context;
  EXPECT_NE(ctx.find("T3:"), std::string::npos);
  EXPECT_EQ(ctx.find("T4:"), std::string::npos);
}

TEST(EmitRatdTest, EmptyContextThrows) {
  EXPECT_THROW(emit_ratd("Q?", "a", PackedContext{}, RatdVariant::kFull, "x"), DataFactoryError);
}

TEST(EmitRatdTest, MultipleChoiceRendersOptions) {
  const auto s = emit_ratd("Q?", "bridge", packed_fragments(2, 3), RatdVariant::kFull, "csqa",
                           lettered_options({"valley", "bridge"}));
  const auto parsed = parse_qa_input(s.input);
  EXPECT_EQ(parsed.form, QaForm::kMultipleChoiceRc);
  EXPECT_EQ(parsed.options.size(), 2u);
}

TEST(EmitOpenDomainTest, QuestionAndSeparatorOnly) {
  const auto s = emit_opendomain("Could an Aardvark use a knife and fork?", "no", "strategyqa");
  EXPECT_EQ(s.input, "Could an Aardvark use a knife and fork? \\n");
  EXPECT_EQ(s.dataset, "strategyqa_opendomain");
  EXPECT_EQ(parse_qa_input(s.input).context, "");
  const auto mc = emit_opendomain("Q?", "x", "csqa", lettered_options({"x", "y"}));
  EXPECT_EQ(mc.input, "Q? \\n (A) x (B) y");
}

TEST(QaSampleRecordTest, Schema) {
  const auto j = nlohmann::json::parse(qa_sample_record({"in \\n", "out", "ds", "group2"}));
  EXPECT_EQ(j.at("input"), "in \\n");
  EXPECT_EQ(j.at("target"), "out");
  EXPECT_EQ(j.at("dataset"), "ds");
  EXPECT_EQ(j.at("group"), "group2");
}

class GoldPlusDistractorsTest : public ::testing::Test {
 protected:
  std::vector<LabelledParagraph> golds_{para("Gold A", 6, 8, {1, 4}), para("Gold B", 4, 8, {})};
  std::vector<LabelledParagraph> negs_{para("Neg 1", 5, 8), para("Neg 2", 6, 8), para("Neg 3", 5, 9),
                                       para("Neg far", 30, 8)};
};

TEST_F(GoldPlusDistractorsTest, AllGoldSentencesPresent) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto b = build_goldplusdistractors("Q?", "A", golds_, negs_, rng, "hotpotqa");
    const std::set<std::string> present(b.context_sentences.begin(), b.context_sentences.end());
    EXPECT_TRUE(present.count(golds_[0].sentences[1]));
    EXPECT_TRUE(present.count(golds_[0].sentences[4]));
    for (const auto& s : golds_[1].sentences) EXPECT_TRUE(present.count(s));
    EXPECT_EQ(b.sample.dataset, "hotpotqa_goldplusdistractors");
    EXPECT_LE(text::count_digit_tokens(b.sample.input), 512u);
    const auto parsed = parse_qa_input(b.sample.input);
    EXPECT_EQ(parsed.form, QaForm::kReadingComprehension);
    for (const auto& s : b.context_sentences) EXPECT_NE(parsed.context.find(s), std::string::npos);
    // The overlong negative is not length-matched and never appears.
    EXPECT_EQ(parsed.context.find("Neg far"), std::string::npos);
  }
}

TEST_F(GoldPlusDistractorsTest, ZeroWithholdingKeepsEveryTitle) {
  std::mt19937_64 rng(2);
  ContextBuildOptions options;
  options.title_withhold = 0.0;
  const auto b = build_goldplusdistractors("Q?", "A", golds_, negs_, rng, "x", options);
  EXPECT_EQ(b.titles_withheld, 0u);
  const auto ctx = parse_qa_input(b.sample.input).context;
  EXPECT_NE(ctx.find("Gold A: "), std::string::npos);
  EXPECT_NE(ctx.find("Gold B: "), std::string::npos);
}

TEST_F(GoldPlusDistractorsTest, FillsTowardTheBudget) {
  std::mt19937_64 rng(3);
  std::vector<LabelledParagraph> many;
  for (int i = 0; i < 40; ++i) many.push_back(para("N" + std::to_string(i), 5, 8));
  const auto b = build_goldplusdistractors("Q?", "A", golds_, many, rng, "x");
  const auto tokens = text::count_digit_tokens(b.sample.input);
  EXPECT_LE(tokens, 512u);
  EXPECT_GT(tokens, 400u);
}

TEST_F(GoldPlusDistractorsTest, ErrorsAndDeterminism) {
  std::mt19937_64 rng(4);
  EXPECT_THROW(build_goldplusdistractors("Q?", "A", {}, negs_, rng, "x"), DataFactoryError);
  EXPECT_THROW(build_goldplusdistractors("Q?", "A", {para("Huge", 80, 10)}, negs_, rng, "x"),
               DataFactoryError);
  std::mt19937_64 r1(9), r2(9);
  EXPECT_EQ(build_goldplusdistractors("Q?", "A", golds_, negs_, r1, "x").sample,
            build_goldplusdistractors("Q?", "A", golds_, negs_, r2, "x").sample);
}

TEST_F(GoldPlusDistractorsTest, UnanswerableMissesAGold) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto b = build_unanswerable("Q?", golds_, negs_, rng, "hotpotqa");
    EXPECT_EQ(b.sample.target, "<No Answer>");
    EXPECT_EQ(b.sample.dataset, "hotpotqa_noanswer");
    ASSERT_FALSE(b.missing_gold.empty());
    const std::set<std::string> present(b.context_sentences.begin(), b.context_sentences.end());
    for (const auto& m : b.missing_gold) EXPECT_FALSE(present.count(m));
    EXPECT_NO_THROW(parse_qa_input(b.sample.input));
  }
}

TEST(UnanswerableTest, SingleGoldSentenceLeavesDistractorsOnly) {
  std::mt19937_64 rng(6);
  const auto b = build_unanswerable("Q?", {para("G", 1, 8, {0})}, {para("N", 1, 8)}, rng, "x");
  EXPECT_EQ(b.missing_gold.size(), 1u);
  for (const auto& s : b.context_sentences) EXPECT_EQ(s.rfind("N-", 0), 0u);
}

TEST(EntitySpansTest, Heuristics) {
  const std::vector<std::string> w{"The", "city", "of", "New", "York", "hosts", "a", "celebration", "."};
  const auto spans = detect_entity_spans(w);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0], (std::pair<std::size_t, std::size_t>{3, 5}));
  EXPECT_EQ(spans[1], (std::pair<std::size_t, std::size_t>{7, 8}));
}

std::vector<std::string> entity_rich_paragraphs(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t p = 0; p < n; ++p) {
    std::string s = "it";
    for (int i = 0; i < 40; ++i) s += " saw Paris and";
    out.push_back(s + " went home.");
  }
  return out;
}

TEST(SelfSupervisedTest, TargetReconstructsText) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto s = build_selfsupervised(entity_rich_paragraphs(5), rng, "wiki_mlm");
    EXPECT_EQ(s.sample.group, "mlm");
    ASSERT_FALSE(s.spans.empty());
    const auto parsed = parse_qa_input(s.sample.input);
    EXPECT_EQ(parsed.form, QaForm::kOpenDomain);
    EXPECT_EQ(unmask(parsed.question, s.sample.target), s.text);
    EXPECT_LE(text::count_digit_tokens(s.sample.input), 512u);
    for (std::size_t i = 1; i < s.spans.size(); ++i) EXPECT_GT(s.spans[i].begin, s.spans[i - 1].end);
  }
}

TEST(SelfSupervisedTest, NoEntitiesFallsBackToRandom) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> plain(3, "all lower case words with nothing special in them at all");
  const auto s = build_selfsupervised(plain, rng, "x");
  ASSERT_FALSE(s.spans.empty());
  for (const auto& span : s.spans) EXPECT_EQ(span.kind, MaskKind::kRandom);
}

TEST(SelfSupervisedTest, EntityShareNearLambda) {
  std::mt19937_64 rng(10);
  std::size_t entity = 0, total = 0;
  while (total < 10000) {
    const auto s = build_selfsupervised(entity_rich_paragraphs(3), rng, "x");
    for (const auto& span : s.spans) {
      entity += span.kind == MaskKind::kEntity;
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(entity) / static_cast<double>(total), 0.65, 0.02);
}

TEST(SelfSupervisedTest, EmptyInputThrows) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(build_selfsupervised({}, rng, "x"), DataFactoryError);
}

}  // namespace
}  // namespace hopforge
