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
#include "hopforge/corpus_store.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "hopforge/text.h"

namespace hopforge {
namespace {

using Spans = std::vector<SentenceSpan>;

RawDocument doc(std::string id, std::string title, std::vector<RawParagraph> paras) {
  return {std::move(id), std::move(title), std::move(paras)};
}

std::uint64_t next(std::uint64_t& state) {
  state = text::splitmix64(state);
  return state;
}

const std::string kLong = "One two three four five six seven eight.";

TEST(SplitSentencesTest, NoTerminatorIsOneSpan) {
  EXPECT_EQ(split_sentences("Hello world"), (Spans{{0, 11}}));
}

TEST(SplitSentencesTest, TwoShortSentences) {
  EXPECT_EQ(split_sentences("A. B."), (Spans{{0, 2}, {3, 5}}));
}

TEST(SplitSentencesTest, HandWorkedExample) {
  // "A b." ends at 4; the second sentence runs from 5 to the end (19 chars).
  EXPECT_EQ(split_sentences("A b. C d e f g h i."), (Spans{{0, 4}, {5, 19}}));
}

TEST(SplitSentencesTest, BlankTextYieldsNothing) {
  EXPECT_TRUE(split_sentences("").empty());
  EXPECT_TRUE(split_sentences("   \t ").empty());
}

TEST(SplitSentencesTest, LowercaseFollowerDoesNotSplit) {
  EXPECT_EQ(split_sentences("It was 3 p.m. when he left."), (Spans{{0, 27}}));
}

TEST(SplitSentencesTest, AbbreviationsAreNotSpecialCased) {
  EXPECT_EQ(split_sentences("Mr. Smith came."), (Spans{{0, 3}, {4, 15}}));
}

TEST(SplitSentencesTest, QuestionAndExclamation) {
  EXPECT_EQ(split_sentences("Why? Because! Done"), (Spans{{0, 4}, {5, 13}, {14, 18}}));
}

TEST(SplitSentencesTest, SurroundingWhitespaceIsExcluded) {
  EXPECT_EQ(split_sentences("  Hi there.  "), (Spans{{2, 11}}));
}

TEST(SplitSentencesTest, SpansPartitionTrimmedText) {
  std::uint64_t state = 7;
  for (int trial = 0; trial < 300; ++trial) {
    std::string t;
    const int words = 1 + static_cast<int>(next(state) % 30);
    for (int w = 0; w < words; ++w) {
      if (w) t += next(state) % 5 == 0 ? "  " : " ";
      const auto r = next(state);
      t += (r % 3 == 0) ? "Word" : "word";
      const auto end = next(state) % 6;
      if (end == 0) t += '.';
      if (end == 1) t += '?';
      if (end == 2) t += '!';
    }
    const auto spans = split_sentences(t);
    ASSERT_FALSE(spans.empty()) << t;
    const auto trimmed = text::trim(t);
    const auto lead = static_cast<std::size_t>(trimmed.data() - t.data());
    EXPECT_EQ(spans.front().begin, lead) << t;
    EXPECT_EQ(spans.back().end, lead + trimmed.size()) << t;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      EXPECT_LT(spans[i].begin, spans[i].end) << t;
      EXPECT_FALSE(text::trim(std::string_view(t).substr(spans[i].begin,
                                                         spans[i].end - spans[i].begin))
                       .empty());
      if (i > 0) {
        EXPECT_LT(spans[i - 1].end, spans[i].begin) << t;
        // Only whitespace sits between consecutive spans.
        for (auto k = spans[i - 1].end; k < spans[i].begin; ++k) {
          EXPECT_TRUE(t[k] == ' ' || t[k] == '\t') << t;
        }
      }
    }
  }
}

TEST(CorpusStoreTest, EmptyStreamGivesEmptyStore) {
  std::istringstream in("");
  const auto store = CorpusStore::ingest_jsonl(in);
  EXPECT_TRUE(store.empty());
  EXPECT_TRUE(store.documents().empty());
}

TEST(CorpusStoreTest, SevenWordParagraphIsDropped) {
  std::vector<RawDocument> docs{doc("d", "D", {{"one two three four five six seven", {}},
                                               {kLong, {}}})};
  const auto store = CorpusStore::ingest(docs);
  ASSERT_EQ(store.size(), 1u);
  EXPECT_EQ(store.paragraphs()[0].para_id, "d_1");
  EXPECT_EQ(store.documents()[0].para_ids, std::vector<std::string>{"d_1"});
  EXPECT_EQ(store.first_paragraph("d")->para_id, "d_1");
}

TEST(CorpusStoreTest, EightWordParagraphIsKept) {
  std::vector<RawDocument> docs{doc("d", "D", {{kLong, {}}})};
  EXPECT_EQ(CorpusStore::ingest(docs).size(), 1u);
}

TEST(CorpusStoreTest, DocumentWithoutParagraphsIsRetained) {
  std::vector<RawDocument> docs{doc("d", "D", {})};
  const auto store = CorpusStore::ingest(docs);
  ASSERT_EQ(store.documents().size(), 1u);
  EXPECT_TRUE(store.documents()[0].para_ids.empty());
  EXPECT_EQ(store.first_paragraph("d"), nullptr);
  EXPECT_EQ(store.document_for_title("D")->doc_id, "d");
}

TEST(CorpusStoreTest, DuplicateTitleNamesTheTitle) {
  std::vector<RawDocument> docs{doc("a", "Same", {}), doc("b", "Same", {})};
  try {
    CorpusStore::ingest(docs);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("Same"), std::string::npos);
  }
}

TEST(CorpusStoreTest, DuplicateDocIdIsRejected) {
  std::vector<RawDocument> docs{doc("a", "One", {}), doc("a", "Two", {})};
  EXPECT_THROW(CorpusStore::ingest(docs), IngestError);
}

TEST(CorpusStoreTest, JsonlIngestParsesLinksAndSpans) {
  std::istringstream in(
      R"({"id":"x","title":"X","paras":[{"text":"Alpha beta gamma delta. Epsilon zeta eta theta.","links":["Y"]}]})"
      "\n\n"
      R"({"id":"y","title":"Y","paras":[{"text":"Only one sentence here with many words in it."}]})"
      "\n");
  const auto store = CorpusStore::ingest_jsonl(in);
  ASSERT_EQ(store.size(), 2u);
  const auto& p = store.paragraph("x_0");
  EXPECT_EQ(p.title, "X");
  EXPECT_EQ(p.hyperlink_titles, std::vector<std::string>{"Y"});
  EXPECT_EQ(p.sentence_count(), 2u);
  EXPECT_EQ(p.sentence(1), "Epsilon zeta eta theta.");
}

TEST(CorpusStoreTest, MalformedJsonlReportsLine) {
  std::istringstream in("{\"id\":\"x\",\"title\":\"X\",\"paras\":[]}\n{not json}\n");
  try {
    CorpusStore::ingest_jsonl(in);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CorpusStoreTest, UnknownParagraphThrows) {
  CorpusStore store;
  EXPECT_THROW(store.paragraph("nope"), std::out_of_range);
  EXPECT_EQ(store.find_paragraph("nope"), nullptr);
}

TEST(CorpusStoreTest, RetainedParagraphsSatisfyInvariants) {
  std::vector<RawDocument> docs;
  std::uint64_t state = 11;
  for (int d = 0; d < 40; ++d) {
    std::vector<RawParagraph> paras;
    for (int i = 0; i < 4; ++i) {
      std::string t;
      const auto words = next(state) % 14;
      for (std::size_t w = 0; w < words; ++w) {
        t += (w ? " " : "") + std::string(w % 4 == 0 ? "Cap" : "low") +
             (next(state) % 4 == 0 ? "." : "");
      }
      paras.push_back({t, {}});
    }
    docs.push_back(doc("d" + std::to_string(d), "T" + std::to_string(d), paras));
  }
  const auto store = CorpusStore::ingest(docs);
  EXPECT_GT(store.size(), 0u);
  for (const auto& p : store.paragraphs()) {
    EXPECT_GE(text::count_words(p.text), 8u);
    for (std::size_t i = 0; i < p.sentence_spans.size(); ++i) {
      EXPECT_LE(p.sentence_spans[i].end, p.text.size());
      if (i) {
        EXPECT_LT(p.sentence_spans[i - 1].end, p.sentence_spans[i].begin);
      }
    }
  }
}

class NeighborTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<RawDocument> docs{
        doc("s", "Source", {{kLong, {"X", "Missing", "Y", "X", "Short"}}, {kLong, {}}}),
        doc("x", "X", {{"too short", {}}, {kLong + " X one.", {}}, {kLong + " X two.", {}}}),
        doc("y", "Y", {{kLong + " Y.", {}}}),
        doc("short", "Short", {{"tiny paragraph", {}}}),
        doc("lonely", "Lonely", {{kLong, {}}})};
    store_ = CorpusStore::ingest(docs);
  }
  CorpusStore store_;
};

TEST_F(NeighborTest, DedupSkipsDanglingAndFiltered) {
  const auto n = store_.hyperlink_neighbors("s_0");
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0]->para_id, "x_1");
  EXPECT_EQ(n[1]->para_id, "y_0");
}

TEST_F(NeighborTest, NoLinksGivesEmpty) { EXPECT_TRUE(store_.hyperlink_neighbors("lonely_0").empty()); }

TEST_F(NeighborTest, NeighborsAreInStore) {
  for (const auto& p : store_.paragraphs()) {
    for (const auto* n : store_.hyperlink_neighbors(p.para_id)) {
      EXPECT_EQ(store_.find_paragraph(n->para_id), n);
    }
  }
}

TEST_F(NeighborTest, SaveLoadRoundtrip) {
  const auto dir = std::filesystem::temp_directory_path() / "hopforge_corpus_roundtrip";
  std::filesystem::remove_all(dir);
  store_.save(dir);
  const auto loaded = CorpusStore::load(dir);
  EXPECT_EQ(loaded, store_);
  EXPECT_EQ(loaded.paragraph_index("y_0"), store_.paragraph_index("y_0"));
  EXPECT_EQ(loaded.hyperlink_neighbors("s_0").size(), 2u);
  EXPECT_EQ(loaded.document_for_title("Short")->para_ids.size(), 0u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace hopforge
