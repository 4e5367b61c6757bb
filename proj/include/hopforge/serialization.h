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

// Model input encodings for the retriever, the paragraph reranker and the
// evidence set scorer. These strings are the wire payload for remote scorers
// and must stay byte-stable.
//
//   retriever: question [QSEP] title1 | text1 [QSEP] title2 | text2
//   reranker:  [CLS] query [SEP] yes no [INSUFF] [SEP] title [SM] s0 [SM] s1 [SEP]
//   evidence:  [CLS] question [SEP] yes no [INSUFF] [SEP] [SM] t | s [SM] t | s [SEP]
//
// Sentence text is inserted verbatim (it normally carries its own
// terminator); nothing is appended.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hopforge {

class SerializationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::string_view kQuerySep = "[QSEP]";
inline constexpr std::string_view kSentenceMarker = "[SM]";
inline constexpr std::size_t kMaxEvidenceSentences = 9;

struct TitledText {
  std::string title;
  std::string text;
};

std::string serialize_retriever_query(std::string_view question,
                                      const std::vector<TitledText>& hop_paragraphs);

/// Throws SerializationError when `sentences` is empty.
std::string serialize_reranker_input(std::string_view query, std::string_view title,
                                     const std::vector<std::string>& sentences);

/// Accepts 1..kMaxEvidenceSentences sentences; throws SerializationError otherwise.
std::string serialize_evidence_input(std::string_view question,
                                     const std::vector<TitledText>& sentences);

struct ParsedRerankerInput {
  std::string query;
  std::string question;  // query prefix before the first [QSEP]
  std::string title;
  std::vector<std::string> sentences;
};

struct ParsedEvidenceInput {
  std::string question;
  std::vector<TitledText> sentences;
};

/// Inverse of the serializers; throw SerializationError on malformed input.
ParsedRerankerInput parse_reranker_input(std::string_view input);
ParsedEvidenceInput parse_evidence_input(std::string_view input);

/// Question part of a serialized retriever query.
std::string_view query_question(std::string_view query);
/// (title, text) segments following the question in a retriever query.
std::vector<TitledText> query_segments(std::string_view query);

std::size_t count_sentence_markers(std::string_view input);

}  // namespace hopforge
