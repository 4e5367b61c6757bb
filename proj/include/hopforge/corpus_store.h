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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hopforge {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-open character range [begin, end) into a paragraph's text.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const SentenceSpan&) const = default;
};

struct Paragraph {
  std::string para_id;
  std::string doc_id;
  std::string title;
  std::string text;
  std::vector<SentenceSpan> sentence_spans;
  std::vector<std::string> hyperlink_titles;

  std::size_t sentence_count() const { return sentence_spans.size(); }
  std::string_view sentence(std::size_t i) const;
  std::vector<std::string> sentences() const;

  bool operator==(const Paragraph&) const = default;
};

struct Document {
  std::string doc_id;
  std::string title;
  /// Retained paragraphs, in source order.
  std::vector<std::string> para_ids;

  bool operator==(const Document&) const = default;
};

struct RawParagraph {
  std::string text;
  std::vector<std::string> links;
};

struct RawDocument {
  std::string id;
  std::string title;
  std::vector<RawParagraph> paras;
};

/// Rule-based splitter: a sentence ends after '.', '!' or '?' when the next
/// non-space character is an uppercase letter (and at least one space
/// intervenes) or when only whitespace remains. Spans exclude surrounding
/// whitespace.
std::vector<SentenceSpan> split_sentences(std::string_view text);

/// Paragraphs must have strictly more than this many whitespace words.
inline constexpr std::size_t kMinParagraphWordsExclusive = 7;

/// Immutable paragraph corpus with a title map and a hyperlink graph.
/// Built once (single writer) and then safe for concurrent readers.
class CorpusStore {
 public:
  CorpusStore() = default;

  /// Ingests documents in order. Duplicate titles or doc ids raise IngestError.
  static CorpusStore ingest(std::span<const RawDocument> docs);
  /// Reads one JSON document per line: {"id","title","paras":[{"text","links"}]}.
  static CorpusStore ingest_jsonl(std::istream& in);

  /// Writes paragraphs.jsonl and documents.jsonl (the title map sidecar).
  void save(const std::filesystem::path& dir) const;
  static CorpusStore load(const std::filesystem::path& dir);

  const std::vector<Paragraph>& paragraphs() const { return paragraphs_; }
  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return paragraphs_.size(); }
  bool empty() const { return paragraphs_.empty(); }

  const Paragraph* find_paragraph(std::string_view para_id) const;
  /// Throws std::out_of_range for unknown ids.
  const Paragraph& paragraph(std::string_view para_id) const;
  /// Row position of a paragraph in paragraphs().
  std::size_t paragraph_index(std::string_view para_id) const;

  const Document* find_document(std::string_view doc_id) const;
  const Document* document_for_title(std::string_view title) const;
  /// First retained paragraph of a document, or nullptr.
  const Paragraph* first_paragraph(std::string_view doc_id) const;

  /// First retained paragraph of each distinct document linked from
  /// `para_id`, in link order. Dangling or fully filtered targets are skipped.
  std::vector<const Paragraph*> hyperlink_neighbors(std::string_view para_id) const;

  bool operator==(const CorpusStore& other) const {
    return paragraphs_ == other.paragraphs_ && documents_ == other.documents_;
  }

 private:
  void add_document(Document doc, std::vector<Paragraph> paras);

  std::vector<Paragraph> paragraphs_;
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> para_index_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::unordered_map<std::string, std::size_t> title_index_;
};

}  // namespace hopforge
