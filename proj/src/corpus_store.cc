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

#include <spdlog/spdlog.h>

#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "hopforge/text.h"
#include "json.hpp"

namespace hopforge {

using json = nlohmann::json;

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

json paragraph_to_json(const Paragraph& p) {
  json spans = json::array();
  for (const auto& s : p.sentence_spans) spans.push_back({s.begin, s.end});
  return {{"para_id", p.para_id},       {"doc_id", p.doc_id},
          {"title", p.title},           {"text", p.text},
          {"spans", std::move(spans)},  {"links", p.hyperlink_titles}};
}

Paragraph paragraph_from_json(const json& j) {
  Paragraph p;
  p.para_id = j.at("para_id").get<std::string>();
  p.doc_id = j.at("doc_id").get<std::string>();
  p.title = j.at("title").get<std::string>();
  p.text = j.at("text").get<std::string>();
  for (const auto& s : j.at("spans")) {
    p.sentence_spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
  }
  p.hyperlink_titles = j.at("links").get<std::vector<std::string>>();
  return p;
}

}  // namespace

std::string_view Paragraph::sentence(std::size_t i) const {
  const auto& span = sentence_spans.at(i);
  return std::string_view(text).substr(span.begin, span.end - span.begin);
}

std::vector<std::string> Paragraph::sentences() const {
  std::vector<std::string> out;
  out.reserve(sentence_spans.size());
  for (std::size_t i = 0; i < sentence_spans.size(); ++i) out.emplace_back(sentence(i));
  return out;
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  const std::size_t n = text.size();
  std::size_t start = 0;
  while (start < n && is_space(text[start])) ++start;
  std::size_t last = n;
  while (last > start && is_space(text[last - 1])) --last;
  if (start >= last) return spans;

  for (std::size_t i = start; i < last; ++i) {
    if (!is_terminator(text[i])) continue;
    std::size_t j = i + 1;
    while (j < n && is_space(text[j])) ++j;
    if (j < last && j > i + 1 && is_upper(text[j])) {
      spans.push_back({start, i + 1});
      start = j;
      i = j - 1;
    }
  }
  spans.push_back({start, last});
  return spans;
}

void CorpusStore::add_document(Document doc, std::vector<Paragraph> paras) {
  if (doc_index_.count(doc.doc_id)) {
    throw IngestError("duplicate document id: " + doc.doc_id);
  }
  if (title_index_.count(doc.title)) {
    throw IngestError("duplicate document title: " + doc.title);
  }
  for (auto& p : paras) {
    if (para_index_.count(p.para_id)) {
      throw IngestError("duplicate paragraph id: " + p.para_id);
    }
    para_index_.emplace(p.para_id, paragraphs_.size());
    paragraphs_.push_back(std::move(p));
  }
  doc_index_.emplace(doc.doc_id, documents_.size());
  title_index_.emplace(doc.title, documents_.size());
  documents_.push_back(std::move(doc));
}

CorpusStore CorpusStore::ingest(std::span<const RawDocument> docs) {
  CorpusStore store;
  std::size_t dropped = 0;
  for (const auto& raw : docs) {
    Document doc{raw.id, raw.title, {}};
    std::vector<Paragraph> paras;
    for (std::size_t i = 0; i < raw.paras.size(); ++i) {
      const auto& rp = raw.paras[i];
      if (text::count_words(rp.text) <= kMinParagraphWordsExclusive) {
        ++dropped;
        continue;
      }
      Paragraph p;
      p.para_id = raw.id + "_" + std::to_string(i);
      p.doc_id = raw.id;
      p.title = raw.title;
      p.text = rp.text;
      p.sentence_spans = split_sentences(rp.text);
      p.hyperlink_titles = rp.links;
      doc.para_ids.push_back(p.para_id);
      paras.push_back(std::move(p));
    }
    store.add_document(std::move(doc), std::move(paras));
  }
  spdlog::debug("ingested {} documents, {} paragraphs ({} dropped by length)",
                store.documents_.size(), store.paragraphs_.size(), dropped);
  return store;
}

CorpusStore CorpusStore::ingest_jsonl(std::istream& in) {
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      RawDocument doc;
      doc.id = j.at("id").get<std::string>();
      doc.title = j.at("title").get<std::string>();
      for (const auto& pj : j.value("paras", json::array())) {
        RawParagraph rp;
        rp.text = pj.at("text").get<std::string>();
        if (pj.contains("links")) rp.links = pj.at("links").get<std::vector<std::string>>();
        doc.paras.push_back(std::move(rp));
      }
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw IngestError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ingest(docs);
}

void CorpusStore::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream paras(dir / "paragraphs.jsonl");
  std::ofstream docs(dir / "documents.jsonl");
  if (!paras || !docs) throw std::runtime_error("cannot write corpus to " + dir.string());
  for (const auto& p : paragraphs_) paras << paragraph_to_json(p).dump() << '\n';
  for (const auto& d : documents_) {
    docs << json{{"doc_id", d.doc_id}, {"title", d.title}, {"para_ids", d.para_ids}}.dump()
         << '\n';
  }
}

CorpusStore CorpusStore::load(const std::filesystem::path& dir) {
  std::ifstream paras(dir / "paragraphs.jsonl");
  std::ifstream docs(dir / "documents.jsonl");
  if (!paras || !docs) throw std::runtime_error("cannot read corpus from " + dir.string());

  std::unordered_map<std::string, Paragraph> by_id;
  std::string line;
  while (std::getline(paras, line)) {
    if (text::trim(line).empty()) continue;
    auto p = paragraph_from_json(json::parse(line));
    std::string id = p.para_id;
    by_id.emplace(std::move(id), std::move(p));
  }
  CorpusStore store;
  while (std::getline(docs, line)) {
    if (text::trim(line).empty()) continue;
    auto j = json::parse(line);
    Document d{j.at("doc_id").get<std::string>(), j.at("title").get<std::string>(),
               j.at("para_ids").get<std::vector<std::string>>()};
    std::vector<Paragraph> ps;
    for (const auto& id : d.para_ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw IngestError("title map references missing paragraph " + id);
      ps.push_back(std::move(it->second));
      by_id.erase(it);
    }
    store.add_document(std::move(d), std::move(ps));
  }
  if (!by_id.empty()) {
    throw IngestError("paragraph " + by_id.begin()->first + " has no document in the title map");
  }
  return store;
}

const Paragraph* CorpusStore::find_paragraph(std::string_view para_id) const {
  auto it = para_index_.find(std::string(para_id));
  return it == para_index_.end() ? nullptr : &paragraphs_[it->second];
}

const Paragraph& CorpusStore::paragraph(std::string_view para_id) const {
  const auto* p = find_paragraph(para_id);
  if (!p) throw std::out_of_range("unknown paragraph id: " + std::string(para_id));
  return *p;
}

std::size_t CorpusStore::paragraph_index(std::string_view para_id) const {
  auto it = para_index_.find(std::string(para_id));
  if (it == para_index_.end()) {
    throw std::out_of_range("unknown paragraph id: " + std::string(para_id));
  }
  return it->second;
}

const Document* CorpusStore::find_document(std::string_view doc_id) const {
  auto it = doc_index_.find(std::string(doc_id));
  return it == doc_index_.end() ? nullptr : &documents_[it->second];
}

const Document* CorpusStore::document_for_title(std::string_view title) const {
  auto it = title_index_.find(std::string(title));
  return it == title_index_.end() ? nullptr : &documents_[it->second];
}

const Paragraph* CorpusStore::first_paragraph(std::string_view doc_id) const {
  const auto* doc = find_document(doc_id);
  if (!doc || doc->para_ids.empty()) return nullptr;
  return find_paragraph(doc->para_ids.front());
}

std::vector<const Paragraph*> CorpusStore::hyperlink_neighbors(std::string_view para_id) const {
  const auto& source = paragraph(para_id);
  std::vector<const Paragraph*> out;
  std::unordered_set<std::string> seen;
  for (const auto& title : source.hyperlink_titles) {
    const auto* doc = document_for_title(title);
    if (!doc) {
      spdlog::debug("{}: dangling link to '{}'", source.para_id, title);
      continue;
    }
    if (!seen.insert(doc->doc_id).second) continue;
    const auto* first = first_paragraph(doc->doc_id);
    if (!first) {
      spdlog::debug("{}: linked document '{}' has no retained paragraphs", source.para_id, title);
      continue;
    }
    out.push_back(first);
  }
  return out;
}

}  // namespace hopforge
