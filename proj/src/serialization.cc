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
#include "hopforge/serialization.h"

namespace hopforge {

namespace {

constexpr std::string_view kCls = "[CLS] ";
constexpr std::string_view kHeader = " [SEP] yes no [INSUFF] [SEP] ";
constexpr std::string_view kTail = " [SEP]";
constexpr std::string_view kMarkerSep = " [SM] ";
constexpr std::string_view kSegmentSep = " [QSEP] ";
constexpr std::string_view kTitleSep = " | ";

std::vector<std::string_view> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

// Splits "[CLS] head [SEP] yes no [INSUFF] [SEP] body [SEP]" into head and body.
std::pair<std::string_view, std::string_view> split_frame(std::string_view input) {
  if (!input.starts_with(kCls) || !input.ends_with(kTail)) {
    throw SerializationError("scorer input is not framed by [CLS] ... [SEP]");
  }
  auto inner = input.substr(kCls.size(), input.size() - kCls.size() - kTail.size());
  auto h = inner.find(kHeader);
  if (h == std::string_view::npos) {
    throw SerializationError("scorer input lacks the yes/no/[INSUFF] header");
  }
  return {inner.substr(0, h), inner.substr(h + kHeader.size())};
}

TitledText split_titled(std::string_view s) {
  auto bar = s.find(kTitleSep);
  if (bar == std::string_view::npos) {
    throw SerializationError("segment lacks ' | ' title separator");
  }
  return {std::string(s.substr(0, bar)), std::string(s.substr(bar + kTitleSep.size()))};
}

}  // namespace

std::string serialize_retriever_query(std::string_view question,
                                      const std::vector<TitledText>& hop_paragraphs) {
  std::string out(question);
  for (const auto& p : hop_paragraphs) {
    out += kSegmentSep;
    out += p.title;
    out += kTitleSep;
    out += p.text;
  }
  return out;
}

std::string serialize_reranker_input(std::string_view query, std::string_view title,
                                     const std::vector<std::string>& sentences) {
  if (sentences.empty()) throw SerializationError("reranker input needs at least one sentence");
  std::string out(kCls);
  out += query;
  out += kHeader;
  out += title;
  for (const auto& s : sentences) {
    out += kMarkerSep;
    out += s;
  }
  out += kTail;
  return out;
}

std::string serialize_evidence_input(std::string_view question,
                                     const std::vector<TitledText>& sentences) {
  if (sentences.empty()) throw SerializationError("evidence input needs at least one sentence");
  if (sentences.size() > kMaxEvidenceSentences) {
    throw SerializationError("evidence set exceeds " + std::to_string(kMaxEvidenceSentences) +
                             " sentences");
  }
  std::string out(kCls);
  out += question;
  out += kHeader;
  out += kSentenceMarker;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    out += i == 0 ? std::string_view(" ") : kMarkerSep;
    out += sentences[i].title;
    out += kTitleSep;
    out += sentences[i].text;
  }
  out += kTail;
  return out;
}

ParsedRerankerInput parse_reranker_input(std::string_view input) {
  auto [head, body] = split_frame(input);
  auto parts = split_on(body, kMarkerSep);
  if (parts.size() < 2) throw SerializationError("reranker input has no [SM] sentences");
  ParsedRerankerInput out;
  out.query = std::string(head);
  out.question = std::string(query_question(head));
  out.title = std::string(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) out.sentences.emplace_back(parts[i]);
  return out;
}

ParsedEvidenceInput parse_evidence_input(std::string_view input) {
  auto [head, body] = split_frame(input);
  constexpr std::string_view kFirst = "[SM] ";
  if (!body.starts_with(kFirst)) throw SerializationError("evidence input has no [SM] sentences");
  ParsedEvidenceInput out;
  out.question = std::string(head);
  for (auto piece : split_on(body.substr(kFirst.size()), kMarkerSep)) {
    out.sentences.push_back(split_titled(piece));
  }
  if (out.sentences.size() > kMaxEvidenceSentences) {
    throw SerializationError("evidence input exceeds the sentence cap");
  }
  return out;
}

std::string_view query_question(std::string_view query) {
  auto pos = query.find(kSegmentSep);
  return pos == std::string_view::npos ? query : query.substr(0, pos);
}

std::vector<TitledText> query_segments(std::string_view query) {
  std::vector<TitledText> out;
  auto parts = split_on(query, kSegmentSep);
  for (std::size_t i = 1; i < parts.size(); ++i) out.push_back(split_titled(parts[i]));
  return out;
}

std::size_t count_sentence_markers(std::string_view input) {
  std::size_t n = 0;
  for (auto pos = input.find(kSentenceMarker); pos != std::string_view::npos;
       pos = input.find(kSentenceMarker, pos + kSentenceMarker.size())) {
    ++n;
  }
  return n;
}

}  // namespace hopforge
