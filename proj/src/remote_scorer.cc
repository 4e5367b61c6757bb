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

#include <algorithm>
#include <cmath>
#include <future>

#include "hopforge/serialization.h"
#include "httplib.h"
#include "json.hpp"

namespace hopforge {

using json = nlohmann::json;

namespace {

double clamp_score(const json& v) {
  double d = v.get<double>();
  if (std::isnan(d)) throw ScorerError("remote scorer returned NaN");
  return std::clamp(d, 0.0, 1.0);
}

std::optional<SpanPrediction> read_span(const json& j) {
  auto it = j.find("span");
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return SpanPrediction{InsufficientEvidence{}};
  return SpanPrediction{AnswerSpan{it->at(0).get<std::size_t>(), it->at(1).get<std::size_t>()}};
}

// Runs `fn` over [0, n) in chunks of `batch`, keeping at most `in_flight`
// chunks outstanding, and concatenates the per-chunk results in order.
template <typename T, typename Fn>
std::vector<T> run_batched(std::size_t n, std::size_t batch, std::size_t in_flight, Fn&& fn) {
  batch = std::max<std::size_t>(batch, 1);
  in_flight = std::max<std::size_t>(in_flight, 1);
  std::vector<T> out;
  out.reserve(n);
  std::size_t next = 0;
  while (next < n) {
    std::vector<std::future<std::vector<T>>> wave;
    for (std::size_t w = 0; w < in_flight && next < n; ++w) {
      std::size_t begin = next;
      std::size_t end = std::min(n, begin + batch);
      wave.push_back(std::async(std::launch::async, [&fn, begin, end] { return fn(begin, end); }));
      next = end;
    }
    for (auto& f : wave) {
      auto part = f.get();
      std::move(part.begin(), part.end(), std::back_inserter(out));
    }
  }
  return out;
}

json slice_to_json(std::span<const std::string> items, std::size_t begin, std::size_t end) {
  json arr = json::array();
  for (std::size_t i = begin; i < end; ++i) arr.push_back(items[i]);
  return arr;
}

}  // namespace

RemoteScorerClient::RemoteScorerClient(std::string base_url, RemoteScorerOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (options_.timeout.count() <= 0) throw ScorerError("scorer client timeout must be positive");
  if (options_.max_batch == 0 || options_.max_in_flight == 0) {
    throw ScorerError("scorer client batch size and in-flight limit must be positive");
  }
}

std::optional<std::size_t> RemoteScorerClient::reported_dim() const {
  std::lock_guard<std::mutex> lock(mu_);
  return dim_;
}

std::string RemoteScorerClient::post(const std::string& path, const std::string& body) const {
  httplib::Client cli(base_url_);
  cli.set_read_timeout(options_.timeout);
  cli.set_write_timeout(options_.timeout);
  auto res = cli.Post(path, body, "application/json");
  if (!res) {
    throw ScorerError("POST " + base_url_ + path + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ScorerError("POST " + base_url_ + path + " returned HTTP " +
                      std::to_string(res->status) + ": " + res->body);
  }
  return res->body;
}

std::vector<std::vector<float>> RemoteScorerClient::embed(
    std::span<const std::string> texts) const {
  return run_batched<std::vector<float>>(
      texts.size(), options_.max_batch, options_.max_in_flight,
      [&](std::size_t b, std::size_t e) {
        auto body = json{{"texts", slice_to_json(texts, b, e)}}.dump();
        auto j = json::parse(post("/embed", body));
        auto dim = j.at("dim").get<std::size_t>();
        auto vectors = j.at("vectors").get<std::vector<std::vector<float>>>();
        if (vectors.size() != e - b) throw ScorerError("/embed returned wrong vector count");
        for (const auto& v : vectors) {
          if (v.size() != dim) throw ScorerError("/embed vector length disagrees with dim");
        }
        std::lock_guard<std::mutex> lock(mu_);
        if (dim_ && *dim_ != dim) throw ScorerError("/embed dim changed between calls");
        dim_ = dim;
        return vectors;
      });
}

std::vector<ParagraphScore> RemoteScorerClient::score_paragraphs(
    std::span<const std::string> inputs) const {
  return run_batched<ParagraphScore>(
      inputs.size(), options_.max_batch, options_.max_in_flight,
      [&](std::size_t b, std::size_t e) {
        auto body = json{{"inputs", slice_to_json(inputs, b, e)}}.dump();
        auto j = json::parse(post("/score_paragraph", body));
        const auto& arr = j.at("scores");
        if (arr.size() != e - b) throw ScorerError("/score_paragraph returned wrong count");
        std::vector<ParagraphScore> out;
        for (std::size_t i = 0; i < arr.size(); ++i) {
          ParagraphScore s;
          s.p = clamp_score(arr[i].at("p"));
          for (const auto& v : arr[i].at("s_p")) s.s_p.push_back(clamp_score(v));
          s.span = read_span(arr[i]);
          validate_score(s, inputs[b + i]);
          out.push_back(std::move(s));
        }
        return out;
      });
}

std::vector<EvidenceScore> RemoteScorerClient::score_evidence(
    std::span<const std::string> inputs) const {
  return run_batched<EvidenceScore>(
      inputs.size(), options_.max_batch, options_.max_in_flight,
      [&](std::size_t b, std::size_t e) {
        auto body = json{{"inputs", slice_to_json(inputs, b, e)}}.dump();
        auto j = json::parse(post("/score_evidence", body));
        const auto& arr = j.at("scores");
        if (arr.size() != e - b) throw ScorerError("/score_evidence returned wrong count");
        std::vector<EvidenceScore> out;
        for (std::size_t i = 0; i < arr.size(); ++i) {
          EvidenceScore s;
          s.e = clamp_score(arr[i].at("e"));
          for (const auto& v : arr[i].at("s_e")) s.s_e.push_back(clamp_score(v));
          s.span = read_span(arr[i]);
          validate_score(s, inputs[b + i]);
          out.push_back(std::move(s));
        }
        return out;
      });
}

std::size_t RemoteEmbedder::dim() const {
  if (auto d = client_->reported_dim()) return *d;
  std::string probe = "dimension probe";
  client_->embed(std::span<const std::string>(&probe, 1));
  return client_->reported_dim().value();
}

std::vector<std::vector<float>> RemoteEmbedder::embed_batch(
    std::span<const std::string> texts) const {
  return client_->embed(texts);
}

}  // namespace hopforge
