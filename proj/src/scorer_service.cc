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
#include "hopforge/scorer_service.h"

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"

namespace hopforge {

using json = nlohmann::json;

namespace {

void put_span(json& j, const std::optional<SpanPrediction>& span) {
  if (!span) return;
  if (const auto* s = std::get_if<AnswerSpan>(&*span)) {
    j["span"] = {s->start, s->end};
  } else {
    j["span"] = "insufficient";
  }
}

void reply_error(httplib::Response& res, int status, const std::string& msg) {
  res.status = status;
  res.set_content(json{{"error", msg}}.dump(), "application/json");
}

}  // namespace

std::string encode_embed_response(std::size_t dim, const std::vector<std::vector<float>>& vectors) {
  json vs = json::array();
  for (const auto& v : vectors) vs.push_back(v);
  return json{{"dim", dim}, {"vectors", std::move(vs)}}.dump();
}

std::string encode_paragraph_response(const std::vector<ParagraphScore>& scores) {
  json arr = json::array();
  for (const auto& s : scores) {
    json j{{"p", s.p}, {"s_p", s.s_p}};
    put_span(j, s.span);
    arr.push_back(std::move(j));
  }
  return json{{"scores", std::move(arr)}}.dump();
}

std::string encode_evidence_response(const std::vector<EvidenceScore>& scores) {
  json arr = json::array();
  for (const auto& s : scores) {
    json j{{"e", s.e}, {"s_e", s.s_e}};
    put_span(j, s.span);
    arr.push_back(std::move(j));
  }
  return json{{"scores", std::move(arr)}}.dump();
}

struct ScorerService::Impl {
  httplib::Server server;
};

ScorerService::ScorerService(const Embedder& embedder, const ParagraphScorer& paragraph_scorer,
                             const EvidenceScorer& evidence_scorer, std::size_t max_batch)
    : impl_(std::make_unique<Impl>()) {
  auto read_list = [max_batch](const httplib::Request& req, httplib::Response& res,
                               const char* key) -> std::optional<std::vector<std::string>> {
    try {
      auto body = json::parse(req.body);
      auto items = body.at(key).get<std::vector<std::string>>();
      if (items.size() > max_batch) {
        reply_error(res, 413, "batch of " + std::to_string(items.size()) + " exceeds " +
                                  std::to_string(max_batch));
        return std::nullopt;
      }
      return items;
    } catch (const std::exception& e) {
      reply_error(res, 400, e.what());
      return std::nullopt;
    }
  };

  impl_->server.Post("/embed", [&embedder, read_list](const httplib::Request& req,
                                                     httplib::Response& res) {
    auto texts = read_list(req, res, "texts");
    if (!texts) return;
    try {
      res.set_content(encode_embed_response(embedder.dim(), embedder.embed_batch(*texts)),
                      "application/json");
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  });
  impl_->server.Post("/score_paragraph", [&paragraph_scorer, read_list](
                                              const httplib::Request& req,
                                              httplib::Response& res) {
    auto inputs = read_list(req, res, "inputs");
    if (!inputs) return;
    try {
      res.set_content(encode_paragraph_response(paragraph_scorer.score(*inputs)),
                      "application/json");
    } catch (const std::invalid_argument& e) {
      reply_error(res, 400, e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  });
  impl_->server.Post("/score_evidence", [&evidence_scorer, read_list](
                                             const httplib::Request& req,
                                             httplib::Response& res) {
    auto inputs = read_list(req, res, "inputs");
    if (!inputs) return;
    try {
      res.set_content(encode_evidence_response(evidence_scorer.score(*inputs)),
                      "application/json");
    } catch (const std::invalid_argument& e) {
      reply_error(res, 400, e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, e.what());
    }
  });
}

ScorerService::~ScorerService() { stop(); }

int ScorerService::start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) port_ = -1;
    else port_ = port;
  }
  if (port_ < 0) throw std::runtime_error("scorer service cannot bind " + host);
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  spdlog::debug("scorer service listening on {}", url());
  return port_;
}

void ScorerService::serve(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  spdlog::info("scorer service listening on {}", url());
  if (!impl_->server.listen(host, port)) {
    throw std::runtime_error("scorer service cannot listen on " + url());
  }
}

void ScorerService::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string ScorerService::url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

}  // namespace hopforge
