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
#include "hopforge/iterator_pipeline.h"

#include <algorithm>
#include <atomic>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "hopforge/serialization.h"
#include "json.hpp"

namespace hopforge {

namespace {

using nlohmann::json;

// One retry, then give up with whatever trace we have.
template <typename Fn>
auto with_retry(const char* what, const std::vector<HopTrace>& trace, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    spdlog::warn("{} failed ({}), retrying once", what, e.what());
  }
  try {
    return fn();
  } catch (const std::exception& e) {
    throw PipelineError(std::string(what) + " failed after retry: " + e.what(), trace);
  }
}

json evidence_json(const EvidenceSetState& state) {
  json out = json::array();
  for (const auto& s : state.sentences) {
    out.push_back({{"para_id", s.para_id},
                   {"sent_idx", s.sent_idx},
                   {"text", s.text},
                   {"p", s.p},
                   {"s_e", s.s_e},
                   {"combined", s.combined}});
  }
  return out;
}

}  // namespace

std::string hop_trace_line(const HopTrace& hop) {
  json retrieved = json::array();
  for (const auto& r : hop.retrieved) retrieved.push_back({{"para_id", r.para_id}, {"score", r.score}});
  json reranked = json::array();
  for (const auto& r : hop.reranked) {
    reranked.push_back({{"para_id", r.para_id}, {"sent_idx", r.sent_idx}, {"p", r.p},
                        {"s_p", r.s_p}, {"s", r.s}});
  }
  return json{{"t", hop.t},
              {"query", hop.query},
              {"retrieved", std::move(retrieved)},
              {"reranked", std::move(reranked)},
              {"e", hop.state.e},
              {"sentences", evidence_json(hop.state)}}
      .dump();
}

QueryInput parse_query_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("query line must be a JSON object");
  QueryInput q;
  if (j.contains("id")) {
    q.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  }
  if (!j.contains("question") || !j["question"].is_string()) {
    throw std::invalid_argument("query line lacks a string 'question'");
  }
  q.question = j["question"].get<std::string>();
  if (j.contains("initial_paragraph") && !j["initial_paragraph"].is_null()) {
    const auto& ip = j["initial_paragraph"];
    if (ip.is_string()) {
      q.initial = InitialParagraph{"", ip.get<std::string>()};
    } else if (ip.is_object() && ip.contains("text") && ip["text"].is_string()) {
      q.initial = InitialParagraph{ip.value("title", std::string()), ip["text"].get<std::string>()};
    } else {
      throw std::invalid_argument("initial_paragraph must be a string or {title, text}");
    }
  }
  if (j.contains("answer") && j["answer"].is_string()) q.answer = j["answer"].get<std::string>();
  return q;
}

std::string result_record(const QueryInput& input, const QueryResult& result) {
  json rec = json::parse(context_record(input.question, result.context));
  rec["id"] = input.id;
  rec["best_hop"] = result.best_hop;
  rec["e"] = result.final_state.e;
  rec["evidence"] = evidence_json(result.final_state);
  if (input.answer) rec["answer"] = *input.answer;
  if (result.context.initial) {
    rec["initial_paragraph"] = {{"title", result.context.initial->title},
                                {"text", result.context.initial->text}};
  }
  return rec.dump();
}

Iterator::Iterator(const CorpusStore& store, const VectorSearcher& index, const Embedder& embedder,
                   const ParagraphScorer& reranker, const EvidenceScorer& evidence,
                   PipelineConfig config, text::TokenCounter counter)
    : store_(store),
      index_(index),
      embedder_(embedder),
      reranker_(reranker),
      evidence_(evidence),
      config_(std::move(config)),
      counter_(std::move(counter)) {
  config_.validate();
  if (embedder_.dim() != index_.dim()) {
    throw std::invalid_argument("embedder dim " + std::to_string(embedder_.dim()) +
                                " does not match index dim " + std::to_string(index_.dim()));
  }
}

std::string Iterator::hop_query(std::string_view question, const EvidenceSetState& state) const {
  std::vector<TitledText> paras;
  std::set<std::string> seen;
  const auto n = std::min(config_.query_sentences, state.sentences.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = state.sentences[i];
    if (!seen.insert(s.para_id).second) continue;
    const auto& para = store_.paragraph(s.para_id);
    paras.push_back({para.title, para.text});
  }
  return serialize_retriever_query(question, paras);
}

QueryResult Iterator::run_query(std::string_view question,
                                const std::optional<InitialParagraph>& initial) const {
  QueryResult result;
  std::vector<EvidenceSetState> history;
  EvidenceSetState state;

  for (std::size_t t = 0; t < config_.t_max; ++t) {
    HopTrace hop;
    hop.t = t;
    hop.query = hop_query(question, state);

    const auto qvec = with_retry("embedder", result.hops, [&] {
      auto v = embedder_.embed_query(hop.query);
      if (v.size() != index_.dim()) throw ScorerError("embedding has the wrong dimension");
      return v;
    });
    hop.retrieved = index_.search(qvec, config_.k);

    std::vector<const Paragraph*> paras;
    std::vector<std::string> inputs;
    for (const auto& r : hop.retrieved) {
      const auto& para = store_.paragraph(r.para_id);
      if (para.sentence_count() == 0) continue;
      paras.push_back(&para);
      inputs.push_back(serialize_reranker_input(hop.query, para.title, para.sentences()));
    }

    std::vector<ScoredParagraph> scored;
    if (!inputs.empty()) {
      const auto scores = with_retry("paragraph scorer", result.hops, [&] {
        auto out = reranker_.score(inputs);
        if (out.size() != inputs.size()) throw ScorerError("paragraph score count mismatch");
        for (std::size_t i = 0; i < out.size(); ++i) validate_score(out[i], inputs[i]);
        return out;
      });
      for (std::size_t i = 0; i < paras.size(); ++i) {
        scored.push_back({paras[i]->para_id, scores[i].p, scores[i].s_p});
      }
    }
    const auto ranked = rank_hop(scored, config_.fusion);

    std::vector<EvidenceCandidate> fresh;
    const auto offered = std::min(config_.evidence.per_hop_candidates, ranked.sentences.size());
    for (std::size_t i = 0; i < offered; ++i) {
      const auto& rs = ranked.sentences[i];
      const auto& para = store_.paragraph(rs.para_id);
      fresh.push_back({rs.para_id, rs.sent_idx, para.title, std::string(para.sentence(rs.sent_idx)),
                       rs.p, rs.s});
      hop.reranked.push_back(rs);
    }

    const auto pool = select_next(state, fresh, config_.evidence);
    if (pool.empty()) {
      // Nothing retrieved and nothing carried over; the hop keeps an empty set.
      hop.state = EvidenceSetState{t, {}, 0.0};
    } else {
      std::vector<TitledText> sentences;
      for (const auto& c : pool) sentences.push_back({c.title, c.text});
      const auto input = serialize_evidence_input(question, sentences);
      const auto ev = with_retry("evidence scorer", result.hops, [&] {
        auto out = evidence_.score(std::span<const std::string>(&input, 1));
        if (out.size() != 1) throw ScorerError("evidence score count mismatch");
        validate_score(out[0], input);
        return out[0];
      });
      std::vector<EvidenceSentence> candidates;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto& c = pool[i];
        candidates.push_back({c.para_id, c.sent_idx, c.title, c.text, c.p, ev.s_e[i], 0.0});
      }
      hop.state = commit(t, std::move(candidates), ev.e, config_.evidence);
    }
    state = hop.state;
    history.push_back(hop.state);
    spdlog::debug("hop {} e={:.4f} kept={}", t, hop.state.e, hop.state.sentences.size());
    result.hops.push_back(std::move(hop));
  }

  result.final_state = finalize(history);
  result.best_hop = result.final_state.hop;

  // Group the final evidence by paragraph, preserving the best sentence score.
  std::map<std::string, std::map<std::size_t, double>> by_para;
  std::map<std::string, double> para_p;
  for (const auto& s : result.final_state.sentences) {
    auto& slot = by_para[s.para_id][s.sent_idx];
    slot = std::max(slot, s.s_e);
    para_p[s.para_id] = std::max(para_p[s.para_id], s.p);
  }
  std::vector<Fragment> fragments;
  for (const auto& [pid, selected] : by_para) {
    auto f = recover_fragment(store_.paragraph(pid), selected, para_p[pid]);
    fragments.insert(fragments.end(), f.begin(), f.end());
  }
  // Reserve room for the question so the whole QA input fits the budget.
  const auto question_tokens = counter_(render_qa_input(question));
  const auto budget =
      config_.token_budget > question_tokens ? config_.token_budget - question_tokens : 0;
  result.context = pack(order_fragments(std::move(fragments)), budget, initial, counter_);
  return result;
}

std::size_t Iterator::run_batch(std::istream& in, std::ostream& out, std::ostream* trace) const {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!text::trim(line).empty()) lines.push_back(std::move(line));
  }

  struct Outcome {
    std::string record;
    std::vector<std::string> trace;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(lines.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      auto& o = outcomes[i];
      json err{{"line", i + 1}};
      try {
        const auto q = parse_query_line(lines[i]);
        err["id"] = q.id;
        try {
          const auto r = run_query(q.question, q.initial);
          o.record = result_record(q, r);
          for (const auto& h : r.hops) o.trace.push_back(hop_trace_line(h));
        } catch (const PipelineError& e) {
          for (const auto& h : e.partial_trace()) o.trace.push_back(hop_trace_line(h));
          throw;
        }
      } catch (const std::exception& e) {
        spdlog::error("line {}: {}", i + 1, e.what());
        if (!err.contains("id")) {
          // Keep the id of a parseable line whose other fields are bad.
          const auto j = json::parse(lines[i], nullptr, false);
          if (j.is_object() && j.contains("id")) {
            err["id"] = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
          }
        }
        err["error"] = e.what();
        o.record = err.dump();
        o.failed = true;
      }
      spdlog::info("line {} of {} {}", i + 1, lines.size(), o.failed ? "failed" : "done");
    }
  };

  {
    const auto n = std::max<std::size_t>(1, std::min(config_.workers, lines.size()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  std::size_t failures = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    out << outcomes[i].record << '\n';
    if (trace) {
      for (const auto& h : outcomes[i].trace) {
        auto j = json::parse(h);
        j["line"] = i + 1;
        *trace << j.dump() << '\n';
      }
    }
    failures += outcomes[i].failed ? 1 : 0;
  }
  return failures;
}

}  // namespace hopforge
