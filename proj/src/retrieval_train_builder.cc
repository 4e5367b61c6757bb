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
#include "hopforge/retrieval_train_builder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <spdlog/spdlog.h>

#include "hopforge/serialization.h"
#include "hopforge/text.h"
#include "json.hpp"

namespace hopforge {

namespace {

using nlohmann::json;
using SentenceKey = std::pair<std::string, std::size_t>;

std::vector<TitledText> gold_prefix(const ReasoningPath& path, const CorpusStore& store,
                                    std::size_t n) {
  std::vector<TitledText> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = store.paragraph(path.gold_para_ids[i]);
    out.push_back({p.title, p.text});
  }
  return out;
}

std::set<SentenceKey> gold_keys(const ReasoningPath& path) {
  std::set<SentenceKey> out;
  for (std::size_t i = 0; i < path.gold_sentences.size() && i < path.gold_para_ids.size(); ++i) {
    for (auto s : path.gold_sentences[i]) out.insert({path.gold_para_ids[i], s});
  }
  return out;
}

std::vector<double> sentence_flags(const Paragraph& para, const std::set<SentenceKey>& gold) {
  std::vector<double> out(para.sentence_count(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gold.contains({para.para_id, i}) ? 1.0 : 0.0;
  return out;
}

}  // namespace

void ReasoningPath::validate() const {
  if (gold_para_ids.empty()) throw PathError("reasoning path " + qid + " has no gold paragraphs");
  if (gold_para_ids.size() > kMaxPathHops) {
    throw PathError("reasoning path " + qid + " has more than 4 hops");
  }
  std::set<std::string> seen(gold_para_ids.begin(), gold_para_ids.end());
  if (seen.size() != gold_para_ids.size()) {
    throw PathError("reasoning path " + qid + " repeats a gold paragraph");
  }
  if (gold_sentences.size() > gold_para_ids.size()) {
    throw PathError("reasoning path " + qid + " has more sentence labels than paragraphs");
  }
}

ReasoningPath parse_path_line(std::string_view line) {
  ReasoningPath p;
  try {
    const auto j = json::parse(line);
    p.qid = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    p.question = j.at("question").get<std::string>();
    p.gold_para_ids = j.at("path").get<std::vector<std::string>>();
    if (j.contains("gold_sentences")) {
      p.gold_sentences = j["gold_sentences"].get<std::vector<std::vector<std::size_t>>>();
    }
    if (j.contains("negatives")) p.negative_para_ids = j["negatives"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw PathError(std::string("malformed path line: ") + e.what());
  }
  p.validate();
  return p;
}

std::vector<RetrievalSample> expand_path(const ReasoningPath& path, const CorpusStore& store) {
  path.validate();
  std::vector<RetrievalSample> out;
  for (std::size_t t = 0; t < path.gold_para_ids.size(); ++t) {
    RetrievalSample s;
    s.qid = path.qid;
    s.hop = t;
    s.query = serialize_retriever_query(path.question, gold_prefix(path, store, t));
    s.pos_para_id = path.gold_para_ids[t];
    s.batch_group = path.qid;
    out.push_back(std::move(s));
  }
  return out;
}

RetrievalSample attach_negatives(RetrievalSample sample, const ReasoningPath& path,
                                 const CorpusStore& store, std::size_t count,
                                 std::string_view salt) {
  std::set<std::string> excluded(path.gold_para_ids.begin(), path.gold_para_ids.end());
  excluded.insert(sample.pos_para_id);
  for (const auto& gid : path.gold_para_ids) {
    const auto* para = store.find_paragraph(gid);
    if (!para) continue;
    if (const auto* doc = store.find_document(para->doc_id)) {
      excluded.insert(doc->para_ids.begin(), doc->para_ids.end());
    }
  }

  std::vector<std::string> chosen;
  auto take = [&](const std::string& id) {
    if (chosen.size() >= count || excluded.contains(id)) return;
    if (std::find(chosen.begin(), chosen.end(), id) != chosen.end()) return;
    if (!store.find_paragraph(id)) return;
    chosen.push_back(id);
  };
  for (const auto& id : path.negative_para_ids) take(id);
  for (const auto& gid : path.gold_para_ids) {
    if (!store.find_paragraph(gid)) continue;
    for (const auto* n : store.hyperlink_neighbors(gid)) take(n->para_id);
  }

  if (chosen.size() < count) {
    spdlog::debug("{}: {} mined negatives, padding with random paragraphs", path.qid,
                  chosen.size());
    std::mt19937_64 rng(text::seed_for(path.qid + "/" + std::to_string(sample.hop), salt));
    const auto& paras = store.paragraphs();
    if (!paras.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, paras.size() - 1);
      for (std::size_t tries = 0; chosen.size() < count && tries < 64 * count; ++tries) {
        take(paras[pick(rng)].para_id);
      }
      // Small or mostly-gold corpora: sweep from a random offset.
      const auto start = pick(rng);
      for (std::size_t i = 0; chosen.size() < count && i < paras.size(); ++i) {
        take(paras[(start + i) % paras.size()].para_id);
      }
    }
    if (chosen.size() < count) {
      spdlog::warn("{}: only {} negatives available", path.qid, chosen.size());
    }
  }
  sample.neg_para_ids = std::move(chosen);
  return sample;
}

RetrievalLoss retrieval_loss(std::span<const double> query, std::span<const double> positive,
                             const std::vector<std::vector<double>>& negatives) {
  auto ip = [&](std::span<const double> d) {
    if (d.size() != query.size()) throw std::invalid_argument("retrieval_loss: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += query[i] * d[i];
    return s;
  };
  const double pos = ip(positive);
  std::vector<double> logits{pos};
  for (const auto& n : negatives) logits.push_back(ip(n));
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - m);
  const double lse = m + std::log(sum);
  const double loss = lse - pos;
  return {std::exp(-loss), loss};
}

std::size_t reranker_depth(std::size_t hops, std::mt19937_64& rng) {
  if (hops == 2) return std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  return hops;
}

std::vector<SharedNormPair> build_reranker_samples(const ReasoningPath& path,
                                                   const CorpusStore& store,
                                                   std::string_view salt) {
  path.validate();
  std::mt19937_64 rng(text::seed_for(path.qid, salt));
  const auto depth = reranker_depth(path.gold_para_ids.size(), rng);
  auto sample = expand_path(path, store)[depth - 1];
  sample = attach_negatives(std::move(sample), path, store, 1, salt);
  if (sample.neg_para_ids.empty()) {
    spdlog::warn("{}: no negative paragraph, reranker pair skipped", path.qid);
    return {};
  }
  const auto gold = gold_keys(path);
  const auto& pos = store.paragraph(sample.pos_para_id);
  const auto& neg = store.paragraph(sample.neg_para_ids.front());
  const bool labelled = depth - 1 < path.gold_sentences.size() &&
                        !path.gold_sentences[depth - 1].empty();

  SharedNormPair pair;
  pair.pair_id = path.qid + ":rerank";
  pair.query = sample.query;
  pair.positive = {pos.para_id, serialize_reranker_input(sample.query, pos.title, pos.sentences()),
                   1.0, labelled ? sentence_flags(pos, gold) : std::vector<double>{}, {}};
  pair.negative = {neg.para_id, serialize_reranker_input(sample.query, neg.title, neg.sentences()),
                   0.0, std::vector<double>(neg.sentence_count(), 0.0), {}};
  return {std::move(pair)};
}

double evidence_label(const std::set<std::pair<std::string, std::size_t>>& set,
                      const std::set<std::pair<std::string, std::size_t>>& gold) {
  return std::includes(set.begin(), set.end(), gold.begin(), gold.end()) ? 1.0 : 0.0;
}

std::vector<SharedNormPair> build_evidence_samples(const ReasoningPath& path,
                                                   const CorpusStore& store,
                                                   const EvidenceSampleOptions& options,
                                                   std::string_view salt) {
  path.validate();
  const auto gold = gold_keys(path);
  if (gold.empty()) return {};
  if (gold.size() > options.max_sentences) {
    spdlog::warn("{}: {} gold sentences exceed the evidence set cap", path.qid, gold.size());
    return {};
  }
  std::mt19937_64 rng(text::seed_for(path.qid, salt));

  std::vector<SentenceKey> from_pos;
  for (const auto& gid : path.gold_para_ids) {
    const auto& p = store.paragraph(gid);
    for (std::size_t i = 0; i < p.sentence_count(); ++i) {
      if (!gold.contains({gid, i})) from_pos.push_back({gid, i});
    }
  }
  std::vector<SentenceKey> from_neg;
  RetrievalSample probe{path.qid, 0, "", path.gold_para_ids.front(), {}, path.qid};
  probe = attach_negatives(std::move(probe), path, store, kAdversarialNegatives, salt);
  for (const auto& nid : probe.neg_para_ids) {
    const auto& p = store.paragraph(nid);
    for (std::size_t i = 0; i < p.sentence_count(); ++i) from_neg.push_back({nid, i});
  }

  std::bernoulli_distribution use_pos(options.from_positive_paragraph);
  std::set<SentenceKey> used(gold.begin(), gold.end());
  auto draw = [&]() -> std::optional<SentenceKey> {
    bool pos_first = use_pos(rng);
    for (int attempt = 0; attempt < 2; ++attempt) {
      auto& pool = (pos_first == (attempt == 0)) ? from_pos : from_neg;
      std::vector<SentenceKey> open;
      for (const auto& k : pool) {
        if (!used.contains(k)) open.push_back(k);
      }
      if (!open.empty()) {
        auto k = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
        used.insert(k);
        return k;
      }
    }
    return std::nullopt;
  };

  std::vector<SentenceKey> full(gold.begin(), gold.end());
  for (std::size_t i = 0; i < options.extra_distractors && full.size() < options.max_sentences; ++i) {
    if (auto k = draw()) full.push_back(*k);
  }
  std::shuffle(full.begin(), full.end(), rng);

  // Replace between one and all gold sentences.
  std::vector<std::size_t> gold_positions;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (gold.contains(full[i])) gold_positions.push_back(i);
  }
  std::shuffle(gold_positions.begin(), gold_positions.end(), rng);
  const auto replace =
      std::uniform_int_distribution<std::size_t>(1, gold_positions.size())(rng);
  std::vector<std::optional<SentenceKey>> partial(full.begin(), full.end());
  for (std::size_t r = 0; r < replace; ++r) partial[gold_positions[r]] = draw();
  std::vector<SentenceKey> partial_set;
  for (const auto& k : partial) {
    if (k) partial_set.push_back(*k);
  }
  if (partial_set.empty()) {
    spdlog::warn("{}: no negative sentences to substitute, evidence pair skipped", path.qid);
    return {};
  }

  auto instance = [&](const std::vector<SentenceKey>& keys) {
    TrainInstance inst;
    std::vector<TitledText> sentences;
    std::set<SentenceKey> as_set;
    for (const auto& k : keys) {
      const auto& p = store.paragraph(k.first);
      sentences.push_back({p.title, std::string(p.sentence(k.second))});
      inst.sentence_labels.push_back(gold.contains(k) ? 1.0 : 0.0);
      inst.sentences.push_back(k);
      as_set.insert(k);
    }
    inst.input = serialize_evidence_input(path.question, sentences);
    inst.label = evidence_label(as_set, gold);
    return inst;
  };

  SharedNormPair pair;
  pair.pair_id = path.qid + ":evidence";
  pair.query = path.question;
  pair.positive = instance(full);
  pair.negative = instance(partial_set);
  return {std::move(pair)};
}

std::string retrieval_sample_record(const RetrievalSample& s) {
  return json{{"query", s.query},
              {"pos_para_id", s.pos_para_id},
              {"neg_para_ids", s.neg_para_ids},
              {"pair_id", s.batch_group},
              {"qid", s.qid},
              {"hop", s.hop}}
      .dump();
}

std::vector<std::string> pair_records(const SharedNormPair& pair) {
  auto one = [&](const TrainInstance& inst, const char* role) {
    json j{{"pair_id", pair.pair_id},
           {"role", role},
           {"query", pair.query},
           {"input", inst.input},
           {"label", inst.label},
           {"sentence_labels", inst.sentence_labels}};
    if (!inst.para_id.empty()) j["para_id"] = inst.para_id;
    if (!inst.sentences.empty()) {
      json keys = json::array();
      for (const auto& [pid, idx] : inst.sentences) keys.push_back({{"para_id", pid}, {"sent_idx", idx}});
      j["sentences"] = std::move(keys);
    }
    return j.dump();
  };
  return {one(pair.positive, "positive"), one(pair.negative, "negative")};
}

}  // namespace hopforge
