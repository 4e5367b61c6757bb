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
#include "hopforge/hnsw_index.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "hopforge/text.h"

namespace hopforge {

namespace {

struct WorstFirst {
  template <typename C>
  bool operator()(const C& a, const C& b) const { return a.sim > b.sim; }
};
struct BestFirst {
  template <typename C>
  bool operator()(const C& a, const C& b) const { return a.sim < b.sim; }
};

}  // namespace

HnswIndex::HnswIndex(std::shared_ptr<const EmbeddingMatrix> matrix, HnswParams params)
    : matrix_(std::move(matrix)), params_(params) {
  if (!matrix_) throw IndexError("HnswIndex needs a matrix");
  if (params_.m < 2) throw IndexError("HNSW m must be at least 2");
  const double level_mult = 1.0 / std::log(static_cast<double>(params_.m));
  links_.resize(matrix_->size());
  for (std::size_t i = 0; i < matrix_->size(); ++i) {
    const double u = 1.0 - text::unit_from_hash(params_.seed, i);  // (0, 1]
    const int level = static_cast<int>(std::floor(-std::log(u) * level_mult));
    insert(static_cast<Node>(i), level);
  }
}

std::vector<HnswIndex::Candidate> HnswIndex::search_layer(std::span<const float> q, Node entry,
                                                          std::size_t ef, int level) const {
  std::vector<char> visited(matrix_->size(), 0);
  std::priority_queue<Candidate, std::vector<Candidate>, BestFirst> frontier;
  std::priority_queue<Candidate, std::vector<Candidate>, WorstFirst> found;
  const Candidate start{sim(q, entry), entry};
  visited[entry] = 1;
  frontier.push(start);
  found.push(start);
  while (!frontier.empty()) {
    const Candidate c = frontier.top();
    if (found.size() >= ef && c.sim < found.top().sim) break;
    frontier.pop();
    for (Node nb : links_[c.node][static_cast<std::size_t>(level)]) {
      if (visited[nb]) continue;
      visited[nb] = 1;
      const float s = sim(q, nb);
      if (found.size() < ef || s > found.top().sim) {
        frontier.push({s, nb});
        found.push({s, nb});
        if (found.size() > ef) found.pop();
      }
    }
  }
  std::vector<Candidate> out;
  out.reserve(found.size());
  while (!found.empty()) {
    out.push_back(found.top());
    found.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<HnswIndex::Node> HnswIndex::select_neighbors(std::vector<Candidate> candidates,
                                                         std::size_t max_links) const {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.sim > b.sim; });
  std::vector<Node> kept;
  std::vector<Node> pruned;
  for (const auto& c : candidates) {
    if (kept.size() >= max_links) break;
    bool diverse = true;
    for (Node s : kept) {
      if (dot(matrix_->row(c.node), matrix_->row(s)) > c.sim) {
        diverse = false;
        break;
      }
    }
    (diverse ? kept : pruned).push_back(c.node);
  }
  // Backfill with pruned candidates so nodes keep their full degree.
  for (std::size_t i = 0; kept.size() < max_links && i < pruned.size(); ++i) {
    kept.push_back(pruned[i]);
  }
  return kept;
}

void HnswIndex::insert(Node n, int level) {
  links_[n].resize(static_cast<std::size_t>(level) + 1);
  if (max_level_ < 0) {
    entry_ = n;
    max_level_ = level;
    return;
  }
  const auto q = matrix_->row(n);
  Node ep = entry_;
  for (int l = max_level_; l > level; --l) {
    bool moved = true;
    float best = sim(q, ep);
    while (moved) {
      moved = false;
      for (Node nb : links_[ep][static_cast<std::size_t>(l)]) {
        const float s = sim(q, nb);
        if (s > best) {
          best = s;
          ep = nb;
          moved = true;
        }
      }
    }
  }
  for (int l = std::min(level, max_level_); l >= 0; --l) {
    const auto lu = static_cast<std::size_t>(l);
    auto found = search_layer(q, ep, params_.ef_construction, l);
    const std::size_t cap = l == 0 ? 2 * params_.m : params_.m;
    links_[n][lu] = select_neighbors(found, params_.m);
    for (Node nb : links_[n][lu]) {
      auto& nb_links = links_[nb][lu];
      nb_links.push_back(n);
      if (nb_links.size() > cap) {
        std::vector<Candidate> cands;
        cands.reserve(nb_links.size());
        for (Node x : nb_links) cands.push_back({dot(matrix_->row(nb), matrix_->row(x)), x});
        nb_links = select_neighbors(std::move(cands), cap);
      }
    }
    ep = found.front().node;
  }
  if (level > max_level_) {
    entry_ = n;
    max_level_ = level;
  }
}

std::vector<SearchResult> HnswIndex::search(std::span<const float> query, std::size_t k) const {
  if (query.size() != matrix_->dim()) {
    throw IndexError("query dim " + std::to_string(query.size()) + " != index dim " +
                     std::to_string(matrix_->dim()));
  }
  if (k == 0 || max_level_ < 0) return {};
  Node ep = entry_;
  for (int l = max_level_; l > 0; --l) {
    bool moved = true;
    float best = sim(query, ep);
    while (moved) {
      moved = false;
      for (Node nb : links_[ep][static_cast<std::size_t>(l)]) {
        const float s = sim(query, nb);
        if (s > best) {
          best = s;
          ep = nb;
          moved = true;
        }
      }
    }
  }
  auto found = search_layer(query, ep, std::max(params_.ef_search, k), 0);
  std::vector<SearchResult> out;
  out.reserve(found.size());
  for (const auto& c : found) out.push_back({matrix_->para_id(c.node), c.sim});
  std::sort(out.begin(), out.end(), ranks_before);
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace hopforge
