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

#include <cstdint>
#include <memory>
#include <vector>

#include "hopforge/dense_index.h"

namespace hopforge {

struct HnswParams {
  std::size_t m = 16;                // max links per node above layer 0 (2m on layer 0)
  std::size_t ef_construction = 200;
  std::size_t ef_search = 128;       // raised to k when k is larger
  std::uint64_t seed = 42;
};

/// Hierarchical navigable small-world graph over inner-product similarity.
/// Approximate; results are re-sorted with the same tie-break as FlatIndex.
class HnswIndex : public VectorSearcher {
 public:
  HnswIndex(std::shared_ptr<const EmbeddingMatrix> matrix, HnswParams params = {});

  std::size_t dim() const override { return matrix_->dim(); }
  std::size_t size() const override { return matrix_->size(); }
  std::vector<SearchResult> search(std::span<const float> query, std::size_t k) const override;

  int max_level() const { return max_level_; }

 private:
  using Node = std::uint32_t;
  struct Candidate {
    float sim;
    Node node;
  };

  float sim(std::span<const float> q, Node n) const { return dot(q, matrix_->row(n)); }
  std::vector<Candidate> search_layer(std::span<const float> q, Node entry, std::size_t ef,
                                      int level) const;
  std::vector<Node> select_neighbors(std::vector<Candidate> candidates, std::size_t max_links) const;
  void insert(Node n, int level);

  std::shared_ptr<const EmbeddingMatrix> matrix_;
  HnswParams params_;
  std::vector<std::vector<std::vector<Node>>> links_;  // [node][level] -> neighbors
  Node entry_ = 0;
  int max_level_ = -1;
};

}  // namespace hopforge
