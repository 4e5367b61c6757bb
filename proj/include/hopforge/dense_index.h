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
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopforge/corpus_store.h"
#include "hopforge/scorers.h"

namespace hopforge {

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchResult {
  std::string para_id;
  float score = 0.0f;  // inner product
  bool operator==(const SearchResult&) const = default;
};

/// Descending score, ties by ascending para_id.
bool ranks_before(const SearchResult& a, const SearchResult& b);

/// Row-major float32 matrix with one row per paragraph.
class EmbeddingMatrix {
 public:
  explicit EmbeddingMatrix(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  void add(std::string para_id, std::span<const float> row);
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::string& para_id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& para_ids() const { return ids_; }
  std::span<const float> data() const { return data_; }

  /// File layout: "HFVX", u32 dim, u64 count, then count*dim float32 (little
  /// endian). Row ids go to a sidecar `<path>.ids.jsonl` ({"row", "para_id"}).
  void save(const std::filesystem::path& path) const;
  static EmbeddingMatrix load(const std::filesystem::path& path);

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
};

std::filesystem::path ids_sidecar_path(const std::filesystem::path& vectors_path);

/// Text handed to the embedder for a paragraph: "title | text".
std::string embedding_text(const Paragraph& p);

/// Embeds every paragraph of the store in corpus order.
EmbeddingMatrix build_index(const CorpusStore& store, const Embedder& embedder,
                            std::size_t batch_size = 64);

/// Top-k maximum inner product search. Implementations are immutable after
/// construction and safe to query concurrently.
class VectorSearcher {
 public:
  virtual ~VectorSearcher() = default;
  virtual std::size_t dim() const = 0;
  virtual std::size_t size() const = 0;
  /// k == 0 yields an empty list; throws IndexError on a dim mismatch.
  virtual std::vector<SearchResult> search(std::span<const float> query, std::size_t k) const = 0;

  /// Runs queries on up to `threads` workers (0 = hardware concurrency).
  std::vector<std::vector<SearchResult>> search_batch(
      const std::vector<std::vector<float>>& queries, std::size_t k,
      std::size_t threads = 0) const;
};

/// Exhaustive inner-product search.
class FlatIndex : public VectorSearcher {
 public:
  explicit FlatIndex(std::shared_ptr<const EmbeddingMatrix> matrix);
  std::size_t dim() const override { return matrix_->dim(); }
  std::size_t size() const override { return matrix_->size(); }
  std::vector<SearchResult> search(std::span<const float> query, std::size_t k) const override;

 private:
  std::shared_ptr<const EmbeddingMatrix> matrix_;
};

float dot(std::span<const float> a, std::span<const float> b);

}  // namespace hopforge
