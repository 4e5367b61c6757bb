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
#include "hopforge/dense_index.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <thread>

#include "hopforge/text.h"
#include "json.hpp"

namespace hopforge {

static_assert(std::endian::native == std::endian::little,
              "vector files are little endian; big-endian hosts need byte swapping");

namespace {
constexpr char kMagic[4] = {'H', 'F', 'V', 'X'};
}  // namespace

bool ranks_before(const SearchResult& a, const SearchResult& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.para_id < b.para_id;
}

float dot(std::span<const float> a, std::span<const float> b) {
  float s = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw IndexError("embedding dim must be positive");
}

void EmbeddingMatrix::add(std::string para_id, std::span<const float> row) {
  if (row.size() != dim_) {
    throw IndexError("row for " + para_id + " has dim " + std::to_string(row.size()) +
                     ", index dim is " + std::to_string(dim_));
  }
  ids_.push_back(std::move(para_id));
  data_.insert(data_.end(), row.begin(), row.end());
}

std::filesystem::path ids_sidecar_path(const std::filesystem::path& vectors_path) {
  auto p = vectors_path;
  p += ".ids.jsonl";
  return p;
}

void EmbeddingMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IndexError("cannot write " + path.string());
  const auto dim32 = static_cast<std::uint32_t>(dim_);
  const auto count = static_cast<std::uint64_t>(ids_.size());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&dim32), sizeof dim32);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(float)));

  std::ofstream ids(ids_sidecar_path(path));
  if (!ids) throw IndexError("cannot write id sidecar for " + path.string());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    ids << nlohmann::json{{"row", i}, {"para_id", ids_[i]}}.dump() << '\n';
  }
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexError("cannot read " + path.string());
  char magic[4];
  std::uint32_t dim32 = 0;
  std::uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&dim32), sizeof dim32);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IndexError(path.string() + " is not a vector file");
  }
  EmbeddingMatrix m(dim32);
  m.data_.resize(static_cast<std::size_t>(count) * dim32);
  in.read(reinterpret_cast<char*>(m.data_.data()),
          static_cast<std::streamsize>(m.data_.size() * sizeof(float)));
  if (!in) throw IndexError(path.string() + " is truncated");

  std::ifstream ids(ids_sidecar_path(path));
  if (!ids) throw IndexError("missing id sidecar for " + path.string());
  m.ids_.resize(count);
  std::string line;
  std::size_t seen = 0;
  while (std::getline(ids, line)) {
    if (text::trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    auto row = j.at("row").get<std::size_t>();
    if (row >= count) throw IndexError("sidecar row out of range");
    m.ids_[row] = j.at("para_id").get<std::string>();
    ++seen;
  }
  if (seen != count) throw IndexError("sidecar row count disagrees with vector file");
  return m;
}

std::string embedding_text(const Paragraph& p) { return p.title + " | " + p.text; }

EmbeddingMatrix build_index(const CorpusStore& store, const Embedder& embedder,
                            std::size_t batch_size) {
  EmbeddingMatrix m(embedder.dim());
  const auto& paras = store.paragraphs();
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<std::string> batch;
  for (std::size_t start = 0; start < paras.size(); start += batch_size) {
    const std::size_t end = std::min(paras.size(), start + batch_size);
    batch.clear();
    for (std::size_t i = start; i < end; ++i) batch.push_back(embedding_text(paras[i]));
    auto rows = embedder.embed_batch(batch);
    if (rows.size() != batch.size()) throw IndexError("embedder returned wrong batch size");
    for (std::size_t i = start; i < end; ++i) m.add(paras[i].para_id, rows[i - start]);
  }
  spdlog::debug("embedded {} paragraphs at dim {}", m.size(), m.dim());
  return m;
}

std::vector<std::vector<SearchResult>> VectorSearcher::search_batch(
    const std::vector<std::vector<float>>& queries, std::size_t k, std::size_t threads) const {
  for (const auto& q : queries) {
    if (q.size() != dim()) throw IndexError("query dim disagrees with index dim");
  }
  std::vector<std::vector<SearchResult>> out(queries.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(queries.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < queries.size(); i = next++) out[i] = search(queries[i], k);
  };
  if (threads <= 1) {
    work();
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return out;
}

FlatIndex::FlatIndex(std::shared_ptr<const EmbeddingMatrix> matrix) : matrix_(std::move(matrix)) {
  if (!matrix_) throw IndexError("FlatIndex needs a matrix");
}

std::vector<SearchResult> FlatIndex::search(std::span<const float> query, std::size_t k) const {
  if (query.size() != matrix_->dim()) {
    throw IndexError("query dim " + std::to_string(query.size()) + " != index dim " +
                     std::to_string(matrix_->dim()));
  }
  const std::size_t n = matrix_->size();
  k = std::min(k, n);
  if (k == 0) return {};

  std::vector<float> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = dot(query, matrix_->row(i));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto before = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return matrix_->para_id(a) < matrix_->para_id(b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    before);
  std::vector<SearchResult> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back({matrix_->para_id(order[i]), scores[order[i]]});
  }
  return out;
}

}  // namespace hopforge
