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
#include "hopforge/text.h"

#include <cctype>

namespace hopforge::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Calls emit(begin, end) for each digit-tokenized piece of one whitespace chunk.
template <typename Emit>
void tokenize_chunk(std::string_view chunk, Emit&& emit) {
  std::size_t word_start = std::string_view::npos;
  auto flush = [&](std::size_t upto) {
    if (word_start != std::string_view::npos) {
      emit(word_start, upto);
      word_start = std::string_view::npos;
    }
  };
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    char c = chunk[i];
    if (is_digit(c)) {
      flush(i);
      emit(i, i + 1);
      continue;
    }
    bool touches_digit = (i > 0 && is_digit(chunk[i - 1])) ||
                         (i + 1 < chunk.size() && is_digit(chunk[i + 1]));
    if (is_ascii_punct(c) && touches_digit) {
      flush(i);
      emit(i, i + 1);
      continue;
    }
    if (word_start == std::string_view::npos) word_start = i;
  }
  flush(chunk.size());
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::size_t count_words(std::string_view s) { return split_whitespace(s).size(); }

std::vector<std::string> digit_tokenize(std::string_view s) {
  std::vector<std::string> out;
  for (auto chunk : split_whitespace(s)) {
    tokenize_chunk(chunk, [&](std::size_t b, std::size_t e) {
      out.emplace_back(chunk.substr(b, e - b));
    });
  }
  return out;
}

std::size_t count_digit_tokens(std::string_view s) {
  std::size_t n = 0;
  for (auto chunk : split_whitespace(s)) {
    tokenize_chunk(chunk, [&](std::size_t, std::size_t) { ++n; });
  }
  return n;
}

TokenCounter default_token_counter() { return count_digit_tokens; }

bool is_ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_from_hash(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = splitmix64(seed ^ splitmix64(index));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::uint64_t seed_for(std::string_view id, std::string_view salt) {
  std::string key(id);
  key += '#';
  key += salt;
  return fnv1a64(key);
}

}  // namespace hopforge::text
