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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hopforge::text {

std::string_view trim(std::string_view s);

/// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::size_t count_words(std::string_view s);

/// Whitespace tokenization in which every digit is its own token and any
/// punctuation character touching a digit is split off as well.
///   "12.5km" -> ["1", "2", ".", "5", "km"]
std::vector<std::string> digit_tokenize(std::string_view s);

/// Pluggable token counter used for sequence-length budgets.
using TokenCounter = std::function<std::size_t(std::string_view)>;

/// Counts digit_tokenize() tokens without materializing them.
std::size_t count_digit_tokens(std::string_view s);

TokenCounter default_token_counter();

bool is_ascii_punct(char c);

std::string to_lower(std::string_view s);

// Stable content hashing. The stub scorers are defined in terms of these, so
// any external reimplementation (e.g. a serving shim in stub mode) must use
// the same constants.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);
/// Uniform double in [0, 1) derived from (seed, index).
double unit_from_hash(std::uint64_t seed, std::uint64_t index);
/// Reproducible RNG seed for a record: fnv1a64(id + "#" + salt).
std::uint64_t seed_for(std::string_view id, std::string_view salt);

}  // namespace hopforge::text
