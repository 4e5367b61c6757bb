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

// QA model input templates (UnifiedQA style). The separator is the literal
// two-character sequence backslash + 'n', preceded by a space:
//
//   open domain:          question \n
//   reading comprehension question \n context
//   multiple choice:      question \n (A) a (B) b
//   multiple choice + RC: question \n (A) a (B) b \n context
//
// Titled paragraphs render as "Title: Sentence 1. Sentence 2." and are joined
// with single spaces.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hopforge {

class QaFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::string_view kQaSeparator = " \\n";

struct QaOption {
  char label = 'A';
  std::string text;
  bool operator==(const QaOption&) const = default;
};

/// Labels options (A), (B), ... in order.
std::vector<QaOption> lettered_options(const std::vector<std::string>& texts);

/// Throws QaFormatError on duplicate option labels.
std::string render_qa_input(std::string_view question, const std::vector<QaOption>& options = {},
                            std::string_view context = {});

/// "Title: text", or just the text when the title is empty (withheld).
std::string render_titled(std::string_view title, std::string_view text);

enum class QaForm { kOpenDomain, kReadingComprehension, kMultipleChoice, kMultipleChoiceRc };

struct ParsedQaInput {
  QaForm form = QaForm::kOpenDomain;
  std::string question;
  std::vector<QaOption> options;
  std::string context;
};

/// Inverse of render_qa_input for consecutively lettered options.
ParsedQaInput parse_qa_input(std::string_view input);

}  // namespace hopforge
