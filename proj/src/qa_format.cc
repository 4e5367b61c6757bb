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
#include "hopforge/qa_format.h"

#include <set>

namespace hopforge {

namespace {

std::string option_marker(char label) { return std::string("(") + label + ") "; }

std::vector<QaOption> parse_options(std::string_view s) {
  std::vector<QaOption> out;
  char label = 'A';
  if (!s.starts_with(option_marker(label))) throw QaFormatError("options must start with (A)");
  std::size_t pos = 3 + 1;
  while (true) {
    const std::string next = " " + option_marker(static_cast<char>(label + 1));
    auto end = s.find(next, pos);
    if (end == std::string_view::npos) {
      out.push_back({label, std::string(s.substr(pos))});
      return out;
    }
    out.push_back({label, std::string(s.substr(pos, end - pos))});
    pos = end + next.size();
    ++label;
  }
}

}  // namespace

std::vector<QaOption> lettered_options(const std::vector<std::string>& texts) {
  if (texts.size() > 26) throw QaFormatError("at most 26 options are supported");
  std::vector<QaOption> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({static_cast<char>('A' + i), texts[i]});
  }
  return out;
}

std::string render_qa_input(std::string_view question, const std::vector<QaOption>& options,
                            std::string_view context) {
  std::string out(question);
  out += kQaSeparator;
  if (!options.empty()) {
    std::set<char> labels;
    for (const auto& o : options) {
      if (!labels.insert(o.label).second) {
        throw QaFormatError(std::string("duplicate option label ") + o.label);
      }
      out += ' ';
      out += option_marker(o.label);
      out += o.text;
    }
    if (!context.empty()) out += kQaSeparator;
  }
  if (!context.empty()) {
    out += ' ';
    out += context;
  }
  return out;
}

std::string render_titled(std::string_view title, std::string_view text) {
  if (title.empty()) return std::string(text);
  std::string out(title);
  out += ": ";
  out += text;
  return out;
}

ParsedQaInput parse_qa_input(std::string_view input) {
  auto sep = input.find(kQaSeparator);
  if (sep == std::string_view::npos) throw QaFormatError("QA input lacks the \\n separator");
  ParsedQaInput out;
  out.question = std::string(input.substr(0, sep));
  auto rest = input.substr(sep + kQaSeparator.size());
  if (rest.empty()) {
    out.form = QaForm::kOpenDomain;
    return out;
  }
  if (rest.front() != ' ') throw QaFormatError("separator must be followed by a space");
  rest.remove_prefix(1);
  if (rest.empty()) throw QaFormatError("empty context after separator");
  if (rest.starts_with(option_marker('A'))) {
    auto second = rest.find(std::string(kQaSeparator) + " ");
    if (second == std::string_view::npos) {
      out.form = QaForm::kMultipleChoice;
      out.options = parse_options(rest);
    } else {
      out.form = QaForm::kMultipleChoiceRc;
      out.options = parse_options(rest.substr(0, second));
      out.context = std::string(rest.substr(second + kQaSeparator.size() + 1));
    }
    return out;
  }
  out.form = QaForm::kReadingComprehension;
  out.context = std::string(rest);
  return out;
}

}  // namespace hopforge
