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
#include <string>
#include <vector>

namespace hopforge {

struct FusionConfig {
  double w = 0.5;  // weight on the paragraph score
};

/// w * p + (1 - w) * s_p. Throws std::invalid_argument if any input is outside [0, 1].
double fuse(double p, double s_p, double w);

struct ScoredParagraph {
  std::string para_id;
  double p = 0.0;
  std::vector<double> s_p;
};

struct RankedSentence {
  std::string para_id;
  std::size_t sent_idx = 0;
  double p = 0.0;
  double s_p = 0.0;
  double s = 0.0;  // fused

  bool operator==(const RankedSentence&) const = default;
};

struct RankedParagraph {
  std::string para_id;
  double p = 0.0;
  bool operator==(const RankedParagraph&) const = default;
};

struct RankedHop {
  std::vector<RankedSentence> sentences;    // fused score desc, then (para_id, sent_idx)
  std::vector<RankedParagraph> paragraphs;  // p desc, then para_id
};

RankedHop rank_hop(const std::vector<ScoredParagraph>& scored, const FusionConfig& config = {});

}  // namespace hopforge
