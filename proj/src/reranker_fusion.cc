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
#include "hopforge/reranker_fusion.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hopforge {

namespace {
void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " +
                                std::to_string(v));
  }
}
}  // namespace

double fuse(double p, double s_p, double w) {
  require_unit(p, "p");
  require_unit(s_p, "s_p");
  require_unit(w, "w");
  return w * p + (1.0 - w) * s_p;
}

RankedHop rank_hop(const std::vector<ScoredParagraph>& scored, const FusionConfig& config) {
  RankedHop hop;
  for (const auto& para : scored) {
    hop.paragraphs.push_back({para.para_id, para.p});
    for (std::size_t i = 0; i < para.s_p.size(); ++i) {
      hop.sentences.push_back(
          {para.para_id, i, para.p, para.s_p[i], fuse(para.p, para.s_p[i], config.w)});
    }
  }
  std::sort(hop.sentences.begin(), hop.sentences.end(),
            [](const RankedSentence& a, const RankedSentence& b) {
              if (a.s != b.s) return a.s > b.s;
              if (a.para_id != b.para_id) return a.para_id < b.para_id;
              return a.sent_idx < b.sent_idx;
            });
  std::sort(hop.paragraphs.begin(), hop.paragraphs.end(),
            [](const RankedParagraph& a, const RankedParagraph& b) {
              if (a.p != b.p) return a.p > b.p;
              return a.para_id < b.para_id;
            });
  return hop;
}

}  // namespace hopforge
