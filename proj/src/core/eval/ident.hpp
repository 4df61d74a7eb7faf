// Copyright 2026 The kbio Authors
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

#ifndef KBIO_CORE_EVAL_IDENT_HPP_
#define KBIO_CORE_EVAL_IDENT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/eval/auth.hpp"

namespace kbio {

// Enrolled identity in the identification background: up to 10 gallery
// embeddings plus pre-screening attributes.
struct GalleryProfile {
  std::string subject_id;
  std::vector<Embedding> gallery;
  std::map<std::string, std::string> attributes;
};

struct QuerySet {
  std::string subject_id;
  std::vector<Embedding> queries;
  std::map<std::string, std::string> attributes;
};

// Mean Euclidean distance over all gallery x query embedding pairs.
double ident_distance(const std::vector<Embedding>& gallery,
                      const std::vector<Embedding>& queries);

struct IdentReport {
  int background_size = 0;
  std::string prescreen_attribute;  // empty = none
  std::vector<std::pair<int, double>> rank_accuracy;  // (n, percent)
  bool ties_observed = false;
};

// Rank-n identification: each query set is ranked against the background by
// ident_distance (ascending, ties broken by subject id); accuracy at n is
// the fraction of query subjects whose true profile ranks within the top n.
// With pre-screening, background profiles whose attribute differs from the
// query subject's value are removed before ranking.
IdentReport rank_n_accuracy(const std::vector<GalleryProfile>& background,
                            const std::vector<QuerySet>& queries,
                            const std::vector<int>& ranks,
                            const std::string& prescreen_attribute = "");

// Standard protocol inputs: 10 gallery and 5 query sequences per subject.
struct IdentData {
  std::vector<GalleryProfile> background;
  std::vector<QuerySet> queries;
};
IdentData build_ident_data(const BatchEmbedder& embedder, const Dataset& test_set,
                           int sequence_len, int num_subjects, std::uint64_t seed,
                           int gallery_size = 10);

}  // namespace kbio

#endif  // KBIO_CORE_EVAL_IDENT_HPP_
