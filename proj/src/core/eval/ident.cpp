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

#include "core/eval/ident.hpp"

#include <algorithm>

#include "core/common.hpp"
#include "core/learn/losses.hpp"
#include "core/rng.hpp"

namespace kbio {

double ident_distance(const std::vector<Embedding>& gallery,
                      const std::vector<Embedding>& queries) {
  if (gallery.empty() || queries.empty()) {
    throw DataError("ident_distance: empty gallery or query set");
  }
  double sum = 0.0;
  for (const auto& g : gallery) {
    for (const auto& q : queries) sum += euclidean_distance(g, q);
  }
  return sum / (static_cast<double>(gallery.size()) * static_cast<double>(queries.size()));
}

IdentReport rank_n_accuracy(const std::vector<GalleryProfile>& background,
                            const std::vector<QuerySet>& queries,
                            const std::vector<int>& ranks,
                            const std::string& prescreen_attribute) {
  if (background.empty() || queries.empty()) {
    throw DataError("rank_n_accuracy: empty background or query list");
  }
  if (ranks.empty()) throw ConfigError("rank_n_accuracy: no ranks requested");
  for (const int n : ranks) {
    if (n < 1 || n > static_cast<int>(background.size())) {
      throw ConfigError("rank_n_accuracy: rank " + std::to_string(n) +
                        " outside 1.." + std::to_string(background.size()));
    }
  }

  IdentReport report;
  report.background_size = static_cast<int>(background.size());
  report.prescreen_attribute = prescreen_attribute;

  std::vector<int> true_ranks;
  true_ranks.reserve(queries.size());
  for (const auto& query : queries) {
    std::string screen_value;
    if (!prescreen_attribute.empty()) {
      const auto it = query.attributes.find(prescreen_attribute);
      if (it != query.attributes.end()) screen_value = it->second;
    }

    struct Entry {
      double distance;
      const std::string* subject;
    };
    std::vector<Entry> entries;
    bool found = false;
    for (const auto& profile : background) {
      if (!screen_value.empty()) {
        const auto it = profile.attributes.find(prescreen_attribute);
        // Keep only profiles matching the query subject's attribute value.
        if (it == profile.attributes.end() || it->second != screen_value) {
          if (profile.subject_id != query.subject_id) continue;
        }
      }
      entries.push_back({ident_distance(profile.gallery, query.queries), &profile.subject_id});
      if (profile.subject_id == query.subject_id) found = true;
    }
    if (!found) {
      throw DataError("rank_n_accuracy: query subject '" + query.subject_id +
                      "' missing from background");
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.distance != b.distance) return a.distance < b.distance;
      return *a.subject < *b.subject;
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].distance == entries[i - 1].distance) {
        report.ties_observed = true;
        break;
      }
    }
    int rank = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (*entries[i].subject == query.subject_id) {
        rank = static_cast<int>(i) + 1;
        break;
      }
    }
    true_ranks.push_back(rank);
  }

  for (const int n : ranks) {
    int hits = 0;
    for (const int rank : true_ranks) {
      if (rank <= n) ++hits;
    }
    report.rank_accuracy.emplace_back(
        n, 100.0 * static_cast<double>(hits) / static_cast<double>(true_ranks.size()));
  }
  return report;
}

IdentData build_ident_data(const BatchEmbedder& embedder, const Dataset& test_set,
                           int sequence_len, int num_subjects, std::uint64_t seed,
                           int gallery_size) {
  if (gallery_size < 1) throw ConfigError("ident protocol: gallery size must be >= 1");
  auto splits = protocol_splits(test_set, gallery_size);
  if (static_cast<int>(splits.size()) < num_subjects) {
    throw DataError("ident protocol: need " + std::to_string(num_subjects) +
                    " subjects with at least " +
                    std::to_string(gallery_size + kNumQueries) + " sequences, found " +
                    std::to_string(splits.size()));
  }
  Rng rng(derive_seed(seed, SeedPurpose::kIdentProtocol));
  rng.shuffle(splits);
  splits.resize(static_cast<std::size_t>(num_subjects));
  std::sort(splits.begin(), splits.end(),
            [](const SubjectSplit& a, const SubjectSplit& b) {
              return a.subject_id < b.subject_id;
            });

  std::vector<FeatureSequence> padded;
  std::vector<std::vector<std::size_t>> gallery_rows(splits.size());
  std::vector<std::vector<std::size_t>> query_rows(splits.size());
  for (std::size_t s = 0; s < splits.size(); ++s) {
    for (int g = 0; g < gallery_size; ++g) {
      gallery_rows[s].push_back(padded.size());
      padded.push_back(pad_or_truncate(
          extract_features(test_set[splits[s].gallery[static_cast<std::size_t>(g)]]),
          sequence_len));
    }
    for (const std::size_t q : splits[s].queries) {
      query_rows[s].push_back(padded.size());
      padded.push_back(pad_or_truncate(extract_features(test_set[q]), sequence_len));
    }
  }
  const auto embeddings = embedder(padded);
  if (embeddings.size() != padded.size()) {
    throw DataError("ident protocol: embedder returned wrong count");
  }

  IdentData data;
  for (std::size_t s = 0; s < splits.size(); ++s) {
    GalleryProfile profile;
    profile.subject_id = splits[s].subject_id;
    profile.attributes = test_set[splits[s].gallery.front()].attributes;
    for (const std::size_t row : gallery_rows[s]) profile.gallery.push_back(embeddings[row]);
    data.background.push_back(std::move(profile));

    QuerySet query;
    query.subject_id = splits[s].subject_id;
    query.attributes = test_set[splits[s].queries.front()].attributes;
    for (const std::size_t row : query_rows[s]) query.queries.push_back(embeddings[row]);
    data.queries.push_back(std::move(query));
  }
  return data;
}

}  // namespace kbio
