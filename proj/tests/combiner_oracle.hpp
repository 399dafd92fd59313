/* Copyright 2026 The layerens Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Independent reference for the vote rule plus the randomized properties it
// must satisfy. Shared by the unit tests and the acceptance runner.

#ifndef LAYERENS_TESTS_COMBINER_ORACLE_HPP_
#define LAYERENS_TESTS_COMBINER_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "layerens/combiner.hpp"

namespace layerens::testing {

// Counts every label's support from scratch; a label supported by more than
// half of the voters wins carrying its supporters' highest confidence,
// otherwise the single most confident voter wins (first one on ties).
inline Vote brute_force_vote(const std::vector<Vote>& votes) {
  const std::size_t n = votes.size();
  for (const Vote& candidate : votes) {
    std::size_t support = 0;
    double best = -1.0;
    for (const Vote& v : votes) {
      if (v.label == candidate.label) {
        ++support;
        if (v.confidence > best) best = v.confidence;
      }
    }
    if (2 * support > n) return Vote{candidate.label, best};
  }
  std::size_t winner = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (votes[i].confidence > votes[winner].confidence) winner = i;
  }
  return votes[winner];
}

struct OracleSummary {
  std::uint64_t cases = 0;
  std::uint64_t mismatches = 0;
  std::string first_mismatch;
};

// Every vote list with 1..max_voters voters, labels from 1..max_labels
// classes and confidences in {0.1, ..., 0.9}.
inline OracleSummary run_exhaustive_oracle(std::size_t max_voters = 4, std::size_t max_labels = 3) {
  OracleSummary summary;
  const double grid[9] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<Vote> votes;
  for (std::size_t c = 1; c <= max_labels; ++c) {
    for (std::size_t n = 1; n <= max_voters; ++n) {
      std::uint64_t label_codes = 1, conf_codes = 1;
      for (std::size_t i = 0; i < n; ++i) {
        label_codes *= c;
        conf_codes *= 9;
      }
      votes.assign(n, Vote{});
      for (std::uint64_t lc = 0; lc < label_codes; ++lc) {
        std::uint64_t x = lc;
        for (std::size_t i = 0; i < n; ++i, x /= c) votes[i].label = LabelId{static_cast<std::uint32_t>(x % c)};
        for (std::uint64_t cc = 0; cc < conf_codes; ++cc) {
          std::uint64_t y = cc;
          for (std::size_t i = 0; i < n; ++i, y /= 9) votes[i].confidence = grid[y % 9];
          ++summary.cases;
          const Vote expected = brute_force_vote(votes);
          const Vote got = majority_vote_with_confidence(votes);
          if (!(expected == got)) {
            if (summary.mismatches == 0) {
              summary.first_mismatch = "n=" + std::to_string(n) + " C=" + std::to_string(c) +
                                       " labels=" + std::to_string(lc) + " conf=" + std::to_string(cc);
            }
            ++summary.mismatches;
          }
        }
      }
    }
  }
  return summary;
}

struct PropertyResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
};

namespace internal_oracle {

inline std::vector<Vote> random_votes(std::mt19937_64& rng, std::size_t n, std::uint32_t labels) {
  std::vector<Vote> votes(n);
  for (auto& v : votes) {
    v.label = LabelId{static_cast<std::uint32_t>(rng() % labels)};
    v.confidence = static_cast<double>(rng() % 1001) / 1000.0;
  }
  return votes;
}

// Confidences k / 1000 with k distinct.
inline void make_distinct(std::mt19937_64& rng, std::vector<Vote>& votes) {
  std::vector<int> pool(1001);
  for (int k = 0; k <= 1000; ++k) pool[k] = k;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
    votes[i].confidence = pool[i] / 1000.0;
  }
}

}  // namespace internal_oracle

// Randomized property checks, `cases` draws each, deterministic in `seed`.
inline std::vector<PropertyResult> run_combiner_properties(std::uint64_t seed,
                                                            std::uint64_t cases) {
  using internal_oracle::make_distinct;
  using internal_oracle::random_votes;
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  {
    PropertyResult r{"unanimity"};
    for (std::uint64_t t = 0; t < cases; ++t, ++r.cases) {
      auto votes = random_votes(rng, 1 + rng() % 9, 5);
      const LabelId label{static_cast<std::uint32_t>(rng() % 5)};
      double best = 0;
      for (auto& v : votes) {
        v.label = label;
        best = std::max(best, v.confidence);
      }
      const Vote got = majority_vote_with_confidence(votes);
      if (got.label != label || got.confidence != best) ++r.failures;
    }
    out.push_back(r);
  }
  {
    PropertyResult r{"majority_dominance"};
    for (std::uint64_t t = 0; t < cases; ++t, ++r.cases) {
      const std::size_t n = 1 + rng() % 9;
      const std::size_t majority = n / 2 + 1;
      auto votes = random_votes(rng, n, 4);
      const LabelId winner{7};
      for (std::size_t i = 0; i < n; ++i) {
        if (i < majority) {
          votes[i].label = winner;
          votes[i].confidence = static_cast<double>(rng() % 100) / 1000.0;  // < 0.1
        } else {
          votes[i].confidence = 1.0;
        }
      }
      std::shuffle(votes.begin(), votes.end(), rng);
      if (majority_vote_with_confidence(votes).label != winner) ++r.failures;
    }
    out.push_back(r);
  }
  {
    PropertyResult r{"singleton_identity"};
    for (std::uint64_t t = 0; t < cases; ++t, ++r.cases) {
      const auto votes = random_votes(rng, 1, 1000);
      if (!(majority_vote_with_confidence(votes) == votes[0])) ++r.failures;
    }
    out.push_back(r);
  }
  {
    PropertyResult r{"permutation_invariance"};
    for (std::uint64_t t = 0; t < cases; ++t) {
      const std::size_t n = 1 + rng() % 9;
      auto votes = random_votes(rng, n, 1 + rng() % 4);
      make_distinct(rng, votes);
      // Skip exact n/2 support ties, which the rule resolves by position.
      bool half_tie = false;
      for (const auto& v : votes) {
        std::size_t s = 0;
        for (const auto& w : votes) s += w.label == v.label;
        if (2 * s == n) half_tie = true;
      }
      if (half_tie) continue;
      ++r.cases;
      const Vote before = majority_vote_with_confidence(votes);
      std::shuffle(votes.begin(), votes.end(), rng);
      if (!(majority_vote_with_confidence(votes) == before)) ++r.failures;
    }
    out.push_back(r);
  }
  {
    PropertyResult r{"monotone_transform_invariance"};
    const auto transforms = std::vector<double (*)(double)>{
        [](double x) { return x * x; }, [](double x) { return std::sqrt(x); },
        [](double x) { return 0.05 + 0.9 * x; }, [](double x) { return x * x * x; }};
    for (std::uint64_t t = 0; t < cases; ++t, ++r.cases) {
      auto votes = random_votes(rng, 1 + rng() % 9, 1 + rng() % 4);
      make_distinct(rng, votes);
      const auto f = transforms[rng() % transforms.size()];
      auto mapped = votes;
      for (auto& v : mapped) v.confidence = f(v.confidence);
      if (majority_vote_with_confidence(mapped).label != majority_vote_with_confidence(votes).label) {
        ++r.failures;
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace layerens::testing

#endif  // LAYERENS_TESTS_COMBINER_ORACLE_HPP_
