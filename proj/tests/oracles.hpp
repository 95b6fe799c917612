#pragma once

// Brute-force reference implementations used only by tests. None of these
// share code with the library paths they check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pronlex/dpalign.hpp"
#include "pronlex/phonecore.hpp"

namespace oracle {

using pronlex::AlignOp;
using pronlex::OpKind;
using pronlex::Phone;
using pronlex::Pronunciation;

struct ScoredAlignment {
  std::vector<AlignOp> ops;
  double cost = 0.0;
};

/// Every global alignment of a against b with its cost.
inline void enumerate_rec(const Pronunciation& a, const Pronunciation& b, std::size_t i,
                          std::size_t j, const pronlex::AlignConfig& cfg,
                          ScoredAlignment& cur, std::vector<ScoredAlignment>& out) {
  if (i == a.size() && j == b.size()) {
    out.push_back(cur);
    return;
  }
  auto step = [&](AlignOp op, double c, std::size_t ni, std::size_t nj) {
    cur.ops.push_back(op);
    cur.cost += c;
    enumerate_rec(a, b, ni, nj, cfg, cur, out);
    cur.cost -= c;
    cur.ops.pop_back();
  };
  if (i < a.size() && j < b.size()) {
    const bool same = a[i] == b[j];
    step({same ? OpKind::Match : OpKind::Substitute, i, j},
         same ? cfg.match_score : cfg.mismatch_score, i + 1, j + 1);
  }
  if (i < a.size()) step({OpKind::Delete, i, AlignOp::kNone}, cfg.gap_penalty, i + 1, j);
  if (j < b.size()) step({OpKind::Insert, AlignOp::kNone, j}, cfg.gap_penalty, i, j + 1);
}

inline std::vector<ScoredAlignment> all_alignments(const Pronunciation& a, const Pronunciation& b,
                                                   const pronlex::AlignConfig& cfg = {}) {
  std::vector<ScoredAlignment> out;
  ScoredAlignment cur;
  enumerate_rec(a, b, 0, 0, cfg, cur, out);
  return out;
}

inline double min_cost(const std::vector<ScoredAlignment>& all) {
  double best = all.front().cost;
  for (const auto& s : all) best = std::min(best, s.cost);
  return best;
}

/// Plain recursive Levenshtein distance (exponential; keep inputs short).
inline std::size_t levenshtein(const Pronunciation& a, const Pronunciation& b, std::size_t i = 0,
                               std::size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  if (a[i] == b[j]) return levenshtein(a, b, i + 1, j + 1);
  return 1 + std::min({levenshtein(a, b, i + 1, j + 1), levenshtein(a, b, i + 1, j),
                       levenshtein(a, b, i, j + 1)});
}

inline Pronunciation random_sequence(std::mt19937_64& rng, std::size_t max_len,
                                     const std::vector<Phone>& alphabet) {
  const std::size_t len = rng() % (max_len + 1);
  Pronunciation out;
  for (std::size_t k = 0; k < len; ++k) out.push_back(alphabet[rng() % alphabet.size()]);
  return out;
}

}  // namespace oracle
