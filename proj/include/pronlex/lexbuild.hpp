#pragma once

// Counted multi-pronunciation lexicons: accumulation, union, pruning and size
// statistics.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "pronlex/phonecore.hpp"

namespace pronlex {

/// Counts each (word, pronunciation) occurrence. Throws EmptyPronunciation.
Lexicon accumulate(std::span<const VariantPair> pairs);

/// Union of variant sets; counts of shared variants are summed.
Lexicon merge(const Lexicon& a, const Lexicon& b);

/// Every dictionary pronunciation as an entry with count 0.
Lexicon lexicon_from_dictionary(const ReferenceDictionary& dict);

inline constexpr std::size_t kUnlimitedVariants = std::numeric_limits<std::size_t>::max();

/// Drops variants seen fewer than `min_count` times, then keeps the best
/// `max_variants` per word ranked by count (descending) and pronunciation
/// string. Pronunciations listed in `canonical` are never dropped and take
/// their slots first. Throws InvalidConfig when max_variants is 0.
Lexicon prune(const Lexicon& lex, std::uint64_t min_count, std::size_t max_variants,
              const ReferenceDictionary* canonical = nullptr);

/// Number of (word, pronunciation) entries present in both lexicons.
std::size_t shared_entries(const Lexicon& a, const Lexicon& b);

/// |A| + |B| - |A u B|, the overlap implied by three entry counts.
std::int64_t shared_from_sizes(std::size_t a, std::size_t b, std::size_t merged);

struct LexiconStats {
  std::size_t words = 0;
  std::size_t entries = 0;
  double mean_variants = 0.0;
  std::size_t max_variants = 0;

  bool has_baseline = false;
  std::size_t baseline_entries = 0;
  std::size_t shared_with_baseline = 0;
  /// Unset when the baseline is empty.
  std::optional<double> size_ratio;
  std::optional<double> reduction_pct;
};

LexiconStats stats(const Lexicon& lex, const Lexicon* baseline = nullptr);

/// `key<TAB>value` lines.
std::string format_stats_tsv(const LexiconStats& s);
/// Human-readable report with aligned columns.
std::string format_stats_text(const LexiconStats& s);

}  // namespace pronlex
