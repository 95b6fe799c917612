#include "pronlex/lexbuild.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "pronlex/error.hpp"

namespace pronlex {

Lexicon accumulate(std::span<const VariantPair> pairs) {
  Lexicon lex;
  for (const auto& p : pairs) lex.add(p.word, p.pron);
  return lex;
}

Lexicon merge(const Lexicon& a, const Lexicon& b) {
  Lexicon out = a;
  for (const auto& [word, variants] : b.entries()) {
    for (const auto& [pron, count] : variants) out.add(word, pron, count);
  }
  return out;
}

Lexicon lexicon_from_dictionary(const ReferenceDictionary& dict) {
  Lexicon lex;
  for (const auto& [word, prons] : dict.entries()) {
    for (const auto& pron : prons) lex.add(word, pron, 0);
  }
  return lex;
}

Lexicon prune(const Lexicon& lex, std::uint64_t min_count, std::size_t max_variants,
              const ReferenceDictionary* canonical) {
  if (max_variants == 0) throw Error(ErrorKind::InvalidConfig, "max_variants must be >= 1");

  struct Ranked {
    const Pronunciation* pron;
    std::uint64_t count;
    std::string key;
  };
  Lexicon out;
  std::vector<Ranked> ranked;
  for (const auto& [word, variants] : lex.entries()) {
    ranked.clear();
    std::size_t slots = max_variants;
    for (const auto& [pron, count] : variants) {
      if (canonical != nullptr && canonical->contains(word, pron)) {
        out.add(word, pron, count);
        if (slots > 0) --slots;
        continue;
      }
      if (count >= min_count) ranked.push_back({&pron, count, join_phones(pron)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
      if (x.count != y.count) return x.count > y.count;
      return x.key < y.key;
    });
    for (std::size_t i = 0; i < ranked.size() && i < slots; ++i)
      out.add(word, *ranked[i].pron, ranked[i].count);
  }
  return out;
}

std::size_t shared_entries(const Lexicon& a, const Lexicon& b) {
  const Lexicon& small = a.entry_count() <= b.entry_count() ? a : b;
  const Lexicon& large = &small == &a ? b : a;
  std::size_t shared = 0;
  for (const auto& [word, variants] : small.entries()) {
    const auto* other = large.find(word);
    if (other == nullptr) continue;
    for (const auto& entry : variants) shared += other->count(entry.first);
  }
  return shared;
}

std::int64_t shared_from_sizes(std::size_t a, std::size_t b, std::size_t merged) {
  return static_cast<std::int64_t>(a) + static_cast<std::int64_t>(b) -
         static_cast<std::int64_t>(merged);
}

LexiconStats stats(const Lexicon& lex, const Lexicon* baseline) {
  LexiconStats s;
  s.words = lex.word_count();
  s.entries = lex.entry_count();
  for (const auto& entry : lex.entries())
    s.max_variants = std::max(s.max_variants, entry.second.size());
  if (s.words != 0) s.mean_variants = static_cast<double>(s.entries) / static_cast<double>(s.words);
  if (baseline != nullptr) {
    s.has_baseline = true;
    s.baseline_entries = baseline->entry_count();
    s.shared_with_baseline = shared_entries(lex, *baseline);
    if (s.baseline_entries != 0) {
      s.size_ratio = static_cast<double>(s.entries) / static_cast<double>(s.baseline_entries);
      s.reduction_pct = 100.0 * (1.0 - *s.size_ratio);
    }
  }
  return s;
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> stat_fields(const LexiconStats& s) {
  std::vector<std::pair<std::string, std::string>> fields = {
      {"words", std::to_string(s.words)},
      {"entries", std::to_string(s.entries)},
      {"mean_variants", fixed(s.mean_variants, 4)},
      {"max_variants", std::to_string(s.max_variants)},
  };
  if (s.has_baseline) {
    fields.emplace_back("baseline_entries", std::to_string(s.baseline_entries));
    fields.emplace_back("shared_entries", std::to_string(s.shared_with_baseline));
    fields.emplace_back("size_ratio", s.size_ratio ? fixed(*s.size_ratio, 6) : "undefined");
    fields.emplace_back("reduction_pct",
                        s.reduction_pct ? fixed(*s.reduction_pct, 2) : "undefined");
  }
  return fields;
}

}  // namespace

std::string format_stats_tsv(const LexiconStats& s) {
  std::string out;
  for (const auto& [key, value] : stat_fields(s)) out += key + '\t' + value + '\n';
  return out;
}

std::string format_stats_text(const LexiconStats& s) {
  const auto fields = stat_fields(s);
  std::size_t width = 0;
  for (const auto& f : fields) width = std::max(width, f.first.size());
  std::string out;
  for (const auto& [key, value] : fields) {
    out += key;
    out.append(width + 2 - key.size(), ' ');
    out += value + '\n';
  }
  return out;
}

}  // namespace pronlex
