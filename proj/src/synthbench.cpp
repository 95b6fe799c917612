#include "pronlex/synthbench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "pronlex/error.hpp"
#include "text.hpp"

namespace pronlex {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Draws are built from raw 64-bit outputs so corpora are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  /// Uniform in [-k, k].
  std::int64_t offset(std::size_t k) {
    return static_cast<std::int64_t>(below(2 * k + 1)) - static_cast<std::int64_t>(k);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::vector<ConfusionRule> parse_rules(std::string_view text, const PhoneInventory& inv) {
  std::vector<ConfusionRule> rules;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 3)
      throw Error(ErrorKind::MalformedLine, "'" + std::string(line) + "'", cursor.line_no());
    for (const auto f : {fields[0], fields[1]}) {
      if (!inv.contains(f))
        throw Error(ErrorKind::UnknownPhone, std::string(f) + " (rule)", cursor.line_no());
    }
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), p);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size() || fields[2].empty())
      throw Error(ErrorKind::MalformedLine, "bad probability '" + std::string(fields[2]) + "'",
                  cursor.line_no());
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorKind::InvalidConfig, "probability outside [0, 1]", cursor.line_no());
    if (fields[0] == fields[1])
      throw Error(ErrorKind::InvalidConfig, "rule maps " + std::string(fields[0]) + " to itself",
                  cursor.line_no());
    rules.push_back({std::string(fields[0]), std::string(fields[1]), p});
  }
  return rules;
}

std::string emit_rules(std::span<const ConfusionRule> rules) {
  std::string out;
  char buf[64];
  for (const auto& r : rules) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), r.probability);
    out += r.source + '\t' + r.target + '\t' + std::string(buf, res.ptr) + '\n';
  }
  return out;
}

std::vector<ConfusionRule> default_rules(double p) {
  return {{"Z", "S", p}, {"V", "B", p}, {"TH", "S", p}, {"TH", "T", p}};
}

Corruption corrupt(const SegmentedUtterance& seg, std::span<const ConfusionRule> rules,
                   std::uint64_t seed, const CorruptOptions& options) {
  Rng rng(seed);
  Corruption out;
  out.hyp.utterance_id = seg.utterance_id;
  std::size_t ref_pos = 0;
  for (std::size_t w = 0; w < seg.words.size(); ++w) {
    for (const auto& phone : seg.words[w].phones) {
      const std::size_t pos = ref_pos++;
      if (options.delete_prob > 0.0 && rng.uniform() < options.delete_prob) {
        out.log.push_back({EditKind::Delete, w, pos, phone, {}});
        continue;
      }
      Phone realized = phone;
      for (const auto& rule : rules) {
        if (rule.source != phone) continue;
        if (rng.uniform() < rule.probability) {
          realized = rule.target;
          out.log.push_back({EditKind::Substitute, w, pos, phone, rule.target});
          break;
        }
      }
      out.hyp.phones.push_back(std::move(realized));
      if (options.insert_prob > 0.0 && rng.uniform() < options.insert_prob) {
        out.hyp.phones.push_back(options.insert_phone);
        out.log.push_back({EditKind::Insert, w, pos, {}, options.insert_phone});
      }
    }
    if (w + 1 < seg.words.size()) out.truth_cuts.push_back(out.hyp.phones.size());
  }
  return out;
}

namespace {

double oracle_rec(std::span<const Phone> a, std::span<const Phone> b, std::size_t i,
                  std::size_t j, const AlignConfig& cfg) {
  if (i == a.size() && j == b.size()) return 0.0;
  double best = INFINITY;
  if (i < a.size() && j < b.size()) {
    const double step = a[i] == b[j] ? cfg.match_score : cfg.mismatch_score;
    best = std::min(best, step + oracle_rec(a, b, i + 1, j + 1, cfg));
  }
  if (i < a.size()) best = std::min(best, cfg.gap_penalty + oracle_rec(a, b, i + 1, j, cfg));
  if (j < b.size()) best = std::min(best, cfg.gap_penalty + oracle_rec(a, b, i, j + 1, cfg));
  return best;
}

}  // namespace

double oracle_align(std::span<const Phone> a, std::span<const Phone> b, const AlignConfig& cfg) {
  if (a.size() + b.size() > 14)
    throw Error(ErrorKind::SizeBound, std::to_string(a.size() + b.size()) + " phones > 14");
  cfg.validate();
  return oracle_rec(a, b, 0, 0, cfg);
}

double BoundaryScore::precision() const {
  return predicted == 0 ? (truth == 0 ? 1.0 : 0.0)
                        : static_cast<double>(correct) / static_cast<double>(predicted);
}

double BoundaryScore::recall() const {
  return truth == 0 ? (predicted == 0 ? 1.0 : 0.0)
                    : static_cast<double>(correct) / static_cast<double>(truth);
}

double BoundaryScore::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

BoundaryScore& BoundaryScore::operator+=(const BoundaryScore& other) {
  correct += other.correct;
  predicted += other.predicted;
  truth += other.truth;
  return *this;
}

BoundaryScore boundary_f1(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
  BoundaryScore s;
  s.predicted = pred.size();
  s.truth = truth.size();
  // Both lists are sorted; equal cuts (empty spans) are matched one-to-one.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pred.size() && j < truth.size()) {
    if (pred[i] == truth[j]) {
      ++s.correct;
      ++i;
      ++j;
    } else if (pred[i] < truth[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double RecoveryReport::precision() const {
  return built_variants == 0 ? 1.0
                             : static_cast<double>(built_correct) /
                                   static_cast<double>(built_variants);
}

double RecoveryReport::recall() const {
  return truth_variants == 0 ? 1.0
                             : static_cast<double>(recovered) / static_cast<double>(truth_variants);
}

RecoveryReport recovery_report(const Lexicon& built, const Lexicon& truth,
                               const ReferenceDictionary* canonical) {
  auto is_canonical = [&](const std::string& word, const Pronunciation& pron) {
    return canonical != nullptr && canonical->contains(word, pron);
  };
  RecoveryReport r;
  for (const auto& [word, variants] : truth.entries()) {
    for (const auto& entry : variants) {
      if (is_canonical(word, entry.first)) continue;
      ++r.truth_variants;
      if (built.contains(word, entry.first)) ++r.recovered;
    }
  }
  for (const auto& [word, variants] : built.entries()) {
    for (const auto& entry : variants) {
      if (is_canonical(word, entry.first)) continue;
      ++r.built_variants;
      if (truth.contains(word, entry.first)) ++r.built_correct;
    }
  }
  return r;
}

namespace {

AttentionMap peaked_attention(std::string utterance_id, Pronunciation rows, Pronunciation cols,
                              std::size_t k, Rng* rng) {
  const std::size_t r_count = rows.size();
  const std::size_t c_count = cols.size();
  std::vector<double> weights(r_count * c_count, 0.0);
  for (std::size_t r = 0; r < std::min(r_count, c_count); ++r) {
    auto c = static_cast<std::int64_t>(r);
    if (rng != nullptr) c += rng->offset(k);
    c = std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(c_count) - 1);
    weights[r * c_count + static_cast<std::size_t>(c)] = 1.0;
  }
  return AttentionMap(std::move(utterance_id), std::move(rows), std::move(cols),
                      std::move(weights));
}

}  // namespace

AttentionMap identity_attention(std::string utterance_id, Pronunciation rows,
                                Pronunciation cols) {
  return peaked_attention(std::move(utterance_id), std::move(rows), std::move(cols), 0, nullptr);
}

AttentionMap jittered_attention(std::string utterance_id, Pronunciation rows,
                                Pronunciation cols, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  return peaked_attention(std::move(utterance_id), std::move(rows), std::move(cols), k, &rng);
}

SynthCorpus generate_corpus(const ReferenceDictionary& dict, std::span<const ConfusionRule> rules,
                            const SynthConfig& cfg) {
  if (dict.word_count() == 0) throw Error(ErrorKind::InvalidConfig, "empty dictionary");
  if (cfg.words_per_utterance == 0)
    throw Error(ErrorKind::InvalidConfig, "words per utterance must be >= 1");
  std::vector<const std::pair<const std::string, std::vector<Pronunciation>>*> vocab;
  for (const auto& entry : dict.entries()) vocab.push_back(&entry);

  const int width = std::max<int>(
      4, static_cast<int>(std::to_string(cfg.utterances == 0 ? 0 : cfg.utterances - 1).size()));
  SynthCorpus corpus;
  for (std::size_t u = 0; u < cfg.utterances; ++u) {
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(u));
    char id[32];
    std::snprintf(id, sizeof(id), "utt%0*zu", width, u);

    SegmentedUtterance ref{id, {}};
    for (std::size_t w = 0; w < cfg.words_per_utterance; ++w) {
      const auto* entry = vocab[rng.below(vocab.size())];
      ref.words.push_back({entry->first, entry->second.front()});
    }
    const std::uint64_t corrupt_seed = rng.bits();
    const std::uint64_t attn_seed = rng.bits();
    auto c = corrupt(ref, rules, corrupt_seed, cfg.corrupt);

    const auto spans = spans_from_cuts(c.truth_cuts, ref, c.hyp.phones.size());
    for (const auto& span : spans) {
      if (!span.empty()) corpus.truth.add(span.word, slice(c.hyp.phones, span));
    }
    if (cfg.attention == SynthAttention::Jitter && cfg.jitter > 0) {
      corpus.maps.push_back(
          jittered_attention(id, ref.phones(), c.hyp.phones, cfg.jitter, attn_seed));
    } else {
      corpus.maps.push_back(identity_attention(id, ref.phones(), c.hyp.phones));
    }
    corpus.truth_bounds.push_back({id, std::move(c.truth_cuts)});
    corpus.hyps.push_back(std::move(c.hyp));
    corpus.refs.push_back(std::move(ref));
  }
  return corpus;
}

}  // namespace pronlex
