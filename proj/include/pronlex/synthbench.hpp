#pragma once

// Synthetic mispronunciation corpora, an exhaustive alignment oracle and the
// metrics used to score boundary and variant recovery.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pronlex/attnalign.hpp"
#include "pronlex/dpalign.hpp"
#include "pronlex/phonecore.hpp"

namespace pronlex {

/// Rewrites `source` as `target` with the given probability.
struct ConfusionRule {
  Phone source;
  Phone target;
  double probability = 1.0;

  bool operator==(const ConfusionRule&) const = default;
};

/// `SRC<TAB>DST<TAB>p` per line. Throws MalformedLine, UnknownPhone or
/// InvalidConfig (source equal to target, p outside [0, 1]).
std::vector<ConfusionRule> parse_rules(std::string_view text, const PhoneInventory& inv);
std::string emit_rules(std::span<const ConfusionRule> rules);

/// Devoicing and stopping patterns typical of Korean speakers of English:
/// Z->S, V->B, TH->S, TH->T, each with probability `p`.
std::vector<ConfusionRule> default_rules(double p = 0.5);

struct CorruptOptions {
  /// Probability of dropping each phone.
  double delete_prob = 0.0;
  /// Probability of inserting `insert_phone` after each phone.
  double insert_prob = 0.0;
  Phone insert_phone = "AH";
};

enum class EditKind { Substitute, Delete, Insert };

struct AppliedEdit {
  EditKind kind = EditKind::Substitute;
  std::size_t word = 0;
  /// Position in the reference phone sequence (for Insert: the phone before).
  std::size_t ref_position = 0;
  Phone from;
  Phone to;
};

struct Corruption {
  PhoneSequence hyp;
  /// Cut positions of the true word boundaries in `hyp`.
  std::vector<std::size_t> truth_cuts;
  std::vector<AppliedEdit> log;
};

/// Each phone is rewritten by the first matching rule whose draw fires, so a
/// later rule with the same source only applies when the earlier ones miss.
/// Deterministic in `seed`.
Corruption corrupt(const SegmentedUtterance& seg, std::span<const ConfusionRule> rules,
                   std::uint64_t seed, const CorruptOptions& options = {});

/// Exhaustive minimum over every global alignment, without sharing
/// subproblems. Throws SizeBound when |a| + |b| > 14.
double oracle_align(std::span<const Phone> a, std::span<const Phone> b,
                    const AlignConfig& cfg = {});

struct BoundaryScore {
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  BoundaryScore& operator+=(const BoundaryScore& other);
};

/// A predicted cut counts iff it equals a true cut. Both empty scores 1.
BoundaryScore boundary_f1(std::span<const std::size_t> pred, std::span<const std::size_t> truth);

struct RecoveryReport {
  std::size_t truth_variants = 0;
  std::size_t recovered = 0;
  std::size_t built_variants = 0;
  std::size_t built_correct = 0;

  double precision() const;
  double recall() const;
};

/// Recall over the non-canonical truth variants, precision over the
/// non-canonical built variants. Without a dictionary every variant counts.
RecoveryReport recovery_report(const Lexicon& built, const Lexicon& truth,
                               const ReferenceDictionary* canonical = nullptr);

/// Ones on the diagonal of the min(rows, cols) square, zeros elsewhere.
AttentionMap identity_attention(std::string utterance_id, Pronunciation rows,
                                Pronunciation cols);

/// Like identity_attention with each row's peak moved by a uniform offset in
/// [-k, k], clamped to the columns.
AttentionMap jittered_attention(std::string utterance_id, Pronunciation rows,
                                Pronunciation cols, std::size_t k, std::uint64_t seed);

enum class SynthAttention { Identity, Jitter };

struct SynthConfig {
  std::size_t words_per_utterance = 3;
  std::size_t utterances = 100;
  std::uint64_t seed = 1;
  SynthAttention attention = SynthAttention::Identity;
  std::size_t jitter = 0;
  CorruptOptions corrupt;
};

struct SynthCorpus {
  std::vector<PhoneSequence> hyps;
  std::vector<SegmentedUtterance> refs;
  std::vector<AttentionMap> maps;
  std::vector<UtteranceCuts> truth_bounds;
  /// Every non-empty realized (word, pronunciation) with its count.
  Lexicon truth;
};

/// Utterances of uniformly drawn dictionary words (first listed
/// pronunciation), corrupted with `rules`. Utterance i uses a generator
/// seeded from seed ^ i, so the corpus does not depend on generation order.
SynthCorpus generate_corpus(const ReferenceDictionary& dict, std::span<const ConfusionRule> rules,
                            const SynthConfig& cfg);

/// splitmix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace pronlex
