#pragma once

// Needleman-Wunsch global alignment of a hypothesis phone sequence against a
// native reference, and projection of the reference word boundaries through
// the alignment.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pronlex/phonecore.hpp"

namespace pronlex {

/// Costs are minimized. Defaults are unit Levenshtein costs.
struct AlignConfig {
  double match_score = 0.0;
  double mismatch_score = 1.0;
  double gap_penalty = 1.0;

  /// Throws InvalidConfig unless mismatch >= match and gap > 0.
  void validate() const;
};

enum class OpKind { Match, Substitute, Delete, Insert };

/// One alignment column. `hyp` is unset for Insert, `ref` is unset for Delete.
struct AlignOp {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  OpKind kind = OpKind::Match;
  std::size_t hyp = kNone;
  std::size_t ref = kNone;

  bool operator==(const AlignOp&) const = default;
};

struct Alignment {
  std::vector<AlignOp> ops;
  double total_cost = 0.0;

  bool operator==(const Alignment&) const = default;
};

double op_cost(const AlignOp& op, const AlignConfig& cfg) noexcept;

/// Cost of the optimal global alignment without building the op list.
double alignment_cost(std::span<const Phone> hyp, std::span<const Phone> ref,
                      const AlignConfig& cfg = {});

/// Minimum-cost global alignment. Backtracking from the bottom-right cell
/// prefers the diagonal, then Delete (hyp phone against a gap), then Insert.
Alignment nw_align(std::span<const Phone> hyp, std::span<const Phone> ref,
                   const AlignConfig& cfg = {});

/// Same, additionally checking that every phone belongs to `inv`
/// (InventoryMismatch otherwise).
Alignment nw_align(std::span<const Phone> hyp, std::span<const Phone> ref,
                   const AlignConfig& cfg, const PhoneInventory& inv);

/// Carves the hypothesis into one span per reference word. Hypothesis phones
/// opposite a gap go to the word of the next aligned reference phone, or to
/// the last word at the end of the utterance. Spans partition the hypothesis
/// and may be empty. Throws AlignmentReferenceMismatch when the alignment does
/// not cover exactly `hyp_length` hypothesis and `ref_seg` reference phones.
std::vector<WordSpan> project_boundaries(const Alignment& al,
                                         const SegmentedUtterance& ref_seg,
                                         std::size_t hyp_length);

/// For each word of `ref_seg`, chooses among its dictionary pronunciations the
/// one with the lowest alignment cost against the hypothesis phones first
/// projected onto that word (ties go to the file-first pronunciation), and
/// returns the utterance rebuilt from those choices. Throws OutOfVocabulary.
SegmentedUtterance choose_reference(std::span<const Phone> hyp,
                                    const SegmentedUtterance& ref_seg,
                                    const ReferenceDictionary& dict,
                                    const AlignConfig& cfg);

/// Aligns every hypothesis with its reference (paired by utterance id),
/// projects the word boundaries and emits one pair per non-empty word span,
/// in hypothesis order. Throws MissingUtterance when a hypothesis has no
/// reference; references without a hypothesis are ignored.
/// `jobs` > 1 spreads utterances over worker threads without changing output.
ExtractionResult extract_variants_dp(std::span<const PhoneSequence> hyps,
                                     std::span<const SegmentedUtterance> refs,
                                     const ReferenceDictionary& dict,
                                     const AlignConfig& cfg = {},
                                     unsigned jobs = 1);

}  // namespace pronlex
