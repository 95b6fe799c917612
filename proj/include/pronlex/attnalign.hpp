#pragma once

// Word-boundary placement from encoder-decoder attention maps, boundary-shift
// candidate generation and edit-distance selection of the best segmentation.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pronlex/phonecore.hpp"

namespace pronlex {

/// Attention weights between native reference phones (rows) and non-native
/// hypothesis phones (columns), stored row-major.
class AttentionMap {
 public:
  AttentionMap() = default;
  /// Throws DimensionMismatch or NegativeWeight (also for non-finite values).
  AttentionMap(std::string utterance_id, Pronunciation row_phones,
               Pronunciation col_phones, std::vector<double> weights);

  const std::string& utterance_id() const noexcept { return utterance_id_; }
  const Pronunciation& row_phones() const noexcept { return row_phones_; }
  const Pronunciation& col_phones() const noexcept { return col_phones_; }
  std::size_t rows() const noexcept { return row_phones_.size(); }
  std::size_t cols() const noexcept { return col_phones_.size(); }
  std::span<const double> row(std::size_t r) const {
    return {weights_.data() + r * cols(), cols()};
  }
  double at(std::size_t r, std::size_t c) const { return weights_[r * cols() + c]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  bool operator==(const AttentionMap&) const = default;

 private:
  std::string utterance_id_;
  Pronunciation row_phones_;
  Pronunciation col_phones_;
  std::vector<double> weights_;
};

enum class ShiftMode { GlobalShift, PerBoundary };

struct AttnConfig {
  /// Maximum boundary displacement in phones.
  std::size_t shift_radius = 3;
  ShiftMode mode = ShiftMode::GlobalShift;
  /// Largest accepted normalized edit distance, in [0, 1].
  double threshold = 0.5;
  /// Upper bound on distinct candidates in PerBoundary mode.
  std::size_t per_boundary_cap = 1000;

  void validate() const;
};

/// Cut positions into the hypothesis: cut k ends the span of word k. Cuts are
/// non-decreasing and at most the hypothesis length; equal cuts or a final
/// cut at the end mean empty spans.
struct Segmentation {
  std::vector<std::size_t> cuts;
  /// Cuts that had to be moved by monotonicity repair or clamping.
  std::size_t repaired = 0;
  /// Sum of absolute displacements applied to the base cuts.
  std::size_t displacement = 0;

  bool has_empty_span(std::size_t length) const;
};

/// Word spans induced by `cuts` over a hypothesis of `length` phones.
std::vector<WordSpan> spans_from_cuts(std::span<const std::size_t> cuts,
                                      const SegmentedUtterance& ref_seg,
                                      std::size_t length);

/// Cut positions for one utterance, as stored in boundary files.
struct UtteranceCuts {
  std::string utterance_id;
  std::vector<std::size_t> cuts;

  bool operator==(const UtteranceCuts&) const = default;
};

/// `utt_id<TAB>c1 c2 ...` per line; cuts must be non-decreasing.
std::vector<UtteranceCuts> parse_bounds_file(std::string_view text);
std::string emit_bounds_file(std::span<const UtteranceCuts> bounds);

/// Blank-line separated records: `utt_id R C`, R row phones, C column phones,
/// then R lines of C decimal weights.
std::vector<AttentionMap> parse_attention_file(std::string_view text,
                                               const PhoneInventory& inv);
std::string emit_attention_file(std::span<const AttentionMap> maps);

/// Places the cut after each non-final word at the column of maximum
/// attention for that word's last phone (earliest column on ties), then
/// repairs the cuts to be increasing and clamps them to the hypothesis
/// length. Throws RowMismatch when the map rows differ from the reference.
Segmentation place_boundaries(const AttentionMap& map, const SegmentedUtterance& ref_seg,
                              const AttnConfig& cfg = {});

/// Candidate segmentations around the attention-derived base, deduplicated in
/// generation order. GlobalShift displaces every cut by the same s in
/// [-n, n]; PerBoundary displaces each cut independently.
std::vector<Segmentation> split_by_attention(const AttentionMap& map,
                                             const SegmentedUtterance& ref_seg,
                                             const AttnConfig& cfg = {});

/// Unit-cost Levenshtein distance.
std::size_t edit_distance(std::span<const Phone> a, std::span<const Phone> b);

struct Accepted {
  Segmentation segmentation;
  std::vector<WordSpan> spans;
  std::size_t total_distance = 0;
  double distance = 0.0;
};

struct Rejected {
  Segmentation segmentation;
  std::size_t total_distance = 0;
  double best_distance = 0.0;
};

using BoundaryDecision = std::variant<Accepted, Rejected>;

/// Scores every candidate by the summed edit distance between each word span
/// and the closest dictionary pronunciation of that word, keeps the minimum
/// (ties: fewer repaired cuts, smaller displacement, earlier candidate) and
/// accepts it when distance / reference length <= threshold. Without a
/// dictionary the reference spans themselves are the pronunciations.
BoundaryDecision align_word_boundaries(const AttentionMap& map,
                                       const SegmentedUtterance& ref_seg,
                                       const ReferenceDictionary* dict,
                                       const AttnConfig& cfg = {});

struct AttentionBatchResult {
  struct Utterance {
    std::string utterance_id;
    BoundaryDecision decision;
  };
  std::vector<Utterance> utterances;

  std::size_t accepted() const;
  std::size_t rejected() const;
};

/// Runs align_word_boundaries for every map, pairing maps with references by
/// utterance id (MissingUtterance for a map without reference). Output
/// follows map order.
AttentionBatchResult align_attention_batch(std::span<const AttentionMap> maps,
                                           std::span<const SegmentedUtterance> refs,
                                           const ReferenceDictionary* dict,
                                           const AttnConfig& cfg = {}, unsigned jobs = 1);

/// Word/pronunciation pairs from accepted utterances, in map order. Empty
/// spans are counted but not emitted.
ExtractionResult accepted_variants(const AttentionBatchResult& batch,
                                   std::span<const AttentionMap> maps);

}  // namespace pronlex
