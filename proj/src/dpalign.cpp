#include "pronlex/dpalign.hpp"

#include <algorithm>
#include <unordered_map>

#include "parallel.hpp"
#include "pronlex/error.hpp"

namespace pronlex {

void AlignConfig::validate() const {
  if (!(mismatch_score >= match_score))
    throw Error(ErrorKind::InvalidConfig, "mismatch cost must be >= match cost");
  if (!(gap_penalty > 0.0)) throw Error(ErrorKind::InvalidConfig, "gap penalty must be > 0");
}

double op_cost(const AlignOp& op, const AlignConfig& cfg) noexcept {
  switch (op.kind) {
    case OpKind::Match: return cfg.match_score;
    case OpKind::Substitute: return cfg.mismatch_score;
    case OpKind::Delete:
    case OpKind::Insert: return cfg.gap_penalty;
  }
  return 0.0;
}

namespace {

// Row-major (n+1) x (m+1) cost matrix.
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t rows, std::size_t cols)
      : cols_(cols), cells_(rows * cols, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }

 private:
  std::size_t cols_;
  std::vector<double> cells_;
};

ScoreMatrix fill(std::span<const Phone> hyp, std::span<const Phone> ref,
                 const AlignConfig& cfg) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  ScoreMatrix score(n + 1, m + 1);
  for (std::size_t i = 1; i <= n; ++i) score.at(i, 0) = score.at(i - 1, 0) + cfg.gap_penalty;
  for (std::size_t j = 1; j <= m; ++j) score.at(0, j) = score.at(0, j - 1) + cfg.gap_penalty;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = score.at(i - 1, j - 1) +
                          (hyp[i - 1] == ref[j - 1] ? cfg.match_score : cfg.mismatch_score);
      const double del = score.at(i - 1, j) + cfg.gap_penalty;
      const double ins = score.at(i, j - 1) + cfg.gap_penalty;
      score.at(i, j) = std::min({diag, del, ins});
    }
  }
  return score;
}

}  // namespace

double alignment_cost(std::span<const Phone> hyp, std::span<const Phone> ref,
                      const AlignConfig& cfg) {
  cfg.validate();
  std::vector<double> prev(ref.size() + 1), cur(ref.size() + 1);
  for (std::size_t j = 1; j <= ref.size(); ++j) prev[j] = prev[j - 1] + cfg.gap_penalty;
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    cur[0] = prev[0] + cfg.gap_penalty;
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      const double diag =
          prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? cfg.match_score : cfg.mismatch_score);
      cur[j] = std::min({diag, prev[j] + cfg.gap_penalty, cur[j - 1] + cfg.gap_penalty});
    }
    std::swap(prev, cur);
  }
  return prev[ref.size()];
}

Alignment nw_align(std::span<const Phone> hyp, std::span<const Phone> ref,
                   const AlignConfig& cfg) {
  cfg.validate();
  const ScoreMatrix score = fill(hyp, ref, cfg);

  Alignment al;
  al.total_cost = score.at(hyp.size(), ref.size());
  std::size_t i = hyp.size();
  std::size_t j = ref.size();
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = hyp[i - 1] == ref[j - 1];
      const double diag =
          score.at(i - 1, j - 1) + (same ? cfg.match_score : cfg.mismatch_score);
      if (score.at(i, j) == diag) {
        al.ops.push_back({same ? OpKind::Match : OpKind::Substitute, i - 1, j - 1});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && score.at(i, j) == score.at(i - 1, j) + cfg.gap_penalty) {
      al.ops.push_back({OpKind::Delete, i - 1, AlignOp::kNone});
      --i;
      continue;
    }
    al.ops.push_back({OpKind::Insert, AlignOp::kNone, j - 1});
    --j;
  }
  std::reverse(al.ops.begin(), al.ops.end());
  return al;
}

Alignment nw_align(std::span<const Phone> hyp, std::span<const Phone> ref,
                   const AlignConfig& cfg, const PhoneInventory& inv) {
  for (const auto seq : {hyp, ref}) {
    for (const auto& p : seq) {
      if (!inv.contains(p)) throw Error(ErrorKind::InventoryMismatch, p);
    }
  }
  return nw_align(hyp, ref, cfg);
}

std::vector<WordSpan> project_boundaries(const Alignment& al,
                                         const SegmentedUtterance& ref_seg,
                                         std::size_t hyp_length) {
  std::vector<std::size_t> word_of_ref;
  for (std::size_t w = 0; w < ref_seg.words.size(); ++w)
    word_of_ref.insert(word_of_ref.end(), ref_seg.words[w].phones.size(), w);

  // Indices on each side must run 0, 1, 2, ... without gaps.
  std::size_t next_hyp = 0;
  std::size_t next_ref = 0;
  bool monotone = true;
  for (const auto& op : al.ops) {
    if (op.hyp != AlignOp::kNone) monotone = monotone && op.hyp == next_hyp++;
    if (op.ref != AlignOp::kNone) monotone = monotone && op.ref == next_ref++;
  }
  if (!monotone || next_hyp != hyp_length || next_ref != word_of_ref.size())
    throw Error(ErrorKind::AlignmentReferenceMismatch,
                ref_seg.utterance_id + ": alignment covers " + std::to_string(next_hyp) +
                    " hyp / " + std::to_string(next_ref) + " ref phones, expected " +
                    std::to_string(hyp_length) + " / " +
                    std::to_string(word_of_ref.size()));
  if (ref_seg.words.empty()) {
    if (hyp_length != 0)
      throw Error(ErrorKind::AlignmentReferenceMismatch,
                  ref_seg.utterance_id + ": no reference words");
    return {};
  }

  // Number of hypothesis phones assigned to each word. Assignments are
  // monotone in the word index, so the counts define contiguous spans.
  std::vector<std::size_t> counts(ref_seg.words.size(), 0);
  std::size_t pending = 0;
  for (const auto& op : al.ops) {
    if (op.ref == AlignOp::kNone) {
      ++pending;
      continue;
    }
    const std::size_t w = word_of_ref[op.ref];
    counts[w] += pending + (op.hyp != AlignOp::kNone ? 1 : 0);
    pending = 0;
  }
  counts.back() += pending;

  std::vector<WordSpan> spans;
  spans.reserve(counts.size());
  std::size_t begin = 0;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    spans.push_back({ref_seg.words[w].word, begin, begin + counts[w]});
    begin += counts[w];
  }
  return spans;
}

SegmentedUtterance choose_reference(std::span<const Phone> hyp,
                                    const SegmentedUtterance& ref_seg,
                                    const ReferenceDictionary& dict,
                                    const AlignConfig& cfg) {
  SegmentedUtterance chosen{ref_seg.utterance_id, {}};
  std::vector<const std::vector<Pronunciation>*> candidates;
  bool ambiguous = false;
  for (const auto& w : ref_seg.words) {
    candidates.push_back(&lookup_reference(w.word, dict));
    ambiguous = ambiguous || candidates.back()->size() > 1;
  }
  if (!ambiguous) {
    for (std::size_t w = 0; w < candidates.size(); ++w)
      chosen.words.push_back({ref_seg.words[w].word, candidates[w]->front()});
    return chosen;
  }

  const auto ref_phones = ref_seg.phones();
  const auto spans = project_boundaries(nw_align(hyp, ref_phones, cfg), ref_seg, hyp.size());
  for (std::size_t w = 0; w < candidates.size(); ++w) {
    const auto span_phones = slice(hyp, spans[w]);
    const Pronunciation* best = nullptr;
    double best_cost = 0.0;
    for (const auto& pron : *candidates[w]) {
      const double c = alignment_cost(span_phones, pron, cfg);
      if (best == nullptr || c < best_cost) {
        best = &pron;
        best_cost = c;
      }
    }
    chosen.words.push_back({ref_seg.words[w].word, *best});
  }
  return chosen;
}

ExtractionResult extract_variants_dp(std::span<const PhoneSequence> hyps,
                                     std::span<const SegmentedUtterance> refs,
                                     const ReferenceDictionary& dict,
                                     const AlignConfig& cfg, unsigned jobs) {
  cfg.validate();
  std::unordered_map<std::string_view, std::size_t> ref_index;
  for (std::size_t r = 0; r < refs.size(); ++r) ref_index.emplace(refs[r].utterance_id, r);

  std::vector<std::size_t> pairing(hyps.size());
  for (std::size_t h = 0; h < hyps.size(); ++h) {
    const auto it = ref_index.find(hyps[h].utterance_id);
    if (it == ref_index.end())
      throw Error(ErrorKind::MissingUtterance, hyps[h].utterance_id + " has no reference");
    pairing[h] = it->second;
  }

  struct PerUtterance {
    std::vector<VariantPair> pairs;
    std::size_t words = 0;
    std::size_t empty = 0;
  };
  std::vector<PerUtterance> results(hyps.size());
  detail::parallel_for(hyps.size(), jobs, [&](std::size_t h) {
    const auto& hyp = hyps[h].phones;
    const auto ref = choose_reference(hyp, refs[pairing[h]], dict, cfg);
    const auto spans = project_boundaries(nw_align(hyp, ref.phones(), cfg), ref, hyp.size());
    auto& out = results[h];
    out.words = spans.size();
    for (const auto& span : spans) {
      if (span.empty()) {
        ++out.empty;
        continue;
      }
      out.pairs.push_back({span.word, slice(hyp, span)});
    }
  });

  ExtractionResult result;
  result.utterances = hyps.size();
  for (auto& r : results) {
    result.words += r.words;
    result.empty_spans += r.empty;
    std::move(r.pairs.begin(), r.pairs.end(), std::back_inserter(result.pairs));
  }
  return result;
}

}  // namespace pronlex
