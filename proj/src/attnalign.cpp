#include "pronlex/attnalign.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <unordered_map>

#include "parallel.hpp"
#include "pronlex/error.hpp"
#include "text.hpp"

namespace pronlex {

AttentionMap::AttentionMap(std::string utterance_id, Pronunciation row_phones,
                           Pronunciation col_phones, std::vector<double> weights)
    : utterance_id_(std::move(utterance_id)),
      row_phones_(std::move(row_phones)),
      col_phones_(std::move(col_phones)),
      weights_(std::move(weights)) {
  if (weights_.size() != rows() * cols())
    throw Error(ErrorKind::DimensionMismatch,
                utterance_id_ + ": " + std::to_string(weights_.size()) + " weights for " +
                    std::to_string(rows()) + "x" + std::to_string(cols()));
  for (const double w : weights_) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorKind::NegativeWeight, utterance_id_ + ": " + std::to_string(w));
  }
}

void AttnConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "threshold must lie in [0, 1]");
  if (per_boundary_cap == 0)
    throw Error(ErrorKind::InvalidConfig, "per-boundary candidate cap must be >= 1");
}

bool Segmentation::has_empty_span(std::size_t length) const {
  if (cuts.empty()) return length == 0;
  std::size_t prev = 0;
  for (const auto c : cuts) {
    if (c == prev) return true;
    prev = c;
  }
  return prev == length;
}

std::vector<WordSpan> spans_from_cuts(std::span<const std::size_t> cuts,
                                      const SegmentedUtterance& ref_seg,
                                      std::size_t length) {
  std::vector<WordSpan> spans;
  spans.reserve(ref_seg.words.size());
  std::size_t begin = 0;
  for (std::size_t w = 0; w < ref_seg.words.size(); ++w) {
    const std::size_t end = w < cuts.size() ? cuts[w] : length;
    spans.push_back({ref_seg.words[w].word, begin, end});
    begin = end;
  }
  return spans;
}

// ---------------------------------------------------------------------------
// File format

namespace {

bool parse_size(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

Pronunciation read_axis(std::string_view line, std::size_t expected, const PhoneInventory& inv,
                        const std::string& utt, std::size_t line_no, const char* axis) {
  const auto toks = text::tokens(line);
  if (toks.size() != expected)
    throw Error(ErrorKind::DimensionMismatch,
                utt + ": " + std::to_string(toks.size()) + " " + axis + " phones, header says " +
                    std::to_string(expected),
                line_no);
  Pronunciation out;
  for (const auto t : toks) {
    if (!inv.contains(t))
      throw Error(ErrorKind::UnknownPhone, std::string(t) + " (" + utt + ")", line_no);
    out.emplace_back(t);
  }
  return out;
}

}  // namespace

std::vector<AttentionMap> parse_attention_file(std::string_view text,
                                               const PhoneInventory& inv) {
  std::vector<AttentionMap> maps;
  std::set<std::string, std::less<>> seen;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;

    const auto header = text::tokens(line);
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (header.size() != 3 || !parse_size(header[1], rows) || !parse_size(header[2], cols))
      throw Error(ErrorKind::MalformedLine, "expected 'utt_id R C', got '" + std::string(line) + "'",
                  cursor.line_no());
    std::string utt(header[0]);
    if (!seen.insert(utt).second)
      throw Error(ErrorKind::DuplicateUtteranceId, utt, cursor.line_no());

    auto next_line = [&](const char* what) {
      if (!cursor.next(line))
        throw Error(ErrorKind::DimensionMismatch, utt + ": record ends before " + what,
                    cursor.line_no());
      return line;
    };
    auto row_phones = read_axis(next_line("row phones"), rows, inv, utt, cursor.line_no(), "row");
    auto col_phones =
        read_axis(next_line("column phones"), cols, inv, utt, cursor.line_no(), "column");

    std::vector<double> weights;
    weights.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto toks = text::tokens(next_line("all weight rows"));
      if (toks.size() != cols)
        throw Error(ErrorKind::DimensionMismatch,
                    utt + ": weight row " + std::to_string(r) + " has " +
                        std::to_string(toks.size()) + " values, expected " + std::to_string(cols),
                    cursor.line_no());
      for (const auto t : toks) {
        double w = 0.0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), w);
        if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(w))
          throw Error(ErrorKind::MalformedLine, utt + ": bad weight '" + std::string(t) + "'",
                      cursor.line_no());
        if (w < 0.0)
          throw Error(ErrorKind::NegativeWeight, utt + ": " + std::string(t), cursor.line_no());
        weights.push_back(w);
      }
    }
    if (cursor.next(line) && !text::is_blank(line))
      throw Error(ErrorKind::DimensionMismatch,
                  utt + ": more than " + std::to_string(rows) + " weight rows", cursor.line_no());
    maps.emplace_back(std::move(utt), std::move(row_phones), std::move(col_phones),
                      std::move(weights));
  }
  return maps;
}

std::string emit_attention_file(std::span<const AttentionMap> maps) {
  std::string out;
  char buf[64];
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const auto& map = maps[m];
    if (m != 0) out += '\n';
    out += map.utterance_id() + ' ' + std::to_string(map.rows()) + ' ' +
           std::to_string(map.cols()) + '\n';
    out += join_phones(map.row_phones()) + '\n';
    out += join_phones(map.col_phones()) + '\n';
    for (std::size_t r = 0; r < map.rows(); ++r) {
      for (std::size_t c = 0; c < map.cols(); ++c) {
        if (c != 0) out += ' ';
        const auto res = std::to_chars(buf, buf + sizeof(buf), map.at(r, c));
        out.append(buf, res.ptr);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<UtteranceCuts> parse_bounds_file(std::string_view text) {
  std::vector<UtteranceCuts> out;
  std::set<std::string, std::less<>> seen;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || text::has_whitespace(fields[0]))
      throw Error(ErrorKind::MalformedLine, "'" + std::string(line) + "'", cursor.line_no());
    UtteranceCuts u{std::string(fields[0]), {}};
    if (!seen.insert(u.utterance_id).second)
      throw Error(ErrorKind::DuplicateUtteranceId, u.utterance_id, cursor.line_no());
    for (const auto tok : text::tokens(fields[1])) {
      std::size_t c = 0;
      if (!parse_size(tok, c) || (!u.cuts.empty() && c < u.cuts.back()))
        throw Error(ErrorKind::MalformedLine, u.utterance_id + ": bad cut '" + std::string(tok) + "'",
                    cursor.line_no());
      u.cuts.push_back(c);
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::string emit_bounds_file(std::span<const UtteranceCuts> bounds) {
  std::string out;
  for (const auto& b : bounds) {
    out += b.utterance_id;
    out += '\t';
    for (std::size_t i = 0; i < b.cuts.size(); ++i) {
      if (i != 0) out += ' ';
      out += std::to_string(b.cuts[i]);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary placement and shift search

namespace {

// Forces raw cuts to be strictly increasing from 1 upward, then clamps them
// to the hypothesis length.
Segmentation repair(std::span<const std::int64_t> raw, std::size_t length) {
  Segmentation seg;
  seg.cuts.reserve(raw.size());
  std::int64_t prev = 0;
  for (const auto r : raw) {
    const std::int64_t v = r <= prev ? prev + 1 : r;
    const std::int64_t clamped = std::min<std::int64_t>(v, static_cast<std::int64_t>(length));
    if (clamped != r) ++seg.repaired;
    seg.cuts.push_back(static_cast<std::size_t>(clamped));
    prev = v;
  }
  return seg;
}

void check_rows(const AttentionMap& map, const SegmentedUtterance& ref_seg) {
  if (map.rows() != ref_seg.phone_count())
    throw Error(ErrorKind::RowMismatch,
                ref_seg.utterance_id + ": map has " + std::to_string(map.rows()) +
                    " rows, reference has " + std::to_string(ref_seg.phone_count()) + " phones");
  if (map.row_phones() != ref_seg.phones())
    throw Error(ErrorKind::RowMismatch,
                ref_seg.utterance_id + ": map rows do not spell the reference phones");
}

}  // namespace

Segmentation place_boundaries(const AttentionMap& map, const SegmentedUtterance& ref_seg,
                              const AttnConfig& cfg) {
  cfg.validate();
  check_rows(map, ref_seg);
  std::vector<std::int64_t> raw;
  std::size_t last_row = 0;
  for (std::size_t w = 0; w + 1 < ref_seg.words.size(); ++w) {
    last_row += ref_seg.words[w].phones.size();
    const auto weights = map.row(last_row - 1);
    // max_element returns the first maximum, i.e. the earliest column.
    const auto best = std::max_element(weights.begin(), weights.end());
    raw.push_back(weights.empty() ? 0 : (best - weights.begin()) + 1);
  }
  return repair(raw, map.cols());
}

std::vector<Segmentation> split_by_attention(const AttentionMap& map,
                                             const SegmentedUtterance& ref_seg,
                                             const AttnConfig& cfg) {
  const Segmentation base = place_boundaries(map, ref_seg, cfg);
  const auto radius = static_cast<std::int64_t>(cfg.shift_radius);
  const std::size_t k = base.cuts.size();

  std::vector<Segmentation> out;
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::int64_t> raw(k);
  auto try_offsets = [&](std::span<const std::int64_t> offsets) {
    std::size_t displacement = 0;
    for (std::size_t i = 0; i < k; ++i) {
      raw[i] = static_cast<std::int64_t>(base.cuts[i]) + offsets[i];
      displacement += static_cast<std::size_t>(std::abs(offsets[i]));
    }
    Segmentation seg = repair(raw, map.cols());
    seg.displacement = displacement;
    if (seen.insert(seg.cuts).second) out.push_back(std::move(seg));
  };

  if (cfg.mode == ShiftMode::GlobalShift) {
    std::vector<std::int64_t> offsets(k);
    for (std::int64_t s = -radius; s <= radius; ++s) {
      std::fill(offsets.begin(), offsets.end(), s);
      try_offsets(offsets);
    }
    return out;
  }

  // Per-boundary: the unshifted base first, then offset vectors in
  // lexicographic order until the cap or the enumeration is exhausted.
  std::vector<std::int64_t> offsets(k, 0);
  try_offsets(offsets);
  std::fill(offsets.begin(), offsets.end(), -radius);
  const std::size_t attempt_limit = cfg.per_boundary_cap * 100;
  for (std::size_t attempts = 0; out.size() < cfg.per_boundary_cap && attempts < attempt_limit;
       ++attempts) {
    try_offsets(offsets);
    std::size_t pos = k;
    while (pos > 0 && offsets[pos - 1] == radius) offsets[--pos] = -radius;
    if (pos == 0) break;
    ++offsets[pos - 1];
  }
  return out;
}

std::size_t edit_distance(std::span<const Phone> a, std::span<const Phone> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

BoundaryDecision align_word_boundaries(const AttentionMap& map,
                                       const SegmentedUtterance& ref_seg,
                                       const ReferenceDictionary* dict,
                                       const AttnConfig& cfg) {
  const auto candidates = split_by_attention(map, ref_seg, cfg);

  std::vector<std::vector<Pronunciation>> references;
  references.reserve(ref_seg.words.size());
  for (const auto& w : ref_seg.words) {
    if (dict != nullptr) {
      references.push_back(lookup_reference(w.word, *dict));
    } else {
      references.push_back({w.phones});
    }
  }

  const auto& hyp = map.col_phones();
  std::size_t best = 0;
  std::size_t best_total = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto spans = spans_from_cuts(candidates[c].cuts, ref_seg, hyp.size());
    std::size_t total = 0;
    for (std::size_t w = 0; w < spans.size(); ++w) {
      const std::span<const Phone> realized(hyp.data() + spans[w].begin, spans[w].size());
      std::size_t word_best = SIZE_MAX;
      for (const auto& pron : references[w])
        word_best = std::min(word_best, edit_distance(realized, pron));
      total += word_best;
    }
    const auto& cand = candidates[c];
    const auto& cur = candidates[best];
    if (c == 0 || total < best_total ||
        (total == best_total &&
         (cand.repaired < cur.repaired ||
          (cand.repaired == cur.repaired && cand.displacement < cur.displacement)))) {
      best = c;
      best_total = total;
    }
  }

  const double normalized =
      static_cast<double>(best_total) / static_cast<double>(ref_seg.phone_count());
  const Segmentation& chosen = candidates[best];
  if (normalized <= cfg.threshold)
    return Accepted{chosen, spans_from_cuts(chosen.cuts, ref_seg, hyp.size()), best_total,
                    normalized};
  return Rejected{chosen, best_total, normalized};
}

std::size_t AttentionBatchResult::accepted() const {
  return static_cast<std::size_t>(std::count_if(
      utterances.begin(), utterances.end(),
      [](const Utterance& u) { return std::holds_alternative<Accepted>(u.decision); }));
}

std::size_t AttentionBatchResult::rejected() const {
  return utterances.size() - accepted();
}

AttentionBatchResult align_attention_batch(std::span<const AttentionMap> maps,
                                           std::span<const SegmentedUtterance> refs,
                                           const ReferenceDictionary* dict,
                                           const AttnConfig& cfg, unsigned jobs) {
  cfg.validate();
  std::unordered_map<std::string_view, std::size_t> ref_index;
  for (std::size_t r = 0; r < refs.size(); ++r) ref_index.emplace(refs[r].utterance_id, r);
  std::vector<std::size_t> pairing(maps.size());
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const auto it = ref_index.find(maps[m].utterance_id());
    if (it == ref_index.end())
      throw Error(ErrorKind::MissingUtterance, maps[m].utterance_id() + " has no reference");
    pairing[m] = it->second;
  }

  AttentionBatchResult result;
  result.utterances.resize(maps.size());
  detail::parallel_for(maps.size(), jobs, [&](std::size_t m) {
    result.utterances[m] = {maps[m].utterance_id(),
                            align_word_boundaries(maps[m], refs[pairing[m]], dict, cfg)};
  });
  return result;
}

ExtractionResult accepted_variants(const AttentionBatchResult& batch,
                                   std::span<const AttentionMap> maps) {
  ExtractionResult out;
  out.utterances = batch.utterances.size();
  for (std::size_t u = 0; u < batch.utterances.size(); ++u) {
    const auto* acc = std::get_if<Accepted>(&batch.utterances[u].decision);
    if (acc == nullptr) continue;
    out.words += acc->spans.size();
    for (const auto& span : acc->spans) {
      if (span.empty()) {
        ++out.empty_spans;
        continue;
      }
      out.pairs.push_back({span.word, slice(maps[u].col_phones(), span)});
    }
  }
  return out;
}

}  // namespace pronlex
