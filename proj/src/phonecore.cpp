#include "pronlex/phonecore.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "pronlex/error.hpp"
#include "text.hpp"

namespace pronlex {

bool contains_reserved_char(std::string_view symbol) noexcept {
  return symbol.find_first_of("#|") != std::string_view::npos;
}

bool is_valid_phone_symbol(std::string_view symbol) noexcept {
  if (symbol.empty() || contains_reserved_char(symbol)) return false;
  return std::all_of(symbol.begin(), symbol.end(),
                     [](char c) { return c > 0x20 && c < 0x7f; });
}

PhoneInventory PhoneInventory::open() {
  PhoneInventory inv;
  inv.open_ = true;
  return inv;
}

void PhoneInventory::add(std::string symbol, PhoneOrigin origin,
                         std::size_t line) {
  if (contains_reserved_char(symbol))
    throw Error(ErrorKind::ReservedSymbol, symbol, line);
  if (!is_valid_phone_symbol(symbol))
    throw Error(ErrorKind::MalformedLine, "bad phone symbol '" + symbol + "'", line);
  if (index_.count(symbol) != 0) throw Error(ErrorKind::DuplicatePhone, symbol, line);
  index_.emplace(symbol, symbols_.size());
  symbols_.push_back(std::move(symbol));
  origins_.push_back(origin);
}

bool PhoneInventory::contains(std::string_view symbol) const {
  if (index_.find(std::string(symbol)) != index_.end()) return true;
  return open_ && is_valid_phone_symbol(symbol);
}

std::optional<PhoneOrigin> PhoneInventory::origin(std::string_view symbol) const {
  const auto it = index_.find(std::string(symbol));
  if (it == index_.end()) {
    if (open_ && is_valid_phone_symbol(symbol)) return PhoneOrigin::EN;
    return std::nullopt;
  }
  return origins_[it->second];
}

std::size_t PhoneInventory::count(PhoneOrigin origin) const noexcept {
  return static_cast<std::size_t>(std::count(origins_.begin(), origins_.end(), origin));
}

Pronunciation SegmentedUtterance::phones() const {
  Pronunciation out;
  out.reserve(phone_count());
  for (const auto& w : words) out.insert(out.end(), w.phones.begin(), w.phones.end());
  return out;
}

std::size_t SegmentedUtterance::phone_count() const noexcept {
  std::size_t n = 0;
  for (const auto& w : words) n += w.phones.size();
  return n;
}

Pronunciation slice(std::span<const Phone> phones, const WordSpan& span) {
  return Pronunciation(phones.begin() + static_cast<std::ptrdiff_t>(span.begin),
                       phones.begin() + static_cast<std::ptrdiff_t>(span.end));
}

void ReferenceDictionary::add(const std::string& word, Pronunciation pron) {
  auto& prons = entries_[word];
  if (std::find(prons.begin(), prons.end(), pron) == prons.end())
    prons.push_back(std::move(pron));
}

const std::vector<Pronunciation>* ReferenceDictionary::find(std::string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool ReferenceDictionary::contains(std::string_view word, const Pronunciation& pron) const {
  const auto* prons = find(word);
  return prons != nullptr && std::find(prons->begin(), prons->end(), pron) != prons->end();
}

const std::vector<Pronunciation>& lookup_reference(std::string_view word,
                                                   const ReferenceDictionary& dict) {
  const auto* prons = dict.find(word);
  if (prons == nullptr || prons->empty())
    throw Error(ErrorKind::OutOfVocabulary, std::string(word));
  return *prons;
}

void Lexicon::add(const std::string& word, const Pronunciation& pron,
                  std::uint64_t count) {
  if (pron.empty()) throw Error(ErrorKind::EmptyPronunciation, word);
  auto& variants = entries_[word];
  auto [it, inserted] = variants.try_emplace(pron, 0);
  it->second += count;
  if (inserted) ++entry_count_;
}

void Lexicon::erase(const std::string& word, const Pronunciation& pron) {
  const auto it = entries_.find(word);
  if (it == entries_.end()) return;
  if (it->second.erase(pron) != 0) --entry_count_;
  if (it->second.empty()) entries_.erase(it);
}

const Lexicon::Variants* Lexicon::find(std::string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::contains(std::string_view word, const Pronunciation& pron) const {
  const auto* v = find(word);
  return v != nullptr && v->count(pron) != 0;
}

std::uint64_t Lexicon::count(std::string_view word, const Pronunciation& pron) const {
  const auto* v = find(word);
  if (v == nullptr) return 0;
  const auto it = v->find(pron);
  return it == v->end() ? 0 : it->second;
}

std::string join_phones(std::span<const Phone> phones) {
  std::string out;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    if (i != 0) out += ' ';
    out += phones[i];
  }
  return out;
}

namespace {

std::string quoted_line(std::string_view line) {
  return "'" + std::string(line) + "'";
}

bool is_valid_token(std::string_view s) {
  return !s.empty() && !text::has_whitespace(s);
}

Pronunciation read_phones(std::string_view field, const PhoneInventory& inv,
                          std::string_view owner, std::size_t line) {
  Pronunciation out;
  for (const auto tok : text::tokens(field)) {
    if (!inv.contains(tok))
      throw Error(ErrorKind::UnknownPhone,
                  std::string(tok) + " (" + std::string(owner) + ")", line);
    out.emplace_back(tok);
  }
  return out;
}

}  // namespace

PhoneInventory parse_inventory(std::string_view text) {
  PhoneInventory inv;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line) || line.front() == '#') continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() > 2 || text::has_whitespace(fields[0]))
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    PhoneOrigin origin = PhoneOrigin::EN;
    if (fields.size() == 2) {
      if (fields[1] == "EN") {
        origin = PhoneOrigin::EN;
      } else if (fields[1] == "L1") {
        origin = PhoneOrigin::L1;
      } else {
        throw Error(ErrorKind::BadOrigin, std::string(fields[1]), cursor.line_no());
      }
    }
    inv.add(std::string(fields[0]), origin, cursor.line_no());
  }
  return inv;
}

std::vector<PhoneSequence> parse_phone_file(std::string_view text,
                                            const PhoneInventory& inv) {
  std::vector<PhoneSequence> out;
  std::unordered_set<std::string> seen;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2 || !is_valid_token(fields[0]))
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    PhoneSequence seq;
    seq.utterance_id = std::string(fields[0]);
    if (!seen.insert(seq.utterance_id).second)
      throw Error(ErrorKind::DuplicateUtteranceId, seq.utterance_id, cursor.line_no());
    seq.phones = read_phones(fields[1], inv, seq.utterance_id, cursor.line_no());
    out.push_back(std::move(seq));
  }
  return out;
}

std::string emit_phone_file(std::span<const PhoneSequence> seqs) {
  std::string out;
  for (const auto& s : seqs) {
    out += s.utterance_id;
    out += '\t';
    out += join_phones(s.phones);
    out += '\n';
  }
  return out;
}

std::vector<SegmentedUtterance> parse_segmented_file(std::string_view text,
                                                     const PhoneInventory& inv) {
  std::vector<SegmentedUtterance> out;
  std::unordered_set<std::string> seen;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;
    const std::size_t line_no = cursor.line_no();
    const auto fields = text::split(line, '\t');
    if (fields.size() != 3 || !is_valid_token(fields[0]))
      throw Error(ErrorKind::MalformedLine, quoted_line(line), line_no);
    SegmentedUtterance utt;
    utt.utterance_id = std::string(fields[0]);
    if (!seen.insert(utt.utterance_id).second)
      throw Error(ErrorKind::DuplicateUtteranceId, utt.utterance_id, line_no);

    std::vector<Pronunciation> spans(1);
    for (const auto tok : text::tokens(fields[1])) {
      if (tok == kBoundaryToken) {
        spans.emplace_back();
        continue;
      }
      if (!inv.contains(tok))
        throw Error(ErrorKind::UnknownPhone,
                    std::string(tok) + " (" + utt.utterance_id + ")", line_no);
      spans.back().emplace_back(tok);
    }
    const auto words = text::tokens(fields[2]);
    if (spans.size() != words.size())
      throw Error(ErrorKind::SpanWordMismatch,
                  utt.utterance_id + ": " + std::to_string(spans.size()) +
                      " spans, " + std::to_string(words.size()) + " words",
                  line_no);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (spans[i].empty())
        throw Error(ErrorKind::EmptySpan,
                    utt.utterance_id + ": span " + std::to_string(i), line_no);
      utt.words.push_back({std::string(words[i]), std::move(spans[i])});
    }
    out.push_back(std::move(utt));
  }
  return out;
}

std::string emit_segmented_file(std::span<const SegmentedUtterance> utts) {
  std::string out;
  for (const auto& u : utts) {
    out += u.utterance_id;
    out += '\t';
    for (std::size_t i = 0; i < u.words.size(); ++i) {
      if (i != 0) out += " # ";
      out += join_phones(u.words[i].phones);
    }
    out += '\t';
    for (std::size_t i = 0; i < u.words.size(); ++i) {
      if (i != 0) out += ' ';
      out += u.words[i].word;
    }
    out += '\n';
  }
  return out;
}

ReferenceDictionary parse_dictionary(std::string_view text, const PhoneInventory& inv) {
  ReferenceDictionary dict;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2 || !is_valid_token(fields[0]))
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    auto pron = read_phones(fields[1], inv, fields[0], cursor.line_no());
    if (pron.empty())
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    dict.add(std::string(fields[0]), std::move(pron));
  }
  return dict;
}

Lexicon parse_lexicon(std::string_view text, const PhoneInventory& inv) {
  Lexicon lex;
  text::LineCursor cursor(text);
  std::string_view line;
  while (cursor.next(line)) {
    if (text::is_blank(line)) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 3 || !is_valid_token(fields[0]))
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    std::uint64_t count = 0;
    const auto* first = fields[1].data();
    const auto* last = first + fields[1].size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last || fields[1].empty())
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    auto pron = read_phones(fields[2], inv, fields[0], cursor.line_no());
    if (pron.empty())
      throw Error(ErrorKind::MalformedLine, quoted_line(line), cursor.line_no());
    lex.add(std::string(fields[0]), pron, count);
  }
  return lex;
}

std::string emit_lexicon(const Lexicon& lex) {
  struct Row {
    std::uint64_t count;
    std::string pron;
  };
  std::string out;
  std::vector<Row> rows;
  for (const auto& [word, variants] : lex.entries()) {
    rows.clear();
    for (const auto& [pron, count] : variants) rows.push_back({count, join_phones(pron)});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.pron < b.pron;
    });
    for (const auto& r : rows) {
      out += word;
      out += '\t';
      out += std::to_string(r.count);
      out += '\t';
      out += r.pron;
      out += '\n';
    }
  }
  return out;
}

}  // namespace pronlex
