#pragma once

// Core data model: phone inventories, phone sequences, word-segmented
// reference utterances, reference dictionaries and counted lexicons, plus
// the line-oriented text formats they are read from and written to.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pronlex {

using Phone = std::string;
using Pronunciation = std::vector<Phone>;

enum class PhoneOrigin { EN, L1 };

/// Word-boundary marker inside segmented reference lines.
inline constexpr std::string_view kBoundaryToken = "#";

/// A phone symbol is a non-empty run of printable, non-space ASCII that does
/// not contain a reserved character (`#` or `|`).
bool is_valid_phone_symbol(std::string_view symbol) noexcept;
bool contains_reserved_char(std::string_view symbol) noexcept;

/// Closed set of phone symbols in declaration order. An open inventory
/// accepts every well-formed symbol and is used when no inventory file is
/// supplied.
class PhoneInventory {
 public:
  PhoneInventory() = default;

  static PhoneInventory open();

  /// Throws DuplicatePhone or ReservedSymbol.
  void add(std::string symbol, PhoneOrigin origin = PhoneOrigin::EN,
           std::size_t line = 0);

  bool contains(std::string_view symbol) const;
  std::optional<PhoneOrigin> origin(std::string_view symbol) const;

  bool is_open() const noexcept { return open_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::size_t count(PhoneOrigin origin) const noexcept;
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::vector<PhoneOrigin> origins_;
  std::unordered_map<std::string, std::size_t> index_;
  bool open_ = false;
};

/// Unsegmented phone labels for one utterance.
struct PhoneSequence {
  std::string utterance_id;
  Pronunciation phones;

  bool operator==(const PhoneSequence&) const = default;
};

struct WordPronunciation {
  std::string word;
  Pronunciation phones;

  bool operator==(const WordPronunciation&) const = default;
};

/// Native reference with word boundaries. Each word span is non-empty.
struct SegmentedUtterance {
  std::string utterance_id;
  std::vector<WordPronunciation> words;

  /// Concatenation of all word spans.
  Pronunciation phones() const;
  std::size_t phone_count() const noexcept;

  bool operator==(const SegmentedUtterance&) const = default;
};

/// Half-open range [begin, end) of hypothesis phones realizing one word.
struct WordSpan {
  std::string word;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const noexcept { return begin == end; }
  std::size_t size() const noexcept { return end - begin; }

  bool operator==(const WordSpan&) const = default;
};

Pronunciation slice(std::span<const Phone> phones, const WordSpan& span);

/// One observed realization of a word.
struct VariantPair {
  std::string word;
  Pronunciation pron;

  bool operator==(const VariantPair&) const = default;
};

/// Output of either aligner over a batch of utterances.
struct ExtractionResult {
  std::vector<VariantPair> pairs;
  std::size_t utterances = 0;
  std::size_t words = 0;
  /// Words realized by zero hypothesis phones; counted, never emitted.
  std::size_t empty_spans = 0;
};

/// Word -> canonical pronunciations, in file order.
class ReferenceDictionary {
 public:
  /// Identical (word, pronunciation) repeats are ignored.
  void add(const std::string& word, Pronunciation pron);

  const std::vector<Pronunciation>* find(std::string_view word) const;
  bool contains(std::string_view word, const Pronunciation& pron) const;

  std::size_t word_count() const noexcept { return entries_.size(); }
  const std::map<std::string, std::vector<Pronunciation>, std::less<>>& entries()
      const noexcept {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<Pronunciation>, std::less<>> entries_;
};

/// All listed pronunciations of `word` in file order. Throws OutOfVocabulary.
const std::vector<Pronunciation>& lookup_reference(std::string_view word,
                                                   const ReferenceDictionary& dict);

/// Word -> set of pronunciation variants with occurrence counts.
class Lexicon {
 public:
  using Variants = std::map<Pronunciation, std::uint64_t>;

  /// Adds `count` occurrences; an existing variant has its count increased.
  /// Throws EmptyPronunciation.
  void add(const std::string& word, const Pronunciation& pron,
           std::uint64_t count = 1);

  /// Removes a variant if present; drops the word once it has none left.
  void erase(const std::string& word, const Pronunciation& pron);

  bool contains(std::string_view word, const Pronunciation& pron) const;
  std::uint64_t count(std::string_view word, const Pronunciation& pron) const;
  const Variants* find(std::string_view word) const;

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t word_count() const noexcept { return entries_.size(); }
  std::size_t entry_count() const noexcept { return entry_count_; }
  const std::map<std::string, Variants, std::less<>>& entries() const noexcept {
    return entries_;
  }

  bool operator==(const Lexicon&) const = default;

 private:
  std::map<std::string, Variants, std::less<>> entries_;
  std::size_t entry_count_ = 0;
};

std::string join_phones(std::span<const Phone> phones);

// Text formats. All parsers accept LF-terminated UTF-8, skip blank lines and
// report 1-based line numbers in thrown errors.

/// `SYMBOL` or `SYMBOL<TAB>ORIGIN` per line, `#` starts a comment line.
PhoneInventory parse_inventory(std::string_view text);

/// `utt_id<TAB>PH PH ...` per line.
std::vector<PhoneSequence> parse_phone_file(std::string_view text,
                                            const PhoneInventory& inv);
std::string emit_phone_file(std::span<const PhoneSequence> seqs);

/// `utt_id<TAB>PH PH # PH PH<TAB>word1 word2` per line.
std::vector<SegmentedUtterance> parse_segmented_file(std::string_view text,
                                                     const PhoneInventory& inv);
std::string emit_segmented_file(std::span<const SegmentedUtterance> utts);

/// `word<TAB>PH PH ...` per line, one pronunciation per line.
ReferenceDictionary parse_dictionary(std::string_view text,
                                     const PhoneInventory& inv);

/// `word<TAB>count<TAB>PH PH ...` per line. Repeated variants are summed.
Lexicon parse_lexicon(std::string_view text, const PhoneInventory& inv);

/// Sorted by word (byte order), count descending, then pronunciation string.
std::string emit_lexicon(const Lexicon& lex);

}  // namespace pronlex
