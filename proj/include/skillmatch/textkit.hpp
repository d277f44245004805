#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace skillmatch::text {

enum class Pos { noun, adjective, verb, other };

std::string_view to_string(Pos pos);
Pos pos_from_string(std::string_view tag);

struct Token {
  std::string surface;
  std::string lower;
  bool is_stopword = false;
  Pos pos = Pos::other;
  // Punctuation (other than word-internal '-', '\'', '.') precedes this token.
  // N-gram windows and noun chunks never cross a boundary.
  bool boundary_before = false;
};

using TokenStream = std::vector<Token>;

struct NGram {
  std::string text;
  int n = 1;

  friend bool operator==(const NGram&, const NGram&) = default;
};

// ASCII-only lower-casing; bytes >= 0x80 pass through untouched.
std::string fold_case(std::string_view s);

// Lower-cases and collapses runs of whitespace to a single space, trimming both ends.
std::string normalize_label(std::string_view s);

bool is_valid_utf8(std::string_view s);

// Decodes UTF-8 into code points. Invalid bytes decode as themselves.
std::u32string decode_utf8(std::string_view s);

std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// 1 - editDistance / max(|a|, |b|) over code points; 1 when both are empty.
double lev_similarity(std::string_view a, std::string_view b);

// Similarity at which an n-gram is considered to name an ontology label.
inline constexpr double kLabelMatchThreshold = 0.94;

class StopWords {
 public:
  StopWords() = default;
  explicit StopWords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  // One lowercase token per line; blank lines and '#' comments are skipped.
  static StopWords load(const std::filesystem::path& path);

  bool contains(std::string_view lower) const { return words_.count(std::string(lower)) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// word -> most frequent coarse tag, with a suffix-rule fallback for unknown words.
class PosLexicon {
 public:
  PosLexicon() = default;
  explicit PosLexicon(std::unordered_map<std::string, Pos> entries) : entries_(std::move(entries)) {}

  // `word<TAB>tag` lines, tag one of noun/adjective/verb/other.
  static PosLexicon load(const std::filesystem::path& path);

  Pos tag(std::string_view lower) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, Pos> entries_;
};

Pos suffix_rule_tag(std::string_view lower);

class Analyzer {
 public:
  Analyzer() = default;
  Analyzer(StopWords stop_words, PosLexicon lexicon)
      : stop_words_(std::move(stop_words)), lexicon_(std::move(lexicon)) {}

  // Loads `stopwords.txt` and `pos_lexicon.tsv` from a data directory.
  static Analyzer from_data_dir(const std::filesystem::path& dir);

  TokenStream tokenize(std::string_view text) const;

  const StopWords& stop_words() const { return stop_words_; }
  const PosLexicon& lexicon() const { return lexicon_; }

 private:
  StopWords stop_words_;
  PosLexicon lexicon_;
};

// Contiguous windows of non-stop tokens, n = 1..max_n, ordered by n and then by
// start position. Windows never span a stop word or a boundary.
std::vector<NGram> ngrams(const TokenStream& ts, int max_n);

// Maximal spans of the form adjective* noun+.
std::vector<NGram> chunk_noun_phrases(const TokenStream& ts);

// Lowered non-stop tokens in source order.
std::vector<std::string> content_words(const TokenStream& ts);

}  // namespace skillmatch::text
