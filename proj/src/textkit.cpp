#include "skillmatch/textkit.hpp"

#include <algorithm>
#include <fstream>

#include "skillmatch/error.hpp"

namespace skillmatch::text {

namespace {

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_word_byte(unsigned char c) { return is_ascii_alnum(c) || c == '+' || c == '#' || c >= 0x80; }

// Kept inside a token only when flanked by word characters ("node.js", "master's").
bool is_joiner(unsigned char c) { return c == '.' || c == '\''; }

// Split tokens without opening a new phrase.
bool is_soft_separator(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '-' || c == '/' || c == '&';
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::noun:
      return "noun";
    case Pos::adjective:
      return "adjective";
    case Pos::verb:
      return "verb";
    case Pos::other:
      return "other";
  }
  return "other";
}

Pos pos_from_string(std::string_view tag) {
  if (tag == "noun") return Pos::noun;
  if (tag == "adjective") return Pos::adjective;
  if (tag == "verb") return Pos::verb;
  if (tag == "other") return Pos::other;
  throw ParseError("unknown part-of-speech tag '" + std::string(tag) + "'");
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string normalize_label(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (int k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    int extra = c < 0x80 ? 0 : (c & 0xE0) == 0xC0 ? 1 : (c & 0xF0) == 0xE0 ? 2 : (c & 0xF8) == 0xF0 ? 3 : -1;
    if (extra <= 0 || i + extra >= s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = extra == 1 ? (c & 0x1F) : extra == 2 ? (c & 0x0F) : (c & 0x07);
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Single-row dynamic programme over the shorter string.
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

double lev_similarity(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  auto ua = decode_utf8(a);
  auto ub = decode_utf8(b);
  std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(ua, ub)) / static_cast<double>(longest);
}

StopWords StopWords::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open stop-word list " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = trim(line);
    if (w.empty() || w[0] == '#') continue;
    words.insert(fold_case(w));
  }
  return StopWords(std::move(words));
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open lexicon " + path.string());
  std::unordered_map<std::string, Pos> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected word<TAB>tag");
    }
    try {
      entries[fold_case(trim(line.substr(0, tab)))] = pos_from_string(trim(line.substr(tab + 1)));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return PosLexicon(std::move(entries));
}

Pos suffix_rule_tag(std::string_view w) {
  auto ends = [&](std::string_view suf) { return w.size() > suf.size() + 1 && w.ends_with(suf); };
  if (w.empty()) return Pos::other;
  if (std::all_of(w.begin(), w.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.'; })) {
    return Pos::other;
  }
  if (ends("ly")) return Pos::other;
  if (ends("ed") || ends("ize") || ends("ise") || ends("ify")) return Pos::verb;
  for (std::string_view suf : {"ous", "ful", "ive", "able", "ible", "ical", "al", "ic", "less", "ish", "ary"}) {
    if (ends(suf)) return Pos::adjective;
  }
  return Pos::noun;
}

Pos PosLexicon::tag(std::string_view lower) const {
  if (auto it = entries_.find(std::string(lower)); it != entries_.end()) return it->second;
  return suffix_rule_tag(lower);
}

Analyzer Analyzer::from_data_dir(const std::filesystem::path& dir) {
  return Analyzer(StopWords::load(dir / "stopwords.txt"), PosLexicon::load(dir / "pos_lexicon.tsv"));
}

TokenStream Analyzer::tokenize(std::string_view text) const {
  TokenStream out;
  bool boundary = false;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < n) {
    unsigned char c = byte(i);
    if (!is_word_byte(c)) {
      if (!is_soft_separator(c)) boundary = true;
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n) {
      unsigned char d = byte(i);
      if (is_word_byte(d)) {
        ++i;
      } else if (is_joiner(d) && i + 1 < n && is_ascii_alnum(byte(i + 1)) && i > start) {
        ++i;
      } else {
        break;
      }
    }
    Token tok;
    tok.surface = std::string(text.substr(start, i - start));
    tok.lower = fold_case(tok.surface);
    tok.is_stopword = stop_words_.contains(tok.lower);
    tok.pos = tok.is_stopword ? Pos::other : lexicon_.tag(tok.lower);
    tok.boundary_before = boundary && !out.empty();
    boundary = false;
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<NGram> ngrams(const TokenStream& ts, int max_n) {
  if (max_n < 1 || max_n > 3) throw ValidationError("ngrams: max_n must be in [1,3]");
  std::vector<NGram> out;
  for (int len = 1; len <= max_n; ++len) {
    for (std::size_t start = 0; start + len <= ts.size(); ++start) {
      bool ok = true;
      for (std::size_t k = start; k < start + len; ++k) {
        if (ts[k].is_stopword || (k > start && ts[k].boundary_before)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::string text = ts[start].lower;
      for (std::size_t k = start + 1; k < start + len; ++k) text += ' ' + ts[k].lower;
      out.push_back({std::move(text), len});
    }
  }
  return out;
}

std::vector<NGram> chunk_noun_phrases(const TokenStream& ts) {
  std::vector<NGram> out;
  std::size_t i = 0;
  const std::size_t n = ts.size();
  auto breaks_at = [&](std::size_t k, std::size_t start) { return k > start && ts[k].boundary_before; };
  while (i < n) {
    if (ts[i].pos != Pos::adjective && ts[i].pos != Pos::noun) {
      ++i;
      continue;
    }
    std::size_t start = i;
    std::size_t j = i;
    while (j < n && ts[j].pos == Pos::adjective && !breaks_at(j, start)) ++j;
    std::size_t noun_begin = j;
    while (j < n && ts[j].pos == Pos::noun && !breaks_at(j, start)) ++j;
    if (j == noun_begin) {
      // Adjectives with no head noun; resume after the first adjective so a
      // later adjective run can still open a chunk.
      i = start + 1;
      continue;
    }
    std::string text = ts[start].lower;
    for (std::size_t k = start + 1; k < j; ++k) text += ' ' + ts[k].lower;
    out.push_back({std::move(text), static_cast<int>(j - start)});
    i = j;
  }
  return out;
}

std::vector<std::string> content_words(const TokenStream& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) {
    if (!t.is_stopword) out.push_back(t.lower);
  }
  return out;
}

}  // namespace skillmatch::text
