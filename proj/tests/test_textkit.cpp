#include <doctest.h>

#include <fstream>
#include <random>

#include "oracles.hpp"
#include "skillmatch/error.hpp"
#include "skillmatch/textkit.hpp"
#include "support.hpp"

using namespace skillmatch;
using namespace skillmatch::text;

namespace {

std::vector<std::string> texts(const std::vector<NGram>& grams) {
  std::vector<std::string> out;
  for (const auto& g : grams) out.push_back(g.text);
  return out;
}

Analyzer bare_analyzer(std::unordered_set<std::string> stops = {}, std::unordered_map<std::string, Pos> lex = {}) {
  return Analyzer(StopWords(std::move(stops)), PosLexicon(std::move(lex)));
}

std::string random_word(std::mt19937_64& rng, std::size_t max_len, const std::string& alphabet) {
  std::size_t len = rng() % (max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

}  // namespace

TEST_CASE("tokenize basics") {
  const auto& a = testsupport::analyzer();
  CHECK(a.tokenize("").empty());
  CHECK(a.tokenize("  \t\n ").empty());

  auto ts = a.tokenize("Machine Learning");
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].surface == "Machine");
  CHECK(ts[0].lower == "machine");
  CHECK(ts[1].lower == "learning");

  auto the = a.tokenize("the engineer");
  REQUIRE(the.size() == 2);
  CHECK(the[0].is_stopword);
  CHECK(the[0].pos == Pos::other);
  CHECK_FALSE(the[1].is_stopword);
}

TEST_CASE("tokenize keeps programming names and inner dots") {
  auto a = bare_analyzer();
  CHECK(texts(ngrams(a.tokenize("C++ and C# with node.js"), 1)) ==
        std::vector<std::string>{"c++", "and", "c#", "with", "node.js"});
  // A trailing period is sentence punctuation, not part of the word.
  auto ts = a.tokenize("Python. Java");
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].lower == "python");
  CHECK(ts[1].boundary_before);
}

TEST_CASE("tokenize surfaces follow source order and reconstruct content") {
  auto a = bare_analyzer();
  std::string text = "Built  deep-learning models; deployed\ton AWS/GCP.";
  auto ts = a.tokenize(text);
  std::vector<std::string> surfaces;
  for (const auto& t : ts) surfaces.push_back(t.surface);
  CHECK(surfaces == std::vector<std::string>{"Built", "deep", "learning", "models", "deployed", "on", "AWS", "GCP"});
  std::size_t pos = 0;
  for (const auto& s : surfaces) {
    auto at = text.find(s, pos);
    REQUIRE(at != std::string::npos);
    pos = at + s.size();
  }
}

TEST_CASE("fold_case is ASCII only") {
  CHECK(fold_case("ABC xyz") == "abc xyz");
  CHECK(fold_case("\xC3\x89") == "\xC3\x89");
}

TEST_CASE("ngrams enumeration") {
  auto a = bare_analyzer();
  CHECK(texts(ngrams(a.tokenize("a b"), 2)) == std::vector<std::string>{"a", "b", "a b"});
  CHECK(texts(ngrams(a.tokenize("solo"), 3)) == std::vector<std::string>{"solo"});

  auto g = texts(ngrams(a.tokenize("deep learning models"), 3));
  for (const char* want : {"deep learning", "learning models", "deep learning models"}) {
    CHECK(std::find(g.begin(), g.end(), want) != g.end());
  }
  CHECK_THROWS_AS(ngrams(a.tokenize("x"), 0), ValidationError);
  CHECK_THROWS_AS(ngrams(a.tokenize("x"), 4), ValidationError);
}

TEST_CASE("ngrams skip stop words and punctuation") {
  const auto& a = testsupport::analyzer();
  auto g = texts(ngrams(a.tokenize("design of systems, python code"), 3));
  CHECK(g == std::vector<std::string>{"design", "systems", "python", "code", "python code"});
  for (const auto& n : ngrams(a.tokenize("the of and"), 3)) FAIL("stop-word gram " << n.text);
}

TEST_CASE("ngrams match the window oracle on random streams") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> vocab = {"alpha", "beta", "the", "of", "gamma", "delta", ",", ".", "x"};
  const auto& a = testsupport::analyzer();
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    std::size_t len = rng() % 14;
    for (std::size_t i = 0; i < len; ++i) text += vocab[rng() % vocab.size()] + " ";
    auto ts = a.tokenize(text);
    for (int n = 1; n <= 3; ++n) {
      auto got = ngrams(ts, n);
      auto want = oracle::ngrams(ts, n);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].text == want[i].first);
        CHECK(got[i].n == want[i].second);
      }
    }
  }
}

TEST_CASE("ngram count is 3k-3 on a stop-free stream") {
  auto a = bare_analyzer();
  std::string text;
  for (int k = 1; k <= 12; ++k) {
    text += "w" + std::to_string(k) + " ";
    auto count = ngrams(a.tokenize(text), 3).size();
    if (k >= 3) CHECK(count == static_cast<std::size_t>(3 * k - 3));
  }
}

TEST_CASE("lev_similarity examples") {
  CHECK(lev_similarity("ontology", "ontology") == 1.0);
  CHECK(lev_similarity("clustering", "clusterings") == doctest::Approx(1.0 - 1.0 / 11.0).epsilon(1e-15));
  CHECK(lev_similarity("", "") == 1.0);
  CHECK(lev_similarity("", "abc") == 0.0);
  CHECK(lev_similarity("machine learning", "machin learning") == 0.9375);
  CHECK(lev_similarity("machine learning", "machin learning") < kLabelMatchThreshold);
  CHECK(kLabelMatchThreshold == 0.94);
  // Code points, not bytes.
  CHECK(lev_similarity("café", "cafe") == 0.75);
}

TEST_CASE("edit distance matches the DP oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = random_word(rng, 9, "abcé");
    auto b = random_word(rng, 9, "abcé");
    auto ua = decode_utf8(a), ub = decode_utf8(b);
    REQUIRE(edit_distance(ua, ub) == oracle::edit_distance(ua, ub));
    REQUIRE(lev_similarity(a, b) == oracle::lev_similarity(a, b));
  }
}

TEST_CASE("lev_similarity properties") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = random_word(rng, 7, "abc");
    auto b = random_word(rng, 7, "abc");
    auto c = random_word(rng, 7, "abc");
    double s = lev_similarity(a, b);
    CHECK(s == lev_similarity(b, a));
    CHECK((s == 1.0) == (a == b));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    auto ua = decode_utf8(a), ub = decode_utf8(b), uc = decode_utf8(c);
    CHECK(edit_distance(ua, uc) <= edit_distance(ua, ub) + edit_distance(ub, uc));
  }
}

TEST_CASE("utf8 validation") {
  CHECK(is_valid_utf8("plain"));
  CHECK(is_valid_utf8("\xE2\x82\xAC"));
  CHECK_FALSE(is_valid_utf8("\xE2\x82"));
  CHECK_FALSE(is_valid_utf8("\xC0\xAF"));
  CHECK_FALSE(is_valid_utf8("\xFF"));
}

TEST_CASE("noun phrase chunker") {
  auto a = bare_analyzer({}, {{"deep", Pos::adjective},
                              {"learning", Pos::noun},
                              {"managed", Pos::verb},
                              {"team", Pos::noun},
                              {"distributed", Pos::noun},
                              {"systems", Pos::noun},
                              {"engineer", Pos::noun}});
  CHECK(texts(chunk_noun_phrases(a.tokenize("deep learning"))) == std::vector<std::string>{"deep learning"});
  CHECK(texts(chunk_noun_phrases(a.tokenize("managed team"))) == std::vector<std::string>{"team"});
  CHECK(texts(chunk_noun_phrases(a.tokenize("distributed systems engineer"))) ==
        std::vector<std::string>{"distributed systems engineer"});
  CHECK(chunk_noun_phrases(a.tokenize("managed")).empty());
  // Adjectives without a following noun form no chunk.
  CHECK(texts(chunk_noun_phrases(a.tokenize("deep deep"))).empty());
}

TEST_CASE("chunker spans are non-overlapping and maximal") {
  std::mt19937_64 rng(17);
  const std::vector<std::pair<std::string, Pos>> words = {
      {"big", Pos::adjective}, {"data", Pos::noun}, {"run", Pos::verb}, {"fast", Pos::other}, {"lake", Pos::noun}};
  std::unordered_map<std::string, Pos> lex(words.begin(), words.end());
  auto a = bare_analyzer({}, lex);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Pos> tags;
    std::string text;
    std::size_t len = rng() % 10;
    for (std::size_t i = 0; i < len; ++i) {
      const auto& w = words[rng() % words.size()];
      text += w.first + " ";
      tags.push_back(w.second);
    }
    // Automaton oracle: a chunk is adj* noun+ ending where the noun run ends.
    std::vector<std::string> want;
    std::size_t i = 0;
    auto ts = a.tokenize(text);
    while (i < tags.size()) {
      std::size_t s = i;
      while (i < tags.size() && tags[i] == Pos::adjective) ++i;
      std::size_t nouns = i;
      while (i < tags.size() && tags[i] == Pos::noun) ++i;
      if (i > nouns) {
        std::string chunk;
        for (std::size_t k = s; k < i; ++k) chunk += (k > s ? " " : "") + ts[k].lower;
        want.push_back(chunk);
      } else if (i == s) {
        ++i;
      }
    }
    CHECK(texts(chunk_noun_phrases(ts)) == want);
  }
}

TEST_CASE("suffix rules and lexicon") {
  CHECK(suffix_rule_tag("quickly") == Pos::other);
  CHECK(suffix_rule_tag("deployed") == Pos::verb);
  CHECK(suffix_rule_tag("optimize") == Pos::verb);
  CHECK(suffix_rule_tag("statistical") == Pos::adjective);
  CHECK(suffix_rule_tag("scalable") == Pos::adjective);
  CHECK(suffix_rule_tag("2019") == Pos::other);
  CHECK(suffix_rule_tag("kubernetes") == Pos::noun);
  const auto& a = testsupport::analyzer();
  CHECK(a.lexicon().tag("supply") == Pos::noun);
  CHECK(a.lexicon().tag("strong") == Pos::adjective);
  CHECK(a.stop_words().contains("the"));
}

TEST_CASE("content_words drops stop words") {
  const auto& a = testsupport::analyzer();
  CHECK(content_words(a.tokenize("The team and the product")) == std::vector<std::string>{"team", "product"});
}

TEST_CASE("lexicon load errors name the line") {
  testsupport::TempDir tmp;
  auto p = tmp.path() / "lex.tsv";
  {
    std::ofstream f(p);
    f << "# comment\nword\tnoun\nbad line\n";
  }
  try {
    PosLexicon::load(p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
}
