#pragma once

#include <random>
#include <string>
#include <vector>

#include "skillmatch/culture.hpp"
#include "skillmatch/docstore.hpp"
#include "skillmatch/embeddings.hpp"

namespace testsupport {

// A corpus of job posts drawn from two disjoint vocabularies, with vectors that
// put each vocabulary on its own axis.
struct PlantedCorpus {
  static inline const std::vector<std::string> kFirst = {"neural", "tensor", "gradient", "kernel", "compiler", "dataset"};
  static inline const std::vector<std::string> kSecond = {"invoice", "ledger", "audit", "revenue", "budget", "payroll"};

  std::vector<skillmatch::docs::Document> docs;
  std::vector<int> group;  // per document: 0 or 1
  skillmatch::embed::VectorStore vectors{4};

  PlantedCorpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    for (std::size_t g = 0; g < 2; ++g) {
      for (const auto& w : g == 0 ? kFirst : kSecond) {
        std::vector<double> v{noise(rng), noise(rng), noise(rng), noise(rng)};
        v[g] += 1.0;
        vectors.add(w, v);
      }
    }
    const std::vector<std::string> glue = {" and ", " of the ", ", ", ". ", " "};
    for (std::size_t i = 0; i < n; ++i) {
      int g = static_cast<int>(i % 2);
      const auto& vocab = g == 0 ? kFirst : kSecond;
      auto sentence = [&] {
        std::string s;
        std::size_t len = 4 + rng() % 10;
        for (std::size_t k = 0; k < len; ++k) {
          if (k) s += glue[rng() % glue.size()];
          s += vocab[rng() % vocab.size()];
        }
        return s + ".";
      };
      skillmatch::docs::Document d;
      d.id = "post-" + std::to_string(i);
      d.kind = skillmatch::docs::Kind::job_post;
      d.sections = {{"experience", sentence()}, {"skills", sentence()}, {"summary", sentence()}};
      docs.push_back(std::move(d));
      group.push_back(g);
    }
  }

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    for (const auto& d : docs) {
      for (const auto& [name, body] : d.sections) out.push_back(body);
    }
    return out;
  }

  static int group_of_word(const std::string& w) {
    for (const auto& x : kFirst) {
      if (x == w) return 0;
    }
    return 1;
  }
};

// Pole i owns the words w<i>a, w<i>b, w<i>c, each mapped to the unit vector e_i.
struct OrthogonalCulture {
  skillmatch::culture::CultureGraph graph;
  skillmatch::embed::VectorStore vectors{skillmatch::culture::kPoles};

  OrthogonalCulture() {
    nlohmann::ordered_json j;
    for (std::size_t d = 0; d < skillmatch::culture::kDimensions; ++d) {
      nlohmann::ordered_json dim;
      for (std::size_t s = 0; s < 2; ++s) {
        auto i = std::to_string(2 * d + s);
        dim["pole" + i] = {{"first", {"w" + i + "a w" + i + "b"}}, {"second", {"w" + i + "c"}}};
      }
      j[std::string(skillmatch::culture::kDimensionNames[d])] = dim;
    }
    graph = skillmatch::culture::CultureGraph::from_json(j);
    for (std::size_t i = 0; i < skillmatch::culture::kPoles; ++i) {
      std::vector<double> e(skillmatch::culture::kPoles, 0.0);
      e[i] = 1.0;
      for (const char* suffix : {"a", "b", "c"}) vectors.add("w" + std::to_string(i) + suffix, e);
    }
    vectors.add("filler", std::vector<double>(skillmatch::culture::kPoles, 0.01));
  }

  std::string pole_text(std::size_t i) const {
    auto s = std::to_string(i);
    return "w" + s + "a w" + s + "b w" + s + "c";
  }
};

}  // namespace testsupport
