#include "skillmatch/culture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "skillmatch/error.hpp"

namespace skillmatch::culture {

namespace {

std::string lower(std::string_view s) { return text::fold_case(s); }

}  // namespace

CultureGraph CultureGraph::from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw ValidationError("culture graph: top level must be an object of dimensions");
  if (j.size() != kDimensions) {
    throw ValidationError("culture graph: expected " + std::to_string(kDimensions) + " dimensions, found " +
                          std::to_string(j.size()));
  }
  CultureGraph cg;
  for (const auto& [dim_name, poles] : j.items()) {
    auto known = std::find_if(kDimensionNames.begin(), kDimensionNames.end(),
                              [&](std::string_view n) { return lower(n) == lower(dim_name); });
    if (known == kDimensionNames.end()) throw ValidationError("culture graph: unknown dimension '" + dim_name + "'");
    if (std::any_of(cg.dimensions_.begin(), cg.dimensions_.end(),
                    [&](const Dimension& d) { return lower(d.name) == lower(dim_name); })) {
      throw ValidationError("culture graph: duplicate dimension '" + dim_name + "'");
    }
    if (!poles.is_object() || poles.size() != 2) {
      throw ValidationError("culture graph: dimension '" + dim_name + "' must have exactly two poles");
    }
    Dimension dim;
    dim.name = dim_name;
    std::size_t pi = 0;
    for (const auto& [pole_name, descriptors] : poles.items()) {
      Pole& pole = dim.poles[pi++];
      pole.name = pole_name;
      if (!descriptors.is_object() || descriptors.empty()) {
        throw ValidationError("culture graph: pole '" + pole_name + "' has no descriptors");
      }
      for (const auto& [desc_name, terms] : descriptors.items()) {
        if (!terms.is_array() || terms.empty()) {
          throw ValidationError("culture graph: descriptor '" + desc_name + "' has no terms");
        }
        Descriptor d{desc_name, {}};
        for (const auto& t : terms) {
          if (!t.is_string() || t.get<std::string>().empty()) {
            throw ValidationError("culture graph: descriptor '" + desc_name + "' has a non-string or empty term");
          }
          d.terms.push_back(t.get<std::string>());
        }
        pole.descriptors.push_back(std::move(d));
      }
    }
    cg.dimensions_.push_back(std::move(dim));
  }
  return cg;
}

CultureGraph CultureGraph::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open culture graph " + path.string());
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json CultureGraph::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& d : dimensions_) {
    auto& jd = j[d.name] = nlohmann::ordered_json::object();
    for (const auto& p : d.poles) {
      auto& jp = jd[p.name] = nlohmann::ordered_json::object();
      for (const auto& desc : p.descriptors) jp[desc.name] = desc.terms;
    }
  }
  return j;
}

std::string CultureGraph::pole_name(std::size_t i) const {
  return dimensions_[i / 2].name + " / " + pole(i).name;
}

CultureProfile profile(std::string_view text, const CultureGraph& cg, const embed::VectorStore& vs,
                       const text::Analyzer& analyzer) {
  auto words = text::content_words(analyzer.tokenize(text));
  if (words.empty()) throw ValidationError("culture profile: text is empty after stop-word removal");
  // A set makes the text vector independent of word order and repetition.
  std::set<std::string> distinct;
  for (auto& w : words) {
    if (vs.contains(w)) distinct.insert(std::move(w));
  }
  if (distinct.empty()) throw ValidationError("culture profile: no content word is in the vector vocabulary");
  std::vector<std::string> in_vocab(distinct.begin(), distinct.end());
  auto text_vec = embed::centroid(in_vocab, vs);
  if (text_vec.degenerate) throw ValidationError("culture profile: text vector has zero norm");

  CultureProfile p;
  std::size_t total_terms = 0;
  std::size_t covered_terms = 0;
  for (std::size_t i = 0; i < kPoles; ++i) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& desc : cg.pole(i).descriptors) {
      for (const auto& term : desc.terms) {
        ++total_terms;
        auto tv = embed::phrase_vector(text::normalize_label(term), vs);
        if (!tv || tv->degenerate) continue;
        ++covered_terms;
        sum += std::max(0.0, embed::cosine(tv->vector, text_vec.vector));
        ++count;
      }
    }
    p.pole_values[i] = count == 0 ? 0.0 : std::clamp(sum / static_cast<double>(count), 0.0, 1.0);
  }
  p.coverage = total_terms == 0 ? 0.0 : static_cast<double>(covered_terms) / static_cast<double>(total_terms);
  return p;
}

double culture_match(const CultureProfile& a, const CultureProfile& b) {
  double ss = 0.0;
  for (std::size_t i = 0; i < kPoles; ++i) {
    double d = a.pole_values[i] - b.pole_values[i];
    ss += d * d;
  }
  return std::clamp(1.0 - std::sqrt(ss) / std::sqrt(static_cast<double>(kPoles)), 0.0, 1.0);
}

nlohmann::json pole_table(const CultureGraph& cg, const CultureProfile& cv, const CultureProfile& job) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < kPoles; ++i) {
    rows.push_back({{"dimension", cg.dimensions()[i / 2].name},
                    {"pole", cg.pole(i).name},
                    {"cv", cv.pole_values[i]},
                    {"job", job.pole_values[i]},
                    {"delta", cv.pole_values[i] - job.pole_values[i]}});
  }
  return rows;
}

}  // namespace skillmatch::culture
