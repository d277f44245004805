#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skillmatch/embeddings.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::culture {

inline constexpr std::size_t kDimensions = 6;
inline constexpr std::size_t kPoles = 12;

// Organizational value dimensions, in canonical order.
inline constexpr std::array<std::string_view, kDimensions> kDimensionNames = {
    "Power Distance",           "Individualism",         "Uncertainty Avoidance",
    "Masculinity & Femininity", "Long Term Orientation", "Indulgence Vs Restraint"};

struct Descriptor {
  std::string name;
  std::vector<std::string> terms;
};

struct Pole {
  std::string name;
  std::vector<Descriptor> descriptors;
};

struct Dimension {
  std::string name;
  std::array<Pole, 2> poles;
};

// values -> 6 dimensions -> 2 antonym poles each -> descriptors -> terms.
class CultureGraph {
 public:
  // JSON: {dimension: {pole: {descriptor: [terms...]}}}, key order preserved.
  static CultureGraph load(const std::filesystem::path& path);
  static CultureGraph from_json(const nlohmann::ordered_json& j);
  nlohmann::ordered_json to_json() const;

  const std::vector<Dimension>& dimensions() const { return dimensions_; }

  // Pole i lives in dimension i / 2.
  const Pole& pole(std::size_t i) const { return dimensions_[i / 2].poles[i % 2]; }
  std::string pole_name(std::size_t i) const;

 private:
  std::vector<Dimension> dimensions_;
};

struct CultureProfile {
  std::array<double, kPoles> pole_values{};
  double coverage = 0.0;  // fraction of descriptor terms with a vector

  friend bool operator==(const CultureProfile&, const CultureProfile&) = default;
};

// Centroid of the distinct in-vocabulary content words, compared by cosine to
// every descriptor term (negatives clamped to 0); a pole is the mean over its terms.
CultureProfile profile(std::string_view text, const CultureGraph& cg, const embed::VectorStore& vs,
                       const text::Analyzer& analyzer);

// 1 - euclidean / sqrt(12).
double culture_match(const CultureProfile& a, const CultureProfile& b);

nlohmann::json pole_table(const CultureGraph& cg, const CultureProfile& cv, const CultureProfile& job);

}  // namespace skillmatch::culture
