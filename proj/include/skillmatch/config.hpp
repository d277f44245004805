#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skillmatch/screenrank.hpp"

namespace skillmatch {

// Flat `key = value` configuration. Relative paths resolve against the file's directory.
struct RunConfig {
  std::filesystem::path store_dir = "store";
  std::filesystem::path data_dir;  // stop words + POS lexicon
  std::filesystem::path general_ontology_path;
  std::filesystem::path domain_ontology_path;
  std::filesystem::path culture_graph_path;
  std::filesystem::path vectors_path;
  std::filesystem::path ladder_path;
  rank::InterestWeights weights;
  double lambda = 0.6;
  std::vector<std::vector<double>> profiles{{0.5, 0.5, 0.5, 0.5}};
  unsigned threads = 1;

  static RunConfig defaults();
  static RunConfig load(const std::filesystem::path& path);
  static RunConfig parse(const std::string& content, const std::filesystem::path& base_dir,
                         const std::string& origin = "<memory>");

  // Throws NotFoundError naming the first missing file among `keys`.
  void require(const std::vector<std::string>& keys) const;
  std::filesystem::path path_of(const std::string& key) const;
};

// Directory holding the bundled stop-word list, lexicon, culture graph and ladder.
std::filesystem::path bundled_data_dir();

}  // namespace skillmatch
