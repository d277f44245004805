#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skillmatch/docstore.hpp"
#include "skillmatch/embeddings.hpp"
#include "skillmatch/ontology.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::taxonomy {

inline constexpr std::size_t kDefaultTopN = 200;
inline constexpr std::size_t kDefaultClusters = 12;
inline constexpr std::size_t kMaxIterations = 100;
inline constexpr double kConvergence = 1e-9;

struct CandidateCount {
  std::string ngram;
  std::size_t count = 0;

  friend bool operator==(const CandidateCount&, const CandidateCount&) = default;
};

// Sorted by count descending, ties lexicographic.
struct ConceptCandidateTable {
  std::vector<CandidateCount> entries;
  std::size_t corpus_size = 0;
};

// Corpus-wide unigram..trigram counts over every section, stop words removed.
ConceptCandidateTable harvest_candidates(std::span<const docs::Document> corpus, std::size_t top_n,
                                         const text::Analyzer& analyzer);

struct Cluster {
  embed::Vector centroid;
  std::vector<std::string> members;  // in candidate-table order
  std::string representative;        // member nearest the centroid, ties lexicographic
};

struct ClusterSet {
  std::size_t k = 0;
  std::vector<Cluster> clusters;        // ordered by their first member's table position
  std::vector<std::string> excluded;    // candidates with no vector
  std::vector<double> objective;        // within-cluster sum of squares after each iteration
  std::size_t iterations = 0;
};

// Seeded k-means++ initialisation followed by Lloyd iterations on phrase vectors.
ClusterSet cluster_candidates(const ConceptCandidateTable& table, const embed::VectorStore& vs, std::size_t k,
                              std::uint64_t seed);

// One parent per multi-member cluster, labelled by the member nearest the
// centroid, with every member as a super_topic child. A singleton cluster is
// emitted as a single concept.
onto::Ontology emit_draft_ontology(const ClusterSet& cs);

}  // namespace skillmatch::taxonomy
