#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skillmatch/embeddings.hpp"
#include "skillmatch/ontology.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::skills {

// direct: exact label hit. syntactic: fuzzy label hit. semantic: reached through
// an embedding neighbour. expanded: added as a super-topic of a selected concept.
enum class Origin { direct, syntactic, semantic, expanded };

std::string_view to_string(Origin o);

struct Provenance {
  std::string gram;
  std::string neighbor;  // empty for syntactic hits
  double neighbor_similarity = 1.0;
  double label_similarity = 1.0;

  friend auto operator<=>(const Provenance&, const Provenance&) = default;
};

struct CandidateConcept {
  std::string concept_id;  // equivalence-class representative
  int frequency = 0;
  std::set<std::string> sources;  // distinct n-grams that led here
  bool direct = false;
  double best_label_similarity = 0.0;
  std::vector<Provenance> provenance;

  int diversity() const { return static_cast<int>(sources.size()); }
  Origin origin() const;
};

struct RankedConcept {
  std::string concept_id;
  double relevance = 0.0;
  Origin origin = Origin::semantic;
};

struct GraphNode {
  std::string id;
  std::string label;
  double relevance = 0.0;
  Origin origin = Origin::semantic;
};

// Undirected concept graph keyed by concept id. Edge keys are ordered (a < b).
struct ConceptGraph {
  std::map<std::string, GraphNode> nodes;
  std::map<std::pair<std::string, std::string>, onto::Relation> edges;

  bool empty() const { return nodes.empty(); }
  bool has_edge(const std::string& a, const std::string& b) const;
  void add_edge(const std::string& a, const std::string& b, onto::Relation rel);

  // Node union keeping the higher relevance; edge union.
  void merge(const ConceptGraph& other);

  nlohmann::json to_json() const;
  static ConceptGraph from_json(const nlohmann::json& j);

  friend bool operator==(const ConceptGraph&, const ConceptGraph&);
};

struct ExtractionContext {
  const text::Analyzer& analyzer;
  const onto::Ontology& ontology;
  const embed::VectorStore& vectors;
  double label_threshold = text::kLabelMatchThreshold;
  std::size_t neighbors = 10;
};

struct SemanticDiagnostics {
  std::size_t grams = 0;
  std::size_t out_of_vocabulary = 0;
};

// Candidates sorted by concept id.
std::vector<CandidateConcept> syntactic_extract(const text::TokenStream& ts, const ExtractionContext& ctx);
std::vector<CandidateConcept> semantic_extract(const text::TokenStream& ts, const ExtractionContext& ctx,
                                               SemanticDiagnostics* diagnostics = nullptr);

// Pools two candidate lists: frequencies add, sources union, direct flags OR.
std::vector<CandidateConcept> merge_candidates(const std::vector<CandidateConcept>& a,
                                               const std::vector<CandidateConcept>& b);

// relevance = frequency * diversity; direct candidates get (max indirect relevance) + 1.
// Sorted descending, ties by concept id.
std::vector<RankedConcept> rank_candidates(const std::vector<CandidateConcept>& cands);

// Index of the point farthest from the chord joining the first and last points,
// or nullopt when there are fewer than three points or the curve is straight.
std::optional<std::size_t> elbow_index(const std::vector<double>& descending);

// Keeps the prefix through the elbow point (inclusive).
std::vector<RankedConcept> select_concepts(const std::vector<RankedConcept>& ranked);

// Selected concepts plus their direct super-topics, with the ontology edges among them.
ConceptGraph build_graph(const std::vector<RankedConcept>& selected, const onto::Ontology& o);

struct ExtractionTrace {
  std::vector<CandidateConcept> syntactic;
  std::vector<CandidateConcept> semantic;
  std::vector<CandidateConcept> merged;
  std::vector<RankedConcept> ranked;
  std::vector<RankedConcept> selected;
  SemanticDiagnostics semantic_diagnostics;
  ConceptGraph graph;
};

ExtractionTrace extract_traced(std::string_view text, const ExtractionContext& ctx);
ConceptGraph extract(std::string_view text, const ExtractionContext& ctx);

}  // namespace skillmatch::skills
