#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillmatch::onto {

enum class Relation { equivalent, super_topic, contributes_to };

std::string_view to_string(Relation r);
Relation relation_from_string(std::string_view s);

struct Concept {
  std::string id;
  std::string primary_label;
  std::vector<std::string> alt_labels;
};

// super_topic edges point child -> parent.
struct Edge {
  std::string src;
  Relation rel = Relation::super_topic;
  std::string dst;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct LabelMatch {
  const Concept* match = nullptr;
  double similarity = 0.0;
};

// Typed concept graph. Immutable once built; all queries are const.
class Ontology {
 public:
  // Validates endpoints, rejects super_topic self-loops and cycles, and
  // precomputes equivalence classes.
  static Ontology build(std::vector<Concept> concepts, std::vector<Edge> edges);

  // CSV rows:
  //   @concept,<id>,<primary label>[,<alt label>...]
  //   <src>,<relation>,<dst>      (concept id, or a unique primary label)
  // Blank lines and lines starting with '#' are ignored.
  static Ontology load(const std::filesystem::path& path);
  static Ontology parse(std::string_view csv, std::string_view origin = "<memory>");

  void write_csv(std::ostream& out) const;
  // Tab-separated `src<TAB>relation<TAB>dst` edge list with labels, for graph viewers.
  void write_edge_list(std::ostream& out) const;

  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return concepts_.size(); }

  bool contains(std::string_view id) const;
  const Concept& concept_by_id(std::string_view id) const;

  // Every concept with a label at lev_similarity >= min_sim, expanded to whole
  // equivalence classes (members inherit the class's best similarity).
  // Descending similarity, ties by id.
  std::vector<LabelMatch> find_by_label(std::string_view label, double min_sim) const;

  // Ancestors reachable within `depth` super_topic hops.
  std::set<std::string> super_topics(std::string_view id, int depth) const;
  std::set<std::string> direct_super_topics(std::string_view id) const { return super_topics(id, 1); }

  // Smallest id of the equivalence class containing `id`.
  const std::string& representative(std::string_view id) const;
  const std::vector<std::string>& equivalence_class(std::string_view id) const;

 private:
  std::size_t index_of(std::string_view id) const;

  std::vector<Concept> concepts_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<std::string>> classes_;  // each sorted; front() is the representative
};

}  // namespace skillmatch::onto
