#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skillmatch/skillgraph.hpp"

namespace skillmatch::ged {

// Undirected graph with labeled nodes and labeled edges. Node labels need not be unique.
struct LabeledGraph {
  struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::string label;
  };

  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  std::size_t add_node(std::string label);
  void add_edge(std::size_t a, std::size_t b, std::string label = {});

  // nullopt when a and b are not adjacent.
  std::optional<std::string> edge_label(std::size_t a, std::size_t b) const;
  std::size_t degree(std::size_t v) const;

  // Nodes in concept-id order, edges labeled by relation name.
  static LabeledGraph from_concept_graph(const skills::ConceptGraph& g);
};

// Unit costs by default; substitution costs apply only when labels differ.
struct EditCostModel {
  double node_ins = 1.0;
  double node_del = 1.0;
  double node_sub = 1.0;
  double edge_ins = 1.0;
  double edge_del = 1.0;
  double edge_sub = 1.0;

  double node_substitution(const std::string& a, const std::string& b) const { return a == b ? 0.0 : node_sub; }
  double edge_substitution(const std::string& a, const std::string& b) const { return a == b ? 0.0 : edge_sub; }
  bool symmetric() const { return node_ins == node_del && edge_ins == edge_del; }
  void validate() const;
};

inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

struct Assignment {
  // mapping[u] = node of g2 substituted for node u of g1, or kUnassigned (deleted).
  std::vector<std::size_t> mapping;
};

// Cost of the edit path induced by a node assignment.
double induced_cost(const LabeledGraph& g1, const LabeledGraph& g2, const Assignment& a, const EditCostModel& cm);

// Hausdorff-matching lower bound on the graph edit distance.
double ged_hausdorff(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm = {});

struct GreedyResult {
  double cost = 0.0;
  Assignment assignment;
};

// Greedy-assignment upper bound. Runs both argument orders and keeps the cheaper
// edit path, so the bound is symmetric under a symmetric cost model.
GreedyResult ged_greedy(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm = {});

// Cost of deleting g1 entirely and inserting g2 entirely.
double trivial_edit_cost(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm);

struct GedResult {
  double lower = 0.0;
  double upper = 0.0;
  double similarity = 1.0;  // 1 - upper / trivial_edit_cost
};

GedResult similarity(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm = {});
GedResult similarity(const skills::ConceptGraph& g1, const skills::ConceptGraph& g2, const EditCostModel& cm = {});

// rows = documents, columns = sections; `row_ids` and `columns` label the matrix.
void write_similarity_matrix_csv(std::ostream& out, const std::vector<std::string>& row_ids,
                                 const std::vector<std::string>& columns,
                                 const std::vector<std::vector<double>>& values);

}  // namespace skillmatch::ged
