#include "skillmatch/graphsim.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "skillmatch/error.hpp"

namespace skillmatch::ged {

namespace {

using EdgeIndex = std::map<std::pair<std::size_t, std::size_t>, std::string>;

std::pair<std::size_t, std::size_t> key(std::size_t a, std::size_t b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

EdgeIndex index_edges(const LabeledGraph& g) {
  EdgeIndex idx;
  for (const auto& e : g.edges) idx.emplace(key(e.a, e.b), e.label);
  return idx;
}

std::vector<std::vector<std::string>> incident_labels(const LabeledGraph& g) {
  std::vector<std::vector<std::string>> inc(g.nodes.size());
  for (const auto& e : g.edges) {
    inc[e.a].push_back(e.label);
    inc[e.b].push_back(e.label);
  }
  return inc;
}

// Hausdorff estimate between two incident-edge label multisets.
double edge_hausdorff(const std::vector<std::string>& p, const std::vector<std::string>& q, const EditCostModel& cm) {
  double total = 0.0;
  for (const auto& a : p) {
    double best = cm.edge_del;
    for (const auto& b : q) best = std::min(best, cm.edge_substitution(a, b) / 2.0);
    total += best;
  }
  for (const auto& b : q) {
    double best = cm.edge_ins;
    for (const auto& a : p) best = std::min(best, cm.edge_substitution(a, b) / 2.0);
    total += best;
  }
  return total;
}

// Node substitution cost plus half the local edge-structure estimate.
double local_substitution(const LabeledGraph& g1, const LabeledGraph& g2, std::size_t u, std::size_t v,
                          const std::vector<std::vector<std::string>>& inc1,
                          const std::vector<std::vector<std::string>>& inc2, const EditCostModel& cm) {
  return cm.node_substitution(g1.nodes[u], g2.nodes[v]) + edge_hausdorff(inc1[u], inc2[v], cm) / 2.0;
}

Assignment greedy_assign(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm) {
  auto inc1 = incident_labels(g1);
  auto inc2 = incident_labels(g2);
  struct Pair {
    double cost;
    std::size_t u, v;
  };
  std::vector<Pair> pairs;
  for (std::size_t u = 0; u < g1.nodes.size(); ++u) {
    for (std::size_t v = 0; v < g2.nodes.size(); ++v) {
      // Substitution only when it is no dearer than deleting and re-inserting.
      if (cm.node_substitution(g1.nodes[u], g2.nodes[v]) > cm.node_del + cm.node_ins) continue;
      pairs.push_back({local_substitution(g1, g2, u, v, inc1, inc2, cm), u, v});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    return std::tie(x.cost, g1.nodes[x.u], g2.nodes[x.v], x.u, x.v) <
           std::tie(y.cost, g1.nodes[y.u], g2.nodes[y.v], y.u, y.v);
  });
  Assignment a;
  a.mapping.assign(g1.nodes.size(), kUnassigned);
  std::vector<bool> used(g2.nodes.size(), false);
  for (const auto& p : pairs) {
    if (a.mapping[p.u] != kUnassigned || used[p.v]) continue;
    a.mapping[p.u] = p.v;
    used[p.v] = true;
  }
  return a;
}

Assignment invert(const Assignment& a, std::size_t n1) {
  Assignment inv;
  inv.mapping.assign(n1, kUnassigned);
  for (std::size_t v = 0; v < a.mapping.size(); ++v) {
    if (a.mapping[v] != kUnassigned) inv.mapping[a.mapping[v]] = v;
  }
  return inv;
}

}  // namespace

std::size_t LabeledGraph::add_node(std::string label) {
  nodes.push_back(std::move(label));
  return nodes.size() - 1;
}

void LabeledGraph::add_edge(std::size_t a, std::size_t b, std::string label) {
  if (a >= nodes.size() || b >= nodes.size()) throw ValidationError("edge endpoint out of range");
  if (a == b) throw ValidationError("self-loops are not supported");
  if (edge_label(a, b)) return;
  edges.push_back({std::min(a, b), std::max(a, b), std::move(label)});
}

std::optional<std::string> LabeledGraph::edge_label(std::size_t a, std::size_t b) const {
  auto k = key(a, b);
  for (const auto& e : edges) {
    if (e.a == k.first && e.b == k.second) return e.label;
  }
  return std::nullopt;
}

std::size_t LabeledGraph::degree(std::size_t v) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.a == v || e.b == v; }));
}

LabeledGraph LabeledGraph::from_concept_graph(const skills::ConceptGraph& g) {
  LabeledGraph lg;
  std::map<std::string, std::size_t> idx;
  for (const auto& [id, node] : g.nodes) idx.emplace(id, lg.add_node(id));
  for (const auto& [k, rel] : g.edges) lg.add_edge(idx.at(k.first), idx.at(k.second), std::string(onto::to_string(rel)));
  return lg;
}

void EditCostModel::validate() const {
  for (double c : {node_ins, node_del, node_sub, edge_ins, edge_del, edge_sub}) {
    if (!(c >= 0.0)) throw ValidationError("edit costs must be non-negative");
  }
}

double induced_cost(const LabeledGraph& g1, const LabeledGraph& g2, const Assignment& a, const EditCostModel& cm) {
  if (a.mapping.size() != g1.nodes.size()) throw ValidationError("assignment size does not match the graph");
  double cost = 0.0;
  std::vector<bool> covered(g2.nodes.size(), false);
  for (std::size_t u = 0; u < g1.nodes.size(); ++u) {
    std::size_t v = a.mapping[u];
    if (v == kUnassigned) {
      cost += cm.node_del;
    } else {
      cost += cm.node_substitution(g1.nodes[u], g2.nodes[v]);
      covered[v] = true;
    }
  }
  for (std::size_t v = 0; v < g2.nodes.size(); ++v) {
    if (!covered[v]) cost += cm.node_ins;
  }
  auto e2 = index_edges(g2);
  std::map<std::pair<std::size_t, std::size_t>, bool> matched;
  for (const auto& e : g1.edges) {
    std::size_t x = a.mapping[e.a], y = a.mapping[e.b];
    if (x != kUnassigned && y != kUnassigned) {
      auto it = e2.find(key(x, y));
      if (it != e2.end()) {
        cost += cm.edge_substitution(e.label, it->second);
        matched[it->first] = true;
        continue;
      }
    }
    cost += cm.edge_del;
  }
  for (const auto& e : g2.edges) {
    if (!matched.count(key(e.a, e.b))) cost += cm.edge_ins;
  }
  return cost;
}

double ged_hausdorff(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm) {
  auto inc1 = incident_labels(g1);
  auto inc2 = incident_labels(g2);
  auto del_cost = [&](std::size_t u) { return cm.node_del + cm.edge_del * static_cast<double>(inc1[u].size()) / 2.0; };
  auto ins_cost = [&](std::size_t v) { return cm.node_ins + cm.edge_ins * static_cast<double>(inc2[v].size()) / 2.0; };

  std::vector<double> best1(g1.nodes.size()), best2(g2.nodes.size());
  for (std::size_t u = 0; u < g1.nodes.size(); ++u) best1[u] = del_cost(u);
  for (std::size_t v = 0; v < g2.nodes.size(); ++v) best2[v] = ins_cost(v);
  for (std::size_t u = 0; u < g1.nodes.size(); ++u) {
    for (std::size_t v = 0; v < g2.nodes.size(); ++v) {
      // Each substitution is seen from both sides, so each side carries half.
      double f = local_substitution(g1, g2, u, v, inc1, inc2, cm) / 2.0;
      best1[u] = std::min(best1[u], f);
      best2[v] = std::min(best2[v], f);
    }
  }
  double total = 0.0;
  for (double b : best1) total += b;
  for (double b : best2) total += b;
  return total;
}

GreedyResult ged_greedy(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm) {
  cm.validate();
  GreedyResult forward{0.0, greedy_assign(g1, g2, cm)};
  forward.cost = induced_cost(g1, g2, forward.assignment, cm);
  GreedyResult backward{0.0, invert(greedy_assign(g2, g1, cm), g1.nodes.size())};
  backward.cost = induced_cost(g1, g2, backward.assignment, cm);
  return backward.cost < forward.cost ? backward : forward;
}

double trivial_edit_cost(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm) {
  return cm.node_del * static_cast<double>(g1.nodes.size()) + cm.edge_del * static_cast<double>(g1.edges.size()) +
         cm.node_ins * static_cast<double>(g2.nodes.size()) + cm.edge_ins * static_cast<double>(g2.edges.size());
}

GedResult similarity(const LabeledGraph& g1, const LabeledGraph& g2, const EditCostModel& cm) {
  GedResult r;
  double trivial = trivial_edit_cost(g1, g2, cm);
  r.upper = std::min(ged_greedy(g1, g2, cm).cost, trivial);
  r.lower = std::min(ged_hausdorff(g1, g2, cm), r.upper);
  r.similarity = trivial == 0.0 ? 1.0 : std::clamp(1.0 - r.upper / trivial, 0.0, 1.0);
  return r;
}

GedResult similarity(const skills::ConceptGraph& g1, const skills::ConceptGraph& g2, const EditCostModel& cm) {
  return similarity(LabeledGraph::from_concept_graph(g1), LabeledGraph::from_concept_graph(g2), cm);
}

void write_similarity_matrix_csv(std::ostream& out, const std::vector<std::string>& row_ids,
                                 const std::vector<std::string>& columns,
                                 const std::vector<std::vector<double>>& values) {
  if (values.size() != row_ids.size()) throw ValidationError("similarity matrix: row count mismatch");
  out << "ID";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    if (values[i].size() != columns.size()) throw ValidationError("similarity matrix: column count mismatch");
    out << row_ids[i];
    for (double v : values[i]) {
      std::snprintf(buf, sizeof buf, "%.6f", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace skillmatch::ged
