#include "skillmatch/skillgraph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "skillmatch/error.hpp"

namespace skillmatch::skills {

namespace {

int origin_priority(Origin o) {
  switch (o) {
    case Origin::direct:
      return 3;
    case Origin::syntactic:
      return 2;
    case Origin::semantic:
      return 1;
    case Origin::expanded:
      return 0;
  }
  return 0;
}

int relation_priority(onto::Relation r) {
  switch (r) {
    case onto::Relation::super_topic:
      return 2;
    case onto::Relation::contributes_to:
      return 1;
    case onto::Relation::equivalent:
      return 0;
  }
  return 0;
}

Origin origin_from_string(std::string_view s) {
  if (s == "direct") return Origin::direct;
  if (s == "syntactic") return Origin::syntactic;
  if (s == "semantic") return Origin::semantic;
  if (s == "expanded") return Origin::expanded;
  throw ParseError("unknown node origin '" + std::string(s) + "'");
}

// Accumulates hits per equivalence-class representative.
class CandidateTable {
 public:
  void hit(const std::string& rep, const std::string& gram, const Provenance& p, bool direct) {
    auto& c = table_[rep];
    c.concept_id = rep;
    c.frequency += 1;
    c.sources.insert(gram);
    c.direct = c.direct || direct;
    c.best_label_similarity = std::max(c.best_label_similarity, p.label_similarity);
    c.provenance.push_back(p);
  }

  std::vector<CandidateConcept> finish() && {
    std::vector<CandidateConcept> out;
    out.reserve(table_.size());
    for (auto& [id, c] : table_) {
      std::sort(c.provenance.begin(), c.provenance.end());
      out.push_back(std::move(c));
    }
    return out;
  }

 private:
  std::map<std::string, CandidateConcept> table_;
};

// Matched class representatives with their best label similarity.
std::map<std::string, double> match_labels(const onto::Ontology& o, std::string_view label, double threshold) {
  std::map<std::string, double> reps;
  for (const auto& m : o.find_by_label(label, threshold)) {
    auto& best = reps[o.representative(m.match->id)];
    best = std::max(best, m.similarity);
  }
  return reps;
}

std::vector<std::string> split_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto j = s.find(' ', i);
    if (j == std::string::npos) j = s.size();
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::direct:
      return "direct";
    case Origin::syntactic:
      return "syntactic";
    case Origin::semantic:
      return "semantic";
    case Origin::expanded:
      return "expanded";
  }
  return "semantic";
}

Origin CandidateConcept::origin() const {
  if (!direct) return Origin::semantic;
  return best_label_similarity >= 1.0 ? Origin::direct : Origin::syntactic;
}

bool ConceptGraph::has_edge(const std::string& a, const std::string& b) const {
  return edges.count(a < b ? std::pair{a, b} : std::pair{b, a}) != 0;
}

void ConceptGraph::add_edge(const std::string& a, const std::string& b, onto::Relation rel) {
  if (a == b) return;
  auto key = a < b ? std::pair{a, b} : std::pair{b, a};
  auto [it, inserted] = edges.emplace(key, rel);
  if (!inserted && relation_priority(rel) > relation_priority(it->second)) it->second = rel;
}

void ConceptGraph::merge(const ConceptGraph& other) {
  for (const auto& [id, node] : other.nodes) {
    auto [it, inserted] = nodes.emplace(id, node);
    if (inserted) continue;
    auto& mine = it->second;
    mine.relevance = std::max(mine.relevance, node.relevance);
    if (origin_priority(node.origin) > origin_priority(mine.origin)) mine.origin = node.origin;
  }
  for (const auto& [key, rel] : other.edges) add_edge(key.first, key.second, rel);
}

nlohmann::json ConceptGraph::to_json() const {
  auto jn = nlohmann::json::array();
  for (const auto& [id, n] : nodes) {
    jn.push_back({{"id", id}, {"label", n.label}, {"relevance", n.relevance}, {"origin", to_string(n.origin)}});
  }
  auto je = nlohmann::json::array();
  for (const auto& [key, rel] : edges) {
    je.push_back({{"source", key.first}, {"target", key.second}, {"relation", onto::to_string(rel)}});
  }
  return {{"nodes", jn}, {"edges", je}};
}

ConceptGraph ConceptGraph::from_json(const nlohmann::json& j) {
  ConceptGraph g;
  for (const auto& n : j.at("nodes")) {
    GraphNode node{n.at("id").get<std::string>(), n.value("label", std::string{}), n.at("relevance").get<double>(),
                   origin_from_string(n.at("origin").get<std::string>())};
    g.nodes.emplace(node.id, node);
  }
  for (const auto& e : j.at("edges")) {
    g.add_edge(e.at("source").get<std::string>(), e.at("target").get<std::string>(),
               onto::relation_from_string(e.at("relation").get<std::string>()));
  }
  return g;
}

bool operator==(const ConceptGraph& a, const ConceptGraph& b) {
  if (a.edges != b.edges || a.nodes.size() != b.nodes.size()) return false;
  for (const auto& [id, n] : a.nodes) {
    auto it = b.nodes.find(id);
    if (it == b.nodes.end()) return false;
    const auto& m = it->second;
    if (n.label != m.label || n.relevance != m.relevance || n.origin != m.origin) return false;
  }
  return true;
}

std::vector<CandidateConcept> syntactic_extract(const text::TokenStream& ts, const ExtractionContext& ctx) {
  CandidateTable table;
  std::unordered_map<std::string, std::map<std::string, double>> cache;
  for (const auto& gram : text::ngrams(ts, 3)) {
    auto it = cache.find(gram.text);
    if (it == cache.end()) it = cache.emplace(gram.text, match_labels(ctx.ontology, gram.text, ctx.label_threshold)).first;
    for (const auto& [rep, sim] : it->second) {
      table.hit(rep, gram.text, Provenance{gram.text, {}, 1.0, sim}, true);
    }
  }
  return std::move(table).finish();
}

std::vector<CandidateConcept> semantic_extract(const text::TokenStream& ts, const ExtractionContext& ctx,
                                               SemanticDiagnostics* diagnostics) {
  SemanticDiagnostics diag;
  CandidateTable table;
  if (ctx.vectors.empty()) {
    if (diagnostics) *diagnostics = diag;
    return {};
  }
  std::unordered_map<std::string, std::map<std::string, double>> label_cache;
  for (const auto& chunk : text::chunk_noun_phrases(ts)) {
    auto words = split_spaces(chunk.text);
    for (std::size_t len = 1; len <= 3; ++len) {
      for (std::size_t start = 0; start + len <= words.size(); ++start) {
        std::string gram = words[start];
        for (std::size_t k = start + 1; k < start + len; ++k) gram += ' ' + words[k];
        ++diag.grams;
        auto pv = embed::phrase_vector(gram, ctx.vectors);
        if (!pv) {
          ++diag.out_of_vocabulary;
          continue;
        }
        if (pv->degenerate) continue;
        for (const auto& nb : embed::top_k(ctx.vectors, pv->vector, ctx.neighbors)) {
          std::string word = nb.word;
          std::replace(word.begin(), word.end(), '_', ' ');
          auto it = label_cache.find(word);
          if (it == label_cache.end()) {
            it = label_cache.emplace(word, match_labels(ctx.ontology, word, ctx.label_threshold)).first;
          }
          for (const auto& [rep, sim] : it->second) {
            table.hit(rep, gram, Provenance{gram, nb.word, nb.similarity, sim}, false);
          }
        }
      }
    }
  }
  if (diagnostics) *diagnostics = diag;
  return std::move(table).finish();
}

std::vector<CandidateConcept> merge_candidates(const std::vector<CandidateConcept>& a,
                                               const std::vector<CandidateConcept>& b) {
  std::map<std::string, CandidateConcept> merged;
  for (const auto* list : {&a, &b}) {
    for (const auto& c : *list) {
      auto [it, inserted] = merged.emplace(c.concept_id, c);
      if (inserted) continue;
      auto& m = it->second;
      m.frequency += c.frequency;
      m.sources.insert(c.sources.begin(), c.sources.end());
      m.direct = m.direct || c.direct;
      m.best_label_similarity = std::max(m.best_label_similarity, c.best_label_similarity);
      m.provenance.insert(m.provenance.end(), c.provenance.begin(), c.provenance.end());
    }
  }
  std::vector<CandidateConcept> out;
  out.reserve(merged.size());
  for (auto& [id, c] : merged) {
    std::sort(c.provenance.begin(), c.provenance.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<RankedConcept> rank_candidates(const std::vector<CandidateConcept>& cands) {
  double max_indirect = 0.0;
  for (const auto& c : cands) {
    if (!c.direct) max_indirect = std::max(max_indirect, static_cast<double>(c.frequency) * c.diversity());
  }
  std::vector<RankedConcept> out;
  out.reserve(cands.size());
  for (const auto& c : cands) {
    double r = c.direct ? max_indirect + 1.0 : static_cast<double>(c.frequency) * c.diversity();
    out.push_back({c.concept_id, r, c.origin()});
  }
  std::sort(out.begin(), out.end(), [](const RankedConcept& x, const RankedConcept& y) {
    if (x.relevance != y.relevance) return x.relevance > y.relevance;
    return x.concept_id < y.concept_id;
  });
  return out;
}

std::optional<std::size_t> elbow_index(const std::vector<double>& ys) {
  const std::size_t n = ys.size();
  if (n < 3) return std::nullopt;
  const double x0 = 0.0, y0 = ys.front();
  const double x1 = static_cast<double>(n - 1), y1 = ys.back();
  const double len = std::hypot(x1 - x0, y1 - y0);
  double best = 0.0;
  std::size_t best_i = 0;
  double scale = 1.0;
  for (double y : ys) scale = std::max(scale, std::abs(y));
  for (std::size_t i = 0; i < n; ++i) {
    double x = static_cast<double>(i);
    double d = std::abs((x1 - x0) * (y0 - ys[i]) - (x0 - x) * (y1 - y0)) / len;
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (best <= 1e-12 * scale) return std::nullopt;
  return best_i;
}

std::vector<RankedConcept> select_concepts(const std::vector<RankedConcept>& ranked) {
  std::vector<double> ys;
  ys.reserve(ranked.size());
  for (const auto& r : ranked) ys.push_back(r.relevance);
  auto elbow = elbow_index(ys);
  if (!elbow) return ranked;
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(*elbow + 1)};
}

ConceptGraph build_graph(const std::vector<RankedConcept>& selected, const onto::Ontology& o) {
  ConceptGraph g;
  for (const auto& s : selected) {
    const auto& rep = o.representative(s.concept_id);
    auto [it, inserted] = g.nodes.emplace(rep, GraphNode{rep, o.concept_by_id(rep).primary_label, s.relevance, s.origin});
    if (!inserted) it->second.relevance = std::max(it->second.relevance, s.relevance);
  }
  // Direct super-topics of every selected class member, collapsed to representatives.
  std::map<std::string, double> expanded;
  for (const auto& s : selected) {
    const auto& rep = o.representative(s.concept_id);
    for (const auto& member : o.equivalence_class(rep)) {
      for (const auto& parent : o.direct_super_topics(member)) {
        const auto& prep = o.representative(parent);
        if (prep == rep || g.nodes.count(prep)) continue;
        auto& r = expanded[prep];
        r = std::max(r, g.nodes.at(rep).relevance);
      }
    }
  }
  for (const auto& [id, r] : expanded) {
    g.nodes.emplace(id, GraphNode{id, o.concept_by_id(id).primary_label, r, Origin::expanded});
  }
  for (const auto& e : o.edges()) {
    const auto& a = o.representative(e.src);
    const auto& b = o.representative(e.dst);
    if (a != b && g.nodes.count(a) && g.nodes.count(b)) g.add_edge(a, b, e.rel);
  }
  return g;
}

ExtractionTrace extract_traced(std::string_view text, const ExtractionContext& ctx) {
  ExtractionTrace t;
  auto ts = ctx.analyzer.tokenize(text);
  t.syntactic = syntactic_extract(ts, ctx);
  t.semantic = semantic_extract(ts, ctx, &t.semantic_diagnostics);
  t.merged = merge_candidates(t.syntactic, t.semantic);
  t.ranked = rank_candidates(t.merged);
  t.selected = select_concepts(t.ranked);
  t.graph = build_graph(t.selected, ctx.ontology);
  return t;
}

ConceptGraph extract(std::string_view text, const ExtractionContext& ctx) { return extract_traced(text, ctx).graph; }

}  // namespace skillmatch::skills
