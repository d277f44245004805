#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "skillmatch/embeddings.hpp"
#include "skillmatch/ontology.hpp"
#include "skillmatch/skillgraph.hpp"
#include "support.hpp"

using namespace skillmatch;
using namespace skillmatch::skills;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Toy {
  onto::Ontology ontology = onto::Ontology::load(testsupport::source_dir() / "fixtures/toy/ontology.csv");
  embed::VectorStore vectors = embed::VectorStore::load(testsupport::source_dir() / "fixtures/toy/vectors.txt");
  ExtractionContext ctx{testsupport::analyzer(), ontology, vectors};
};

const Toy& toy() {
  static const Toy t;
  return t;
}

CandidateConcept cand(std::string id, int freq, std::set<std::string> sources, bool direct) {
  CandidateConcept c;
  c.concept_id = std::move(id);
  c.frequency = freq;
  c.sources = std::move(sources);
  c.direct = direct;
  c.best_label_similarity = direct ? 1.0 : 0.0;
  return c;
}

std::set<std::string> node_ids(const ConceptGraph& g) {
  std::set<std::string> out;
  for (const auto& [id, n] : g.nodes) out.insert(id);
  return out;
}

const CandidateConcept* find(const std::vector<CandidateConcept>& cs, const std::string& id) {
  for (const auto& c : cs) {
    if (c.concept_id == id) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("syntactic extraction") {
  const auto& t = toy();
  const auto& a = testsupport::analyzer();
  auto hit = syntactic_extract(a.tokenize("Solid machine learning background"), t.ctx);
  auto* ml = find(hit, "ml");
  REQUIRE(ml);
  CHECK(ml->direct);
  CHECK(ml->frequency >= 1);
  CHECK(ml->origin() == Origin::direct);

  CHECK(find(syntactic_extract(a.tokenize("machin learning"), t.ctx), "ml") == nullptr);

  auto two = syntactic_extract(a.tokenize("ml models and machine learning"), t.ctx);
  ml = find(two, "ml");
  REQUIRE(ml);
  CHECK(ml->diversity() == 2);
  CHECK(ml->frequency == 2);
}

TEST_CASE("fuzzy syntactic hits are marked syntactic") {
  auto o = onto::Ontology::parse("@concept,dv,data visualizations\n");
  embed::VectorStore vs = embed::VectorStore::parse("x 1 0\n");
  ExtractionContext ctx{testsupport::analyzer(), o, vs};
  auto r = syntactic_extract(testsupport::analyzer().tokenize("data visualisations"), ctx);
  REQUIRE(r.size() == 1);
  CHECK(r[0].direct);
  CHECK(r[0].origin() == Origin::syntactic);
}

TEST_CASE("semantic extraction through neighbours") {
  const auto& t = toy();
  const auto& a = testsupport::analyzer();
  auto r = semantic_extract(a.tokenize("autonomous drones"), t.ctx);
  auto* robotics = find(r, "robotics");
  REQUIRE(robotics);
  CHECK_FALSE(robotics->direct);
  CHECK(robotics->origin() == Origin::semantic);

  CHECK(semantic_extract(a.tokenize("quickly and then"), t.ctx).empty());
  SemanticDiagnostics diag;
  CHECK(semantic_extract(a.tokenize("zorblax"), t.ctx, &diag).empty());
  CHECK(diag.out_of_vocabulary == 1);
}

TEST_CASE("a neighbour matching two equivalent labels yields one candidate") {
  auto o = onto::Ontology::parse(
      "@concept,a,datavisualization\n@concept,b,datavisualisation\na,equivalent,b\n");
  auto vs = embed::VectorStore::parse("charts 1 0.1\ndatavisualization 1 0\n");
  ExtractionContext ctx{testsupport::analyzer(), o, vs};
  auto r = semantic_extract(testsupport::analyzer().tokenize("charts"), ctx);
  REQUIRE(r.size() == 1);
  CHECK(r[0].concept_id == "a");

  // Without the equivalence the same neighbour hits both concepts.
  auto split = onto::Ontology::parse("@concept,a,datavisualization\n@concept,b,datavisualisation\n");
  ExtractionContext ctx2{testsupport::analyzer(), split, vs};
  CHECK(semantic_extract(testsupport::analyzer().tokenize("charts"), ctx2).size() == 2);
}

TEST_CASE("rank_candidates") {
  auto r = rank_candidates({cand("x", 3, {"p", "q"}, false)});
  REQUIRE(r.size() == 1);
  CHECK(r[0].relevance == 6.0);

  auto single = rank_candidates({cand("d", 1, {"d"}, true)});
  CHECK(single[0].relevance == 1.0);

  auto mixed = rank_candidates({cand("four", 2, {"a", "b"}, false), cand("six", 3, {"a", "b"}, false),
                                cand("dir", 1, {"z"}, true)});
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].concept_id == "dir");
  CHECK(mixed[0].relevance == 7.0);
  CHECK(mixed[1].relevance == 6.0);
  CHECK(mixed[2].relevance == 4.0);

  auto ties = rank_candidates({cand("b", 1, {"x"}, false), cand("a", 1, {"y"}, false)});
  CHECK(ties[0].concept_id == "a");
}

TEST_CASE("elbow selection") {
  std::vector<double> curve{10, 9, 2, 1.5, 1};
  auto e = elbow_index(curve);
  REQUIRE(e);
  CHECK(*e == *oracle::elbow(curve));
  CHECK(*e == 2);

  std::vector<RankedConcept> ranked;
  for (std::size_t i = 0; i < curve.size(); ++i) ranked.push_back({"c" + std::to_string(i), curve[i], Origin::semantic});
  CHECK(select_concepts(ranked).size() == 3);

  CHECK(select_concepts({{"only", 3.0, Origin::direct}}).size() == 1);
  std::vector<RankedConcept> linear;
  for (int v = 5; v >= 1; --v) linear.push_back({"l" + std::to_string(v), double(v), Origin::semantic});
  CHECK(select_concepts(linear).size() == 5);
  CHECK_FALSE(elbow_index({5, 4, 3, 2, 1}));
  CHECK_FALSE(elbow_index({2, 2, 2}));
}

TEST_CASE("elbow agrees with the chord-distance oracle") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 3000; ++trial) {
    std::size_t n = rng() % 12;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) ys.push_back(static_cast<double>(rng() % 40));
    std::sort(ys.rbegin(), ys.rend());
    CHECK(elbow_index(ys) == oracle::elbow(ys));
  }
}

TEST_CASE("build_graph") {
  const auto& t = toy();
  auto g = build_graph({{"ml", 5.0, Origin::direct}}, t.ontology);
  CHECK(node_ids(g) == std::set<std::string>{"ml", "ai"});
  CHECK(g.has_edge("ml", "ai"));
  CHECK(g.nodes.at("ai").origin == Origin::expanded);
  CHECK(g.nodes.at("ai").relevance == 5.0);

  CHECK(build_graph({}, t.ontology).empty());

  auto sib = build_graph({{"nlp", 2.0, Origin::semantic}, {"robotics", 3.0, Origin::semantic}}, t.ontology);
  CHECK(node_ids(sib) == std::set<std::string>{"nlp", "robotics", "ai"});
  CHECK(sib.edges.size() == 2);
  CHECK(sib.nodes.at("ai").relevance == 3.0);
}

TEST_CASE("extract composition") {
  const auto& t = toy();
  CHECK(extract("", t.ctx).empty());
  auto g = extract("machine learning", t.ctx);
  CHECK(node_ids(g) == std::set<std::string>{"ml", "ai"});
  CHECK(g.nodes.at("ml").origin == Origin::direct);
}

TEST_CASE("golden extraction") {
  const auto& t = toy();
  auto text = slurp(testsupport::source_dir() / "fixtures/toy/job.txt");
  auto want = nlohmann::json::parse(slurp(testsupport::source_dir() / "fixtures/toy/extract_golden.json"));
  auto got = extract(text, t.ctx);
  CHECK(got.to_json() == want);
  CHECK(ConceptGraph::from_json(want) == got);
}

TEST_CASE("concept graph json round trip") {
  const auto& t = toy();
  auto g = extract(slurp(testsupport::source_dir() / "fixtures/toy/job.txt"), t.ctx);
  CHECK(ConceptGraph::from_json(g.to_json()) == g);
}

TEST_CASE("appending an exact label keeps earlier direct concepts") {
  const auto& t = toy();
  const std::vector<std::string> pool = {"machine learning", "python",     "deep learning", "robotics",
                                         "drones",           "statistics", "text parsing",  "code",
                                         "regression",       "the",        "models",        "."};
  const std::vector<std::string> labels = {"machine learning", "python", "deep learning", "robotics",
                                           "statistics", "natural language processing"};
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = rng() % 10; i < n; ++i) text += pool[rng() % pool.size()] + " ";
    auto before = extract_traced(text, t.ctx);
    auto after = extract_traced(text + ". " + labels[rng() % labels.size()], t.ctx);
    std::set<std::string> kept;
    for (const auto& s : after.selected) kept.insert(s.concept_id);
    for (const auto& s : before.selected) {
      if (s.origin == Origin::direct || s.origin == Origin::syntactic) CHECK(kept.count(s.concept_id));
    }
  }
}

TEST_CASE("semantic candidates carry an auditable provenance") {
  const auto& t = toy();
  auto text = slurp(testsupport::source_dir() / "fixtures/toy/job.txt");
  auto trace = extract_traced(text, t.ctx);
  REQUIRE_FALSE(trace.semantic.empty());
  for (const auto& c : trace.semantic) {
    REQUIRE_FALSE(c.provenance.empty());
    for (const auto& p : c.provenance) {
      auto pv = embed::phrase_vector(p.gram, t.vectors);
      REQUIRE(pv);
      auto nb = embed::top_k(t.vectors, pv->vector, 10);
      auto it = std::find_if(nb.begin(), nb.end(), [&](const embed::Neighbor& n) { return n.word == p.neighbor; });
      REQUIRE(it != nb.end());
      CHECK(it->similarity == p.neighbor_similarity);
      CHECK(p.label_similarity >= text::kLabelMatchThreshold);
      CHECK(c.sources.count(p.gram));
    }
  }
  for (const auto& [id, node] : trace.graph.nodes) {
    if (node.origin != Origin::semantic) continue;
    CHECK(std::any_of(trace.semantic.begin(), trace.semantic.end(),
                      [&](const CandidateConcept& c) { return c.concept_id == id; }));
  }
}

TEST_CASE("merging candidate lists is order independent") {
  const auto& t = toy();
  auto ts = testsupport::analyzer().tokenize(slurp(testsupport::source_dir() / "fixtures/toy/job.txt"));
  auto syn = syntactic_extract(ts, t.ctx);
  auto sem = semantic_extract(ts, t.ctx);
  auto ab = merge_candidates(syn, sem);
  auto ba = merge_candidates(sem, syn);
  REQUIRE(ab.size() == ba.size());
  for (std::size_t i = 0; i < ab.size(); ++i) {
    CHECK(ab[i].concept_id == ba[i].concept_id);
    CHECK(ab[i].frequency == ba[i].frequency);
    CHECK(ab[i].sources == ba[i].sources);
    CHECK(ab[i].direct == ba[i].direct);
    CHECK(ab[i].best_label_similarity == ba[i].best_label_similarity);
  }
  CHECK(build_graph(select_concepts(rank_candidates(ab)), t.ontology) ==
        build_graph(select_concepts(rank_candidates(ba)), t.ontology));
}

TEST_CASE("graph invariants on the demo fixture") {
  auto o = onto::Ontology::load(testsupport::demo_dir() / "general_ontology.csv");
  auto vs = embed::VectorStore::load(testsupport::demo_dir() / "vectors.txt");
  ExtractionContext ctx{testsupport::analyzer(), o, vs};
  for (const auto& entry : std::filesystem::directory_iterator(testsupport::demo_dir() / "cvs")) {
    auto j = nlohmann::json::parse(slurp(entry.path()));
    auto g = extract(j["sections"]["experience"].get<std::string>(), ctx);
    for (const auto& [id, node] : g.nodes) {
      CHECK(o.contains(id));
      CHECK(node.relevance >= 0.0);
      if (node.origin != Origin::expanded) continue;
      bool has_child = false;
      for (const auto& [child, cn] : g.nodes) {
        if (child == id) continue;
        for (const auto& member : o.equivalence_class(child)) {
          for (const auto& p : o.direct_super_topics(member)) has_child |= o.representative(p) == id;
        }
      }
      CHECK(has_child);
    }
  }
}
