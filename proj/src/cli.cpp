#include "skillmatch/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "skillmatch/config.hpp"
#include "skillmatch/culture.hpp"
#include "skillmatch/docstore.hpp"
#include "skillmatch/embeddings.hpp"
#include "skillmatch/error.hpp"
#include "skillmatch/graphsim.hpp"
#include "skillmatch/ontology.hpp"
#include "skillmatch/screenrank.hpp"
#include "skillmatch/skillgraph.hpp"
#include "skillmatch/taxonomy.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bad command-line values that CLI11 cannot check itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(' ') - b + 1));
  }
  return out;
}

RunConfig resolve_config(const std::string& flag) {
  if (!flag.empty()) return RunConfig::load(flag);
  if (const char* env = std::getenv("SKILLMATCH_CONFIG"); env && *env) return RunConfig::load(env);
  if (fs::exists("skillmatch.conf")) return RunConfig::load("skillmatch.conf");
  return RunConfig::defaults();
}

rank::InterestWeights weights_or(const std::string& spec, const rank::InterestWeights& fallback) {
  if (spec.empty()) return fallback;
  try {
    return rank::InterestWeights::parse(spec);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--weights: ") + e.what());
  }
}

struct Loaded {
  text::Analyzer analyzer;
  onto::Ontology general;
  onto::Ontology domain;
  culture::CultureGraph culture;
  embed::VectorStore vectors;
  rank::DegreeLadder ladder;

  explicit Loaded(const RunConfig& c)
      : analyzer(text::Analyzer::from_data_dir(c.data_dir)),
        general(onto::Ontology::load(c.general_ontology_path)),
        domain(onto::Ontology::load(c.domain_ontology_path)),
        culture(culture::CultureGraph::load(c.culture_graph_path)),
        vectors(embed::VectorStore::load(c.vectors_path)),
        ladder(rank::DegreeLadder::load(c.ladder_path)) {}

  rank::Resources resources(const RunConfig& c) const {
    rank::Resources r{analyzer, general, domain, culture, vectors, ladder};
    r.profiles = c.profiles;
    r.lambda = c.lambda;
    return r;
  }
};

const std::vector<std::string> kAllResources = {"data_dir", "general_ontology", "domain_ontology",
                                                "culture_graph", "vectors", "ladder"};

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json candidates_json(const std::vector<skills::CandidateConcept>& cands) {
  auto a = json::array();
  for (const auto& c : cands) {
    a.push_back({{"concept", c.concept_id},
                  {"frequency", c.frequency},
                  {"diversity", c.diversity()},
                  {"origin", skills::to_string(c.origin())},
                  {"sources", c.sources}});
  }
  return a;
}

json ranked_json(const std::vector<skills::RankedConcept>& ranked) {
  auto a = json::array();
  for (const auto& r : ranked) {
    a.push_back({{"concept", r.concept_id}, {"relevance", r.relevance}, {"origin", skills::to_string(r.origin)}});
  }
  return a;
}

// ---- ingest ----

int cmd_ingest(const RunConfig& cfg, const std::string& path, const std::string& kind, bool overwrite,
               std::ostream& out) {
  std::optional<docs::Kind> want;
  if (!kind.empty()) {
    try {
      want = docs::kind_from_string(kind);
    } catch (const Error& e) {
      throw UsageError(std::string("--kind: ") + e.what());
    }
  }
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else {
    throw NotFoundError("cannot read " + path);
  }

  docs::DocumentStore store(cfg.store_dir);
  auto stored = json::array();
  auto failures = json::array();
  for (const auto& f : files) {
    try {
      auto doc = docs::load_document_file(f);
      if (want && doc.kind != *want) {
        throw ValidationError("kind: expected " + std::string(docs::to_string(*want)) + ", got " +
                              std::string(docs::to_string(doc.kind)));
      }
      auto r = store.put(std::move(doc), overwrite);
      static constexpr const char* kStatus[] = {"stored", "unchanged", "replaced"};
      stored.push_back({{"file", f.string()}, {"id", r.id}, {"status", kStatus[static_cast<int>(r.status)]}});
    } catch (const Error& e) {
      failures.push_back({{"file", f.string()}, {"error", e.what()}});
    }
  }
  print(out, {{"stored", stored}, {"failures", failures}});
  return failures.empty() ? kExitOk : kExitData;
}

// ---- extract ----

int cmd_extract(const RunConfig& cfg, const std::string& doc_id, const std::string& file, const std::string& text_arg,
                const std::string& which, bool trace, std::ostream& out) {
  int given = !doc_id.empty() + !file.empty() + !text_arg.empty();
  if (given != 1) throw UsageError("extract: give exactly one of --doc, --file, --text");
  if (which != "general" && which != "domain") throw UsageError("--ontology must be general or domain");
  cfg.require({"data_dir", which == "general" ? "general_ontology" : "domain_ontology", "vectors"});

  auto analyzer = text::Analyzer::from_data_dir(cfg.data_dir);
  auto ontology = onto::Ontology::load(which == "general" ? cfg.general_ontology_path : cfg.domain_ontology_path);
  auto vectors = embed::VectorStore::load(cfg.vectors_path);
  skills::ExtractionContext ctx{analyzer, ontology, vectors};

  std::vector<std::pair<std::string, std::string>> inputs;
  if (!text_arg.empty()) {
    inputs.emplace_back("text", text_arg);
  } else {
    auto doc = doc_id.empty() ? docs::load_document_file(file) : docs::DocumentStore(cfg.store_dir).get(doc_id);
    for (auto name : rank::kSkillSections) inputs.emplace_back(std::string(name), doc.section(name));
  }

  skills::ConceptGraph graph;
  auto sections = json::array();
  for (const auto& [name, body] : inputs) {
    auto t = skills::extract_traced(body, ctx);
    graph.merge(t.graph);
    if (trace) {
      sections.push_back({{"section", name},
                          {"syntactic", candidates_json(t.syntactic)},
                          {"semantic", candidates_json(t.semantic)},
                          {"ranked", ranked_json(t.ranked)},
                          {"selected", ranked_json(t.selected)},
                          {"out_of_vocabulary_grams", t.semantic_diagnostics.out_of_vocabulary}});
    }
  }
  json j = graph.to_json();
  if (trace) j = {{"graph", j}, {"trace", sections}};
  print(out, j);
  return kExitOk;
}

// ---- match / rank ----

int cmd_match(const RunConfig& cfg, const std::string& cv, const std::string& job, const std::string& weights,
              bool explain, std::ostream& out) {
  auto w = weights_or(weights, cfg.weights);
  cfg.require(kAllResources);
  Loaded l(cfg);
  docs::DocumentStore store(cfg.store_dir);
  auto report = rank::match_one(store, cv, job, w, l.resources(cfg));
  print(out, report.to_json(l.ladder, explain));
  return kExitOk;
}

int cmd_rank(const RunConfig& cfg, const std::string& job, const std::optional<std::string>& cvs,
             const std::string& weights, const std::string& format, unsigned threads, std::ostream& out) {
  auto w = weights_or(weights, cfg.weights);
  cfg.require(kAllResources);
  Loaded l(cfg);
  docs::DocumentStore store(cfg.store_dir);
  auto ids = cvs ? split_list(*cvs) : store.list(docs::Kind::cv);
  auto list = rank::match_many(store, ids, job, w, l.resources(cfg), threads == 0 ? cfg.threads : threads);
  if (format == "csv") {
    list.write_csv(out);
  } else {
    print(out, list.to_json());
  }
  return kExitOk;
}

// ---- similarity matrix ----

int cmd_similarity(const RunConfig& cfg, const std::string& job_id, const std::optional<std::string>& cvs,
                   const std::string& which, std::ostream& out) {
  if (which != "general" && which != "domain") throw UsageError("--ontology must be general or domain");
  cfg.require({"data_dir", which == "general" ? "general_ontology" : "domain_ontology", "vectors"});
  auto analyzer = text::Analyzer::from_data_dir(cfg.data_dir);
  auto ontology = onto::Ontology::load(which == "general" ? cfg.general_ontology_path : cfg.domain_ontology_path);
  auto vectors = embed::VectorStore::load(cfg.vectors_path);
  skills::ExtractionContext ctx{analyzer, ontology, vectors};
  docs::DocumentStore store(cfg.store_dir);

  auto job = store.get(job_id);
  skills::ConceptGraph job_graph;
  for (auto name : rank::kSkillSections) job_graph.merge(skills::extract(job.section(name), ctx));

  auto ids = cvs ? split_list(*cvs) : store.list(docs::Kind::cv);
  std::vector<std::string> columns(rank::kSkillSections.begin(), rank::kSkillSections.end());
  std::vector<std::vector<double>> values;
  for (const auto& id : ids) {
    auto cv = store.get(id);
    auto& row = values.emplace_back();
    for (const auto& c : columns) {
      row.push_back(ged::similarity(skills::extract(cv.section(c), ctx), job_graph).similarity);
    }
  }
  ged::write_similarity_matrix_csv(out, ids, columns, values);
  return kExitOk;
}

// ---- taxonomy ----

int cmd_taxonomy_build(const RunConfig& cfg, const std::string& corpus, const std::string& vectors_flag,
                       std::size_t top_n, std::size_t k, std::uint64_t seed, const std::string& out_path,
                       std::ostream& out) {
  if (!fs::is_directory(corpus)) throw NotFoundError("corpus directory " + corpus + " does not exist");
  cfg.require({"data_dir"});
  auto vectors_path = vectors_flag.empty() ? cfg.vectors_path : fs::path(vectors_flag);
  if (vectors_path.empty() || !fs::exists(vectors_path)) throw NotFoundError("vectors file not found");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<docs::Document> docs_in;
  for (const auto& f : files) docs_in.push_back(docs::load_document_file(f));

  auto analyzer = text::Analyzer::from_data_dir(cfg.data_dir);
  auto vectors = embed::VectorStore::load(vectors_path);
  auto table = taxonomy::harvest_candidates(docs_in, top_n, analyzer);
  auto clusters = taxonomy::cluster_candidates(table, vectors, k, seed);
  auto draft = taxonomy::emit_draft_ontology(clusters);

  auto tmp = fs::path(out_path + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    draft.write_csv(f);
    if (!f) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, out_path);

  auto cl = json::array();
  for (const auto& c : clusters.clusters) cl.push_back({{"representative", c.representative}, {"members", c.members}});
  print(out, {{"documents", docs_in.size()},
              {"candidates", table.entries.size()},
              {"excluded", clusters.excluded},
              {"iterations", clusters.iterations},
              {"objective", clusters.objective.empty() ? 0.0 : clusters.objective.back()},
              {"clusters", cl},
              {"out", out_path}});
  return kExitOk;
}

// ---- ontology export ----

int cmd_ontology_export(const RunConfig& cfg, const std::string& in, const std::string& which,
                        const std::string& format, std::ostream& out) {
  fs::path path = in;
  if (path.empty()) {
    if (which != "general" && which != "domain") throw UsageError("--ontology must be general or domain");
    path = which == "general" ? cfg.general_ontology_path : cfg.domain_ontology_path;
    cfg.require({which == "general" ? "general_ontology" : "domain_ontology"});
  }
  auto o = onto::Ontology::load(path);
  if (format == "csv") {
    o.write_csv(out);
  } else {
    o.write_edge_list(out);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ontology-driven CV and job post matching", "skillmatch"};
  app.require_subcommand(1);
  std::string config_path;
  std::string store_override;
  app.add_option("--config", config_path, "Configuration file (default: $SKILLMATCH_CONFIG, ./skillmatch.conf)");
  app.add_option("--store", store_override, "Document store directory (overrides store_dir)");

  auto* ingest = app.add_subcommand("ingest", "Validate and store documents from a file or directory");
  std::string ingest_path, ingest_kind;
  bool overwrite = false;
  ingest->add_option("path", ingest_path, "JSON file or directory of JSON files")->required();
  ingest->add_option("--kind", ingest_kind, "Expected kind: cv or job_post");
  ingest->add_flag("--overwrite", overwrite, "Replace documents whose id already holds different content");

  auto* extract = app.add_subcommand("extract", "Build a concept graph from a document or text");
  std::string ex_doc, ex_file, ex_text, ex_onto = "general";
  bool ex_trace = false;
  extract->add_option("--doc", ex_doc, "Stored document id");
  extract->add_option("--file", ex_file, "Document JSON file");
  extract->add_option("--text", ex_text, "Raw text");
  extract->add_option("--ontology", ex_onto, "general or domain")->capture_default_str();
  extract->add_flag("--trace", ex_trace, "Include candidate lists per section");

  auto* match = app.add_subcommand("match", "Score one CV against one job post");
  std::string m_cv, m_job, m_weights;
  bool m_explain = false;
  match->add_option("--cv", m_cv, "CV id")->required();
  match->add_option("--job", m_job, "Job post id")->required();
  match->add_option("--weights", m_weights, "axis=int list, e.g. skills=2,domain=2,culture=2,required=0");
  match->add_flag("--explain", m_explain, "Add matched-concept lists and graphs");

  auto* rankc = app.add_subcommand("rank", "Rank CVs against one job post");
  std::string r_job, r_weights, r_format = "json";
  std::optional<std::string> r_cvs;
  unsigned r_threads = 0;
  rankc->add_option("--job", r_job, "Job post id")->required();
  rankc->add_option("--cvs", r_cvs, "Comma-separated CV ids (default: every stored CV)");
  rankc->add_option("--weights", r_weights, "axis=int list");
  rankc->add_option("--format", r_format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  rankc->add_option("--threads", r_threads, "Scoring threads (default: config threads)")->check(CLI::Range(1u, 256u));

  auto* sim = app.add_subcommand("similarity", "CV-section by job graph similarity matrix as CSV");
  std::string s_job, s_onto = "general";
  std::optional<std::string> s_cvs;
  sim->add_option("--job", s_job, "Job post id")->required();
  sim->add_option("--cvs", s_cvs, "Comma-separated CV ids (default: every stored CV)");
  sim->add_option("--ontology", s_onto, "general or domain")->capture_default_str();

  auto* tax = app.add_subcommand("taxonomy", "Draft ontology induction");
  tax->require_subcommand(1);
  auto* build = tax->add_subcommand("build", "Harvest n-grams, cluster them and write a draft ontology CSV");
  std::string t_corpus, t_vectors, t_out;
  std::size_t t_top = taxonomy::kDefaultTopN, t_k = taxonomy::kDefaultClusters;
  std::uint64_t t_seed = 0;
  build->add_option("--corpus", t_corpus, "Directory of document JSON files")->required();
  build->add_option("--vectors", t_vectors, "Word vector file (default: config vectors)");
  build->add_option("--top-n", t_top, "Candidates kept")->capture_default_str()->check(CLI::PositiveNumber);
  build->add_option("--k", t_k, "Cluster count")->capture_default_str()->check(CLI::PositiveNumber);
  build->add_option("--seed", t_seed, "Random seed")->required();
  build->add_option("--out", t_out, "Output ontology CSV")->required();

  auto* ontc = app.add_subcommand("ontology", "Ontology utilities");
  ontc->require_subcommand(1);
  auto* exp = ontc->add_subcommand("export", "Print an ontology as an edge list or canonical CSV");
  std::string o_in, o_which = "general", o_format = "edges";
  exp->add_option("--in", o_in, "Ontology CSV (default: the configured one)");
  exp->add_option("--ontology", o_which, "general or domain, when --in is absent")->capture_default_str();
  exp->add_option("--format", o_format, "edges or csv")->check(CLI::IsMember({"edges", "csv"}))->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto cfg = resolve_config(config_path);
    if (!store_override.empty()) cfg.store_dir = store_override;
    if (*ingest) return cmd_ingest(cfg, ingest_path, ingest_kind, overwrite, out);
    if (*extract) return cmd_extract(cfg, ex_doc, ex_file, ex_text, ex_onto, ex_trace, out);
    if (*match) return cmd_match(cfg, m_cv, m_job, m_weights, m_explain, out);
    if (*rankc) return cmd_rank(cfg, r_job, r_cvs, r_weights, r_format, r_threads, out);
    if (*sim) return cmd_similarity(cfg, s_job, s_cvs, s_onto, out);
    if (*build) return cmd_taxonomy_build(cfg, t_corpus, t_vectors, t_top, t_k, t_seed, t_out, out);
    if (*exp) return cmd_ontology_export(cfg, o_in, o_which, o_format, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace skillmatch::cli
