#include "skillmatch/ontology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <numeric>
#include <ostream>
#include <sstream>

#include "skillmatch/error.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::onto {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Comma-separated fields with optional double quoting ("" escapes a quote).
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::equivalent:
      return "equivalent";
    case Relation::super_topic:
      return "super_topic";
    case Relation::contributes_to:
      return "contributes_to";
  }
  return "super_topic";
}

Relation relation_from_string(std::string_view s) {
  if (s == "equivalent") return Relation::equivalent;
  if (s == "super_topic") return Relation::super_topic;
  if (s == "contributes_to") return Relation::contributes_to;
  throw ParseError("unknown relation '" + std::string(s) + "'");
}

Ontology Ontology::build(std::vector<Concept> concepts, std::vector<Edge> edges) {
  Ontology o;
  for (auto& c : concepts) {
    c.id = trim(c.id);
    if (c.id.empty()) throw ValidationError("concept with empty id");
    c.primary_label = text::normalize_label(c.primary_label);
    if (c.primary_label.empty()) throw ValidationError("concept '" + c.id + "' has an empty primary label");
    std::vector<std::string> alts;
    for (const auto& a : c.alt_labels) {
      auto n = text::normalize_label(a);
      if (!n.empty() && n != c.primary_label && std::find(alts.begin(), alts.end(), n) == alts.end()) {
        alts.push_back(std::move(n));
      }
    }
    c.alt_labels = std::move(alts);
    if (!o.index_.emplace(c.id, o.concepts_.size()).second) {
      throw ValidationError("duplicate concept id '" + c.id + "'");
    }
    o.concepts_.push_back(std::move(c));
  }

  const std::size_t n = o.concepts_.size();
  o.parents_.assign(n, {});
  std::vector<std::size_t> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& e : edges) {
    for (const auto* end : {&e.src, &e.dst}) {
      if (!o.index_.count(*end)) {
        throw ValidationError("edge " + e.src + " " + std::string(to_string(e.rel)) + " " + e.dst +
                              " references unknown concept '" + *end + "'");
      }
    }
    std::size_t s = o.index_.at(e.src);
    std::size_t d = o.index_.at(e.dst);
    switch (e.rel) {
      case Relation::super_topic:
        if (s == d) throw ValidationError("super_topic cycle: " + e.src + " -> " + e.src);
        o.parents_[s].push_back(d);
        break;
      case Relation::equivalent:
        uf[find(s)] = find(d);
        break;
      case Relation::contributes_to:
        break;
    }
  }
  o.edges_ = std::move(edges);

  // Cycle detection over child -> parent edges.
  std::vector<int> color(n, 0);
  std::vector<std::size_t> stack;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    color[v] = 1;
    stack.push_back(v);
    for (std::size_t p : o.parents_[v]) {
      if (color[p] == 1) {
        auto it = std::find(stack.begin(), stack.end(), p);
        std::string msg = "super_topic cycle: ";
        for (auto k = it; k != stack.end(); ++k) msg += o.concepts_[*k].id + " -> ";
        msg += o.concepts_[p].id;
        throw ValidationError(msg);
      }
      if (color[p] == 0) visit(p);
    }
    stack.pop_back();
    color[v] = 2;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (color[v] == 0) visit(v);
  }

  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(o.concepts_[v].id);
  o.class_of_.assign(n, 0);
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    std::size_t cls = o.classes_.size();
    for (const auto& m : members) o.class_of_[o.index_.at(m)] = cls;
    o.classes_.push_back(std::move(members));
  }
  return o;
}

Ontology Ontology::parse(std::string_view csv, std::string_view origin) {
  std::vector<Concept> concepts;
  std::vector<Edge> edges;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    auto f = split_csv(t);
    if (f[0] == "@concept") {
      if (f.size() < 3 || f[1].empty() || f[2].empty()) {
        throw ParseError(where + "concept row needs an id and a primary label");
      }
      Concept c{f[1], f[2], {}};
      for (std::size_t k = 3; k < f.size(); ++k) {
        if (!f[k].empty()) c.alt_labels.push_back(f[k]);
      }
      concepts.push_back(std::move(c));
      continue;
    }
    if (f.size() != 3) throw ParseError(where + "expected src,relation,dst");
    try {
      edges.push_back({f[0], relation_from_string(f[1]), f[2]});
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
  }
  // Triple endpoints name a concept id or, failing that, a unique primary label.
  std::set<std::string> ids;
  std::map<std::string, std::vector<std::string>> by_label;
  for (const auto& c : concepts) {
    ids.insert(c.id);
    by_label[text::normalize_label(c.primary_label)].push_back(c.id);
  }
  auto resolve = [&](std::string& ref) {
    if (ids.count(ref)) return;
    auto it = by_label.find(text::normalize_label(ref));
    if (it == by_label.end()) return;  // left dangling for build() to report
    if (it->second.size() > 1) {
      throw ParseError(std::string(origin) + ": label '" + ref + "' names several concepts; use an id");
    }
    ref = it->second.front();
  };
  for (auto& e : edges) {
    resolve(e.src);
    resolve(e.dst);
  }
  try {
    return build(std::move(concepts), std::move(edges));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(origin) + ": " + e.what());
  }
}

Ontology Ontology::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open ontology " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void Ontology::write_csv(std::ostream& out) const {
  for (const auto& c : concepts_) {
    out << "@concept," << csv_field(c.id) << ',' << csv_field(c.primary_label);
    for (const auto& a : c.alt_labels) out << ',' << csv_field(a);
    out << '\n';
  }
  for (const auto& e : edges_) {
    out << csv_field(e.src) << ',' << to_string(e.rel) << ',' << csv_field(e.dst) << '\n';
  }
}

void Ontology::write_edge_list(std::ostream& out) const {
  out << "source\trelation\ttarget\n";
  for (const auto& e : edges_) {
    out << concept_by_id(e.src).primary_label << '\t' << to_string(e.rel) << '\t'
        << concept_by_id(e.dst).primary_label << '\n';
  }
}

bool Ontology::contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }

std::size_t Ontology::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw NotFoundError("unknown concept '" + std::string(id) + "'");
  return it->second;
}

const Concept& Ontology::concept_by_id(std::string_view id) const { return concepts_[index_of(id)]; }

std::vector<LabelMatch> Ontology::find_by_label(std::string_view label, double min_sim) const {
  if (min_sim < 0.0 || min_sim > 1.0) throw ValidationError("find_by_label: min_sim must be in [0,1]");
  const auto query = text::normalize_label(label);
  const auto qlen = static_cast<double>(text::decode_utf8(query).size());

  std::vector<double> class_best(classes_.size(), -1.0);
  auto consider = [&](std::size_t ci, const std::string& l) {
    // Edit distance is at least the length difference; skip labels that cannot reach min_sim.
    double llen = static_cast<double>(text::decode_utf8(l).size());
    double longest = std::max(qlen, llen);
    if (longest > 0 && 1.0 - std::abs(qlen - llen) / longest < min_sim) return;
    double s = text::lev_similarity(query, l);
    if (s >= min_sim) class_best[ci] = std::max(class_best[ci], s);
  };
  for (std::size_t v = 0; v < concepts_.size(); ++v) {
    consider(class_of_[v], concepts_[v].primary_label);
    for (const auto& a : concepts_[v].alt_labels) consider(class_of_[v], a);
  }

  std::vector<LabelMatch> out;
  for (std::size_t ci = 0; ci < classes_.size(); ++ci) {
    if (class_best[ci] < 0.0) continue;
    for (const auto& id : classes_[ci]) out.push_back({&concepts_[index_.at(id)], class_best[ci]});
  }
  std::sort(out.begin(), out.end(), [](const LabelMatch& a, const LabelMatch& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.match->id < b.match->id;
  });
  return out;
}

std::set<std::string> Ontology::super_topics(std::string_view id, int depth) const {
  if (depth < 1) throw ValidationError("super_topics: depth must be >= 1");
  std::size_t start = index_of(id);
  std::set<std::string> out;
  std::vector<int> seen(concepts_.size(), -1);
  std::deque<std::pair<std::size_t, int>> queue{{start, 0}};
  seen[start] = 0;
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == depth) continue;
    for (std::size_t p : parents_[v]) {
      if (seen[p] != -1) continue;
      seen[p] = d + 1;
      out.insert(concepts_[p].id);
      queue.emplace_back(p, d + 1);
    }
  }
  return out;
}

const std::string& Ontology::representative(std::string_view id) const {
  return classes_[class_of_[index_of(id)]].front();
}

const std::vector<std::string>& Ontology::equivalence_class(std::string_view id) const {
  return classes_[class_of_[index_of(id)]];
}

}  // namespace skillmatch::onto
