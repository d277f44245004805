#include "skillmatch/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

#include "skillmatch/error.hpp"

namespace skillmatch::taxonomy {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Uniform double in [0,1) from raw engine output; avoids library-specific distributions.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Point {
  std::string ngram;
  embed::Vector v;
};

}  // namespace

ConceptCandidateTable harvest_candidates(std::span<const docs::Document> corpus, std::size_t top_n,
                                         const text::Analyzer& analyzer) {
  if (corpus.empty()) throw ValidationError("harvest_candidates: empty corpus");
  if (top_n == 0) throw ValidationError("harvest_candidates: top_n must be >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& [name, body] : doc.sections) {
      for (auto& g : text::ngrams(analyzer.tokenize(body), 3)) ++counts[std::move(g.text)];
    }
  }
  ConceptCandidateTable t;
  t.corpus_size = corpus.size();
  t.entries.reserve(counts.size());
  for (auto& [gram, c] : counts) t.entries.push_back({gram, c});
  std::sort(t.entries.begin(), t.entries.end(), [](const CandidateCount& a, const CandidateCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.ngram < b.ngram;
  });
  if (t.entries.size() > top_n) t.entries.resize(top_n);
  return t;
}

ClusterSet cluster_candidates(const ConceptCandidateTable& table, const embed::VectorStore& vs, std::size_t k,
                              std::uint64_t seed) {
  if (k == 0) throw ValidationError("cluster_candidates: k must be >= 1");
  ClusterSet cs;
  cs.k = k;
  std::vector<Point> pts;
  for (const auto& e : table.entries) {
    auto pv = embed::phrase_vector(e.ngram, vs);
    if (!pv) {
      cs.excluded.push_back(e.ngram);
      continue;
    }
    pts.push_back({e.ngram, std::move(pv->vector)});
  }
  if (pts.empty()) throw ValidationError("cluster_candidates: no candidate has a vector");
  if (k > pts.size()) {
    throw ValidationError("cluster_candidates: k=" + std::to_string(k) + " exceeds the " +
                          std::to_string(pts.size()) + " vectorizable candidates");
  }
  const std::size_t n = pts.size();

  // k-means++ seeding.
  std::mt19937_64 rng(seed);
  std::vector<embed::Vector> centroids;
  std::vector<bool> chosen(n, false);
  std::size_t first = static_cast<std::size_t>(rng() % n);
  centroids.push_back(pts[first].v);
  chosen[first] = true;
  std::vector<double> d2(n);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) d2[i] = std::min(d2[i], squared_distance(pts[i].v, c));
      if (chosen[i]) d2[i] = 0.0;
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double target = unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] == 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Remaining points coincide with centroids; take the first unused one.
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    centroids.push_back(pts[pick].v);
  }

  std::vector<std::size_t> assign(n, 0);
  const std::size_t dim = vs.dim();
  for (cs.iterations = 1; cs.iterations <= kMaxIterations; ++cs.iterations) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        double d = squared_distance(pts[i].v, centroids[c]);
        if (d < best) {
          best = d;
          assign[i] = c;
        }
      }
    }
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : assign) ++sizes[a];
    // Repair empty clusters by moving the point farthest from the largest cluster's centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t largest = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != largest) continue;
        double d = squared_distance(pts[i].v, centroids[largest]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      assign[far] = c;
      --sizes[largest];
      ++sizes[c];
    }
    std::vector<embed::Vector> next(k, embed::Vector(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) next[assign[i]][d] += pts[i].v[d];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (auto& x : next[c]) x /= static_cast<double>(sizes[c]);
      shift = std::max(shift, std::sqrt(squared_distance(next[c], centroids[c])));
    }
    centroids = std::move(next);
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) objective += squared_distance(pts[i].v, centroids[assign[i]]);
    cs.objective.push_back(objective);
    if (shift < kConvergence) break;
  }
  cs.iterations = std::min(cs.iterations, kMaxIterations);

  std::vector<Cluster> clusters(k);
  std::vector<std::size_t> first_member(k, n);
  for (std::size_t c = 0; c < k; ++c) clusters[c].centroid = centroids[c];
  std::vector<double> nearest(k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    auto& cl = clusters[assign[i]];
    cl.members.push_back(pts[i].ngram);
    first_member[assign[i]] = std::min(first_member[assign[i]], i);
    double d = squared_distance(pts[i].v, centroids[assign[i]]);
    if (d < nearest[assign[i]] || (d == nearest[assign[i]] && pts[i].ngram < cl.representative)) {
      nearest[assign[i]] = d;
      cl.representative = pts[i].ngram;
    }
  }
  std::vector<std::size_t> order(k);
  for (std::size_t c = 0; c < k; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return first_member[a] < first_member[b]; });
  for (auto c : order) cs.clusters.push_back(std::move(clusters[c]));
  return cs;
}

onto::Ontology emit_draft_ontology(const ClusterSet& cs) {
  if (cs.clusters.empty()) throw ValidationError("emit_draft_ontology: no clusters");
  std::vector<onto::Concept> concepts;
  std::vector<onto::Edge> edges;
  for (std::size_t c = 0; c < cs.clusters.size(); ++c) {
    const auto& cl = cs.clusters[c];
    if (cl.members.empty()) throw ValidationError("emit_draft_ontology: empty cluster");
    if (cl.members.size() == 1) {
      concepts.push_back({cl.members.front(), cl.members.front(), {}});
      continue;
    }
    char id[32];
    std::snprintf(id, sizeof id, "cluster-%02zu", c + 1);
    concepts.push_back({id, cl.representative, {}});
    for (const auto& m : cl.members) {
      concepts.push_back({m, m, {}});
      edges.push_back({m, onto::Relation::super_topic, id});
    }
  }
  return onto::Ontology::build(std::move(concepts), std::move(edges));
}

}  // namespace skillmatch::taxonomy
