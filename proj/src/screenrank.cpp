#include "skillmatch/screenrank.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <stdexcept>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "skillmatch/error.hpp"

namespace skillmatch::rank {

namespace {

// Lower-cased tokens of a degree string; dots are dropped so "M.Sc." reads as "msc".
std::vector<std::string> degree_tokens(std::string_view raw) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : raw) {
    if (c == '.') continue;
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '+' || u >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

void check_weights(std::span<const int> weights) {
  if (weights.empty() || weights.size() > kMaxCriteria) {
    throw ValidationError("interest weights: between 1 and " + std::to_string(kMaxCriteria) + " criteria required");
  }
  int total = 0;
  for (int w : weights) {
    if (w < 0 || w > kMaxInterest) throw ValidationError("interest weights must be integers in 0..3");
    total += w;
  }
  if (total == 0) throw ValidationError("interest weights: at least one axis must be > 0");
}

std::vector<double> normalized(std::span<const int> weights) {
  int total = 0;
  for (int w : weights) total += w;
  std::vector<double> out;
  out.reserve(weights.size());
  for (int w : weights) out.push_back(static_cast<double>(w) / static_cast<double>(total));
  return out;
}

ConceptOverlap overlap(const skills::ConceptGraph& cv, const skills::ConceptGraph& job) {
  ConceptOverlap o;
  for (const auto& [id, n] : job.nodes) (cv.nodes.count(id) ? o.matched : o.missing).push_back(id);
  for (const auto& [id, n] : cv.nodes) {
    if (!job.nodes.count(id)) o.extra.push_back(id);
  }
  return o;
}

nlohmann::json overlap_json(const ConceptOverlap& o) {
  return {{"matched", o.matched}, {"missing", o.missing}, {"extra", o.extra}};
}

nlohmann::json axes_json(const AxisScores& a) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kAxes; ++i) j[std::string(kAxisColumns[i])] = a[i];
  return j;
}

skills::ConceptGraph section_graph(const docs::Document& doc, const skills::ExtractionContext& ctx) {
  skills::ConceptGraph g;
  for (auto name : kSkillSections) g.merge(skills::extract(doc.section(name), ctx));
  return g;
}

std::string culture_text(const docs::Document& doc) {
  std::string out;
  for (const auto& [name, body] : doc.sections) {
    if (!out.empty()) out += '\n';
    out += body;
  }
  return out;
}

}  // namespace

DegreeLadder::DegreeLadder(std::vector<std::string> levels, std::map<std::string, std::string> equivalence) {
  if (levels.empty()) throw ValidationError("degree ladder: no levels");
  for (auto& l : levels) {
    l = join(degree_tokens(l), " ");
    if (l.empty()) throw ValidationError("degree ladder: empty level name");
    if (std::find(levels_.begin(), levels_.end(), l) != levels_.end()) {
      throw ValidationError("degree ladder: duplicate level '" + l + "'");
    }
    levels_.push_back(l);
    lookup_[l] = levels_.size() - 1;
  }
  for (const auto& [raw, target] : equivalence) {
    auto key = join(degree_tokens(raw), " ");
    auto level = join(degree_tokens(target), " ");
    auto it = std::find(levels_.begin(), levels_.end(), level);
    if (it == levels_.end()) {
      throw ValidationError("degree ladder: '" + raw + "' maps to unknown level '" + target + "'");
    }
    if (key.empty()) throw ValidationError("degree ladder: empty equivalence key");
    lookup_[key] = static_cast<std::size_t>(it - levels_.begin());
  }
}

DegreeLadder DegreeLadder::from_json(const nlohmann::json& j) {
  try {
    return DegreeLadder(j.at("levels").get<std::vector<std::string>>(),
                        j.value("equivalence", std::map<std::string, std::string>{}));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("degree ladder: ") + e.what());
  }
}

DegreeLadder DegreeLadder::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open degree ladder " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::optional<std::size_t> DegreeLadder::level_of(std::string_view raw) const {
  auto tokens = degree_tokens(raw);
  if (tokens.empty()) return std::nullopt;
  if (auto it = lookup_.find(join(tokens, " ")); it != lookup_.end()) return it->second;
  std::optional<std::size_t> best;
  for (const auto& [key, level] : lookup_) {
    auto kt = degree_tokens(key);
    if (kt.size() > tokens.size()) continue;
    for (std::size_t s = 0; s + kt.size() <= tokens.size(); ++s) {
      if (std::equal(kt.begin(), kt.end(), tokens.begin() + static_cast<std::ptrdiff_t>(s))) {
        if (!best || level > *best) best = level;
        break;
      }
    }
  }
  return best;
}

EducationVerdict education_gate(const docs::Document& cv, const docs::Document& job, const DegreeLadder& ladder) {
  EducationVerdict v;
  for (const auto& e : job.education) {
    auto level = ladder.level_of(e.degree_raw);
    if (!level) {
      v.unmapped.push_back(e.degree_raw);
      continue;
    }
    if (!v.required_level || *level < *v.required_level) v.required_level = level;
  }
  for (const auto& e : cv.education) {
    auto level = ladder.level_of(e.degree_raw);
    if (!level) {
      v.unmapped.push_back(e.degree_raw);
      continue;
    }
    v.cv_level = std::max(v.cv_level, *level);
  }
  if (v.required_level && v.cv_level < *v.required_level) {
    v.pass = false;
    v.reason = "not qualified, reason: education level " + ladder.level_name(v.cv_level) + " is below required " +
               ladder.level_name(*v.required_level);
  }
  return v;
}

double& AxisScores::operator[](std::size_t i) {
  switch (i) {
    case 0:
      return skills;
    case 1:
      return domain_skills;
    case 2:
      return culture;
    case 3:
      return required_skills;
  }
  throw std::out_of_range("axis index");
}

InterestWeights InterestWeights::parse(std::string_view spec) {
  InterestWeights w;
  w.values.fill(0);
  std::set<std::size_t> seen;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    auto item = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    pos = comma == std::string_view::npos ? spec.size() + 1 : comma + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ValidationError("weights: expected axis=int, got '" + std::string(item) + "'");
    auto name = text::fold_case(item.substr(0, eq));
    auto value = std::string(item.substr(eq + 1));
    std::size_t axis = kAxes;
    for (std::size_t i = 0; i < kAxes; ++i) {
      if (name == kAxisKeys[i] || name == text::fold_case(kAxisColumns[i])) axis = i;
    }
    if (name == "domain_skills") axis = 1;
    if (name == "required_skills") axis = 3;
    if (axis == kAxes) throw ValidationError("weights: unknown axis '" + name + "'");
    if (!seen.insert(axis).second) throw ValidationError("weights: axis '" + name + "' given twice");
    if (value.size() != 1 || value[0] < '0' || value[0] > '3') {
      throw ValidationError("weights: '" + name + "' must be an integer in 0..3");
    }
    w.values[axis] = value[0] - '0';
  }
  w.validate();
  return w;
}

void InterestWeights::validate() const { check_weights(values); }

std::string InterestWeights::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kAxes; ++i) {
    if (i) out += ',';
    out += std::string(kAxisKeys[i]) + "=" + std::to_string(values[i]);
  }
  return out;
}

nlohmann::json InterestWeights::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kAxes; ++i) j[std::string(kAxisColumns[i])] = values[i];
  return j;
}

double mr_aggregate(std::span<const double> scores, std::span<const int> weights) {
  check_weights(weights);
  if (scores.size() != weights.size()) throw ValidationError("mr_aggregate: score and weight counts differ");
  // Normalizing first makes the result identical for proportional weight vectors.
  auto nw = normalized(weights);
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) total += nw[i] * scores[i];
  return total;
}

double mr_aggregate(const AxisScores& axes, const InterestWeights& w) {
  auto v = axes.values();
  return mr_aggregate(v, w.values);
}

std::size_t mr_assign(std::span<const double> scores, std::span<const int> weights,
                      const std::vector<std::vector<double>>& profiles, double lambda) {
  check_weights(weights);
  if (scores.size() != weights.size()) throw ValidationError("mr_assign: score and weight counts differ");
  if (!(lambda > 0.5 && lambda <= 1.0)) throw ValidationError("mr_assign: lambda must be in (0.5, 1]");
  for (std::size_t h = 0; h < profiles.size(); ++h) {
    if (profiles[h].size() != scores.size()) throw ValidationError("mr_assign: profile size mismatch");
    if (h == 0) continue;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!(profiles[h][i] > profiles[h - 1][i])) {
        throw ValidationError("mr_assign: profiles must be strictly increasing on every criterion");
      }
    }
  }
  int total = 0;
  for (int w : weights) total += w;
  const double needed = lambda * total;
  for (std::size_t h = profiles.size(); h-- > 0;) {
    int coalition = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= profiles[h][i]) coalition += weights[i];
    }
    // Integer coalition weight against lambda * total, tolerant of lambda's binary rounding.
    if (static_cast<double>(coalition) >= needed - 1e-9) return h + 1;
  }
  return 0;
}

RequiredSkillResult required_skill_score(const docs::Document& job, const skills::ConceptGraph& cv_graph,
                                         const onto::Ontology& o, double threshold) {
  RequiredSkillResult r;
  if (job.required_skills.empty()) return r;
  for (const auto& skill : job.required_skills) {
    bool hit = false;
    for (const auto& m : o.find_by_label(skill, threshold)) {
      if (cv_graph.nodes.count(o.representative(m.match->id))) {
        hit = true;
        break;
      }
    }
    (hit ? r.matched : r.missing).push_back(skill);
  }
  r.score = static_cast<double>(r.matched.size()) / static_cast<double>(job.required_skills.size());
  return r;
}

DocumentAnalysis analyze(const docs::Document& doc, const Resources& res) {
  DocumentAnalysis a;
  a.id = doc.id;
  a.general_graph = section_graph(doc, {res.analyzer, res.general, res.vectors});
  a.domain_graph = section_graph(doc, {res.analyzer, res.domain, res.vectors});
  try {
    a.culture = culture::profile(culture_text(doc), res.culture, res.vectors, res.analyzer);
  } catch (const ValidationError& e) {
    a.culture_error = e.what();
  }
  return a;
}

AxisScores score_axes(const DocumentAnalysis& cv, const DocumentAnalysis& job, const docs::Document& job_doc,
                      const Resources& res, RequiredSkillResult* required_detail) {
  AxisScores s;
  s.skills = ged::similarity(cv.general_graph, job.general_graph, res.costs).similarity;
  s.domain_skills = ged::similarity(cv.domain_graph, job.domain_graph, res.costs).similarity;
  s.culture = cv.culture && job.culture ? culture::culture_match(*cv.culture, *job.culture) : 0.0;
  auto req = required_skill_score(job_doc, cv.general_graph, res.general);
  s.required_skills = req.score;
  if (required_detail) *required_detail = std::move(req);
  return s;
}

MatchReport match_pair(const docs::Document& cv, const DocumentAnalysis& cv_analysis, const docs::Document& job,
                       const DocumentAnalysis& job_analysis, const InterestWeights& w, const Resources& res) {
  MatchReport r;
  r.cv_id = cv.id;
  r.job_id = job.id;
  r.weights = w;
  r.education = education_gate(cv, job, res.ladder);
  if (!r.education.pass) {
    r.verdict = Verdict::rejected_education;
    r.rejection_reason = r.education.reason;
    return r;
  }
  r.axes = score_axes(cv_analysis, job_analysis, job, res, &r.required);
  r.aggregate = mr_aggregate(r.axes, w);
  auto values = r.axes.values();
  r.category = mr_assign(values, w.values, res.profiles, res.lambda);
  r.skills_overlap = overlap(cv_analysis.general_graph, job_analysis.general_graph);
  r.domain_overlap = overlap(cv_analysis.domain_graph, job_analysis.domain_graph);
  if (cv_analysis.culture && job_analysis.culture) {
    r.culture_poles = culture::pole_table(res.culture, *cv_analysis.culture, *job_analysis.culture);
  } else {
    r.culture_note = !cv_analysis.culture_error.empty() ? "cv: " + cv_analysis.culture_error
                                                        : "job: " + job_analysis.culture_error;
  }
  r.cv_graph = cv_analysis.general_graph;
  r.job_graph = job_analysis.general_graph;
  return r;
}

MatchReport match_one(const docs::DocumentStore& store, std::string_view cv_id, std::string_view job_id,
                      const InterestWeights& w, const Resources& res) {
  w.validate();
  auto cv = store.get(cv_id);
  auto job = store.get(job_id);
  if (cv.kind != docs::Kind::cv) throw ValidationError("'" + cv.id + "' is not a cv");
  if (job.kind != docs::Kind::job_post) throw ValidationError("'" + job.id + "' is not a job post");
  if (!education_gate(cv, job, res.ladder).pass) return match_pair(cv, {}, job, {}, w, res);
  return match_pair(cv, analyze(cv, res), job, analyze(job, res), w, res);
}

nlohmann::json MatchReport::to_json(const DegreeLadder& ladder, bool explain) const {
  nlohmann::json j;
  j["cv_id"] = cv_id;
  j["job_id"] = job_id;
  j["verdict"] = verdict == Verdict::scored ? "scored" : "rejected_education";
  nlohmann::json edu{{"cv_level", ladder.level_name(education.cv_level)}, {"unmapped", education.unmapped}};
  edu["required_level"] = education.required_level ? nlohmann::json(ladder.level_name(*education.required_level))
                                                   : nlohmann::json(nullptr);
  j["education"] = std::move(edu);
  j["weights"] = weights.to_json();
  if (verdict == Verdict::rejected_education) {
    j["rejection_reason"] = rejection_reason;
    return j;
  }
  j["axes"] = axes_json(axes);
  j["MRValues"] = aggregate;
  j["category"] = category;
  nlohmann::json ex;
  ex["required_skills"] = {{"matched", required.matched}, {"missing", required.missing}};
  ex["culture_poles"] = culture_poles;
  if (!culture_note.empty()) ex["culture_note"] = culture_note;
  if (explain) {
    ex["concepts"] = {{"skills", overlap_json(skills_overlap)}, {"domain_skills", overlap_json(domain_overlap)}};
    ex["graphs"] = {{"cv", cv_graph.to_json()}, {"job", job_graph.to_json()}};
  }
  j["explanation"] = std::move(ex);
  return j;
}

std::vector<RankedEntry> rank_candidates(const std::vector<ScoredCandidate>& candidates, const InterestWeights& w,
                                         const Resources* res) {
  w.validate();
  std::vector<RankedEntry> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    RankedEntry e;
    e.cv_id = c.cv_id;
    e.axes = c.axes;
    e.aggregate = mr_aggregate(c.axes, w);
    if (res) {
      auto values = c.axes.values();
      e.category = mr_assign(values, w.values, res->profiles, res->lambda);
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
    return a.cv_id < b.cv_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

RankedList match_many(const docs::DocumentStore& store, const std::vector<std::string>& cv_ids,
                      std::string_view job_id, const InterestWeights& w, const Resources& res, unsigned threads) {
  w.validate();
  auto job = store.get(job_id);
  if (job.kind != docs::Kind::job_post) throw ValidationError("'" + job.id + "' is not a job post");
  std::vector<std::string> ids(cv_ids);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<docs::Document> cvs;
  cvs.reserve(ids.size());
  for (const auto& id : ids) {
    cvs.push_back(store.get(id));
    if (cvs.back().kind != docs::Kind::cv) throw ValidationError("'" + id + "' is not a cv");
  }

  RankedList list;
  list.job_id = job.id;
  list.weights = w;
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < cvs.size(); ++i) {
    auto v = education_gate(cvs[i], job, res.ladder);
    if (v.pass) {
      survivors.push_back(i);
    } else {
      list.rejected.push_back({cvs[i].id, v.reason});
    }
  }
  if (survivors.empty()) return list;

  auto job_analysis = analyze(job, res);
  std::vector<ScoredCandidate> scored(survivors.size());
  auto work = [&](std::size_t k) {
    const auto& cv = cvs[survivors[k]];
    scored[k] = {cv.id, score_axes(analyze(cv, res), job_analysis, job, res)};
  };
  unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(survivors.size())));
  if (n_threads == 1) {
    for (std::size_t k = 0; k < survivors.size(); ++k) work(k);
  } else {
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < survivors.size(); k += n_threads) work(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  list.ranking = rank_candidates(scored, w, &res);
  return list;
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::json RankedList::to_json() const {
  nlohmann::json j;
  j["job_id"] = job_id;
  j["weights"] = weights.to_json();
  auto rows = nlohmann::json::array();
  for (const auto& e : ranking) {
    nlohmann::json row{{"rank", e.rank}, {"ID", e.cv_id}};
    for (std::size_t i = 0; i < kAxes; ++i) row[std::string(kAxisColumns[i])] = e.axes[i];
    row["MRValues"] = e.aggregate;
    row["category"] = e.category;
    rows.push_back(std::move(row));
  }
  j["ranking"] = std::move(rows);
  auto rej = nlohmann::json::array();
  for (const auto& r : rejected) rej.push_back({{"ID", r.cv_id}, {"reason", r.reason}});
  j["rejected"] = std::move(rej);
  return j;
}

void RankedList::write_csv(std::ostream& out) const {
  out << "ID,DomainSkillsMatch,SkillsMatch,CultureMatch,RequiredSkillsMatch,MRValues\n";
  for (const auto& e : ranking) {
    out << csv_field(e.cv_id) << ',' << format_score(e.axes.domain_skills) << ',' << format_score(e.axes.skills) << ','
        << format_score(e.axes.culture) << ',' << format_score(e.axes.required_skills) << ','
        << format_score(e.aggregate) << '\n';
  }
  if (!rejected.empty()) {
    out << "\nRejected,Reason\n";
    for (const auto& r : rejected) out << csv_field(r.cv_id) << ',' << csv_field(r.reason) << '\n';
  }
}

}  // namespace skillmatch::rank
