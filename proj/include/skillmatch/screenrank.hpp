#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skillmatch/culture.hpp"
#include "skillmatch/docstore.hpp"
#include "skillmatch/embeddings.hpp"
#include "skillmatch/graphsim.hpp"
#include "skillmatch/ontology.hpp"
#include "skillmatch/skillgraph.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::rank {

// Ordered education levels with an equivalence table from raw degree strings.
class DegreeLadder {
 public:
  DegreeLadder(std::vector<std::string> levels, std::map<std::string, std::string> equivalence);

  // {"levels": [...lowest to highest...], "equivalence": {"msc": "master", ...}}
  static DegreeLadder load(const std::filesystem::path& path);
  static DegreeLadder from_json(const nlohmann::json& j);

  // Case-insensitive. Exact key first, then the highest level whose key occurs
  // as a whole-word phrase inside the raw string. nullopt when unmappable.
  std::optional<std::size_t> level_of(std::string_view raw) const;

  const std::string& level_name(std::size_t level) const { return levels_.at(level); }
  std::size_t size() const { return levels_.size(); }

 private:
  std::vector<std::string> levels_;
  std::map<std::string, std::size_t> lookup_;  // normalized key -> level
};

struct EducationVerdict {
  bool pass = true;
  std::size_t cv_level = 0;
  std::optional<std::size_t> required_level;
  std::vector<std::string> unmapped;  // raw degree strings that matched no level
  std::string reason;                 // set when rejected
};

// Best CV degree must reach the lowest degree the job lists. Unmappable CV
// degrees count as the bottom level; a job with no mappable degree admits everyone.
EducationVerdict education_gate(const docs::Document& cv, const docs::Document& job, const DegreeLadder& ladder);

inline constexpr std::size_t kAxes = 4;
inline constexpr std::size_t kMaxCriteria = 7;
inline constexpr int kMaxInterest = 3;

// Report column names, in axis order.
inline constexpr std::array<std::string_view, kAxes> kAxisColumns = {"SkillsMatch", "DomainSkillsMatch", "CultureMatch",
                                                                     "RequiredSkillsMatch"};
// Names accepted by --weights, in axis order.
inline constexpr std::array<std::string_view, kAxes> kAxisKeys = {"skills", "domain", "culture", "required"};

struct AxisScores {
  double skills = 0.0;
  double domain_skills = 0.0;
  double culture = 0.0;
  double required_skills = 0.0;

  std::array<double, kAxes> values() const { return {skills, domain_skills, culture, required_skills}; }
  double& operator[](std::size_t i);
  double operator[](std::size_t i) const { return values()[i]; }
};

// Recruiter interest per axis: 0 not interested .. 3 very interested.
struct InterestWeights {
  std::array<int, kAxes> values{2, 2, 2, 0};

  // "skills=2,domain=2,culture=2,required=0"; omitted axes are 0.
  static InterestWeights parse(std::string_view spec);
  void validate() const;
  std::string to_string() const;
  nlohmann::json to_json() const;
};

// Sum of weights[i] / sum(weights) * scores[i]. At most seven criteria, weights in 0..3.
double mr_aggregate(std::span<const double> scores, std::span<const int> weights);
double mr_aggregate(const AxisScores& axes, const InterestWeights& w);

// Majority-rule sorting: the highest category h whose lower boundary profile
// h-1 is met on a weight coalition >= lambda. Categories run 0..profiles.size().
std::size_t mr_assign(std::span<const double> scores, std::span<const int> weights,
                      const std::vector<std::vector<double>>& profiles, double lambda);

struct RequiredSkillResult {
  double score = 1.0;
  std::vector<std::string> matched;
  std::vector<std::string> missing;
};

// Fraction of the job's required skills whose concept (or an equivalent) is in the CV graph.
RequiredSkillResult required_skill_score(const docs::Document& job, const skills::ConceptGraph& cv_graph,
                                         const onto::Ontology& o, double threshold = text::kLabelMatchThreshold);

struct Resources {
  const text::Analyzer& analyzer;
  const onto::Ontology& general;
  const onto::Ontology& domain;
  const culture::CultureGraph& culture;
  const embed::VectorStore& vectors;
  const DegreeLadder& ladder;
  ged::EditCostModel costs{};
  std::vector<std::vector<double>> profiles{{0.5, 0.5, 0.5, 0.5}};
  double lambda = 0.6;
};

// Sections feeding the skill graphs; culture reads every section.
inline constexpr std::array<std::string_view, 2> kSkillSections = {"skills", "experience"};

// Per-document extraction results, computed once and reused across pairings.
struct DocumentAnalysis {
  std::string id;
  skills::ConceptGraph general_graph;
  skills::ConceptGraph domain_graph;
  std::optional<culture::CultureProfile> culture;
  std::string culture_error;
};

DocumentAnalysis analyze(const docs::Document& doc, const Resources& res);

AxisScores score_axes(const DocumentAnalysis& cv, const DocumentAnalysis& job, const docs::Document& job_doc,
                      const Resources& res, RequiredSkillResult* required_detail = nullptr);

struct ConceptOverlap {
  std::vector<std::string> matched;
  std::vector<std::string> missing;  // in the job graph only
  std::vector<std::string> extra;    // in the CV graph only
};

enum class Verdict { rejected_education, scored };

struct MatchReport {
  std::string cv_id;
  std::string job_id;
  Verdict verdict = Verdict::scored;
  std::string rejection_reason;
  EducationVerdict education;
  AxisScores axes;
  double aggregate = 0.0;
  std::size_t category = 0;
  InterestWeights weights;
  RequiredSkillResult required;
  ConceptOverlap skills_overlap;
  ConceptOverlap domain_overlap;
  nlohmann::json culture_poles = nlohmann::json::array();
  std::string culture_note;
  skills::ConceptGraph cv_graph;
  skills::ConceptGraph job_graph;

  // Concept lists and graphs are included only with `explain`.
  nlohmann::json to_json(const DegreeLadder& ladder, bool explain) const;
};

MatchReport match_pair(const docs::Document& cv, const DocumentAnalysis& cv_analysis, const docs::Document& job,
                       const DocumentAnalysis& job_analysis, const InterestWeights& w, const Resources& res);

MatchReport match_one(const docs::DocumentStore& store, std::string_view cv_id, std::string_view job_id,
                      const InterestWeights& w, const Resources& res);

struct RankedEntry {
  std::size_t rank = 0;  // 1-based
  std::string cv_id;
  AxisScores axes;
  double aggregate = 0.0;
  std::size_t category = 0;
};

struct Rejection {
  std::string cv_id;
  std::string reason;
};

struct RankedList {
  std::string job_id;
  InterestWeights weights;
  std::vector<RankedEntry> ranking;
  std::vector<Rejection> rejected;

  nlohmann::json to_json() const;
  void write_csv(std::ostream& out) const;
};

struct ScoredCandidate {
  std::string cv_id;
  AxisScores axes;
};

// Aggregate descending, ties by cv id ascending.
std::vector<RankedEntry> rank_candidates(const std::vector<ScoredCandidate>& candidates, const InterestWeights& w,
                                         const Resources* res = nullptr);

// Education filter, then scoring and ranking of the survivors. `threads` > 1
// scores candidates concurrently; output does not depend on it.
RankedList match_many(const docs::DocumentStore& store, const std::vector<std::string>& cv_ids,
                      std::string_view job_id, const InterestWeights& w, const Resources& res, unsigned threads = 1);

std::string format_score(double v);

}  // namespace skillmatch::rank
