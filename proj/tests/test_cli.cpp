#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skillmatch/cli.hpp"
#include "support.hpp"

using namespace skillmatch;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

// Runs the CLI against the demo configuration and a private store.
class Cli {
 public:
  Result operator()(std::vector<std::string> args) const {
    std::vector<std::string> full{"--config", (testsupport::demo_dir() / "skillmatch.conf").string(), "--store",
                                  store_.path().string()};
    full.insert(full.end(), args.begin(), args.end());
    std::ostringstream out, err;
    int code = cli::run(full, out, err);
    return {code, out.str(), err.str()};
  }

  void ingest_demo() const {
    REQUIRE((*this)({"ingest", (testsupport::demo_dir() / "cvs").string()}).code == 0);
    REQUIRE((*this)({"ingest", (testsupport::demo_dir() / "jobs").string()}).code == 0);
  }

 private:
  testsupport::TempDir store_;
};

void write_post(const fs::path& path, int i) {
  nlohmann::json j{{"id", "post-" + std::to_string(i)},
                   {"kind", "job_post"},
                   {"sections",
                    {{"summary", "Analyst role number " + std::to_string(i)},
                     {"skills", "Python, SQL"},
                     {"experience", "Data pipelines."}}},
                   {"required_skills", {"Python"}}};
  std::ofstream(path) << j.dump(2);
}

}  // namespace

TEST_CASE("ingest a directory of job posts") {
  testsupport::TempDir posts;
  for (int i = 0; i < 11; ++i) write_post(posts.path() / ("p" + std::to_string(i) + ".json"), i);
  Cli cli;
  auto r = cli({"ingest", posts.path().string(), "--kind", "job_post"});
  REQUIRE(r.code == cli::kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["stored"].size() == 11);
  CHECK(j["failures"].empty());
  for (const auto& s : j["stored"]) CHECK(s["status"] == "stored");

  auto again = nlohmann::json::parse(cli({"ingest", posts.path().string()}).out);
  for (const auto& s : again["stored"]) CHECK(s["status"] == "unchanged");
}

TEST_CASE("ingest keeps going past invalid files") {
  testsupport::TempDir posts;
  for (int i = 0; i < 4; ++i) write_post(posts.path() / ("p" + std::to_string(i) + ".json"), i);
  std::ofstream(posts.path() / "p2.json") << R"({"kind":"job_post","sections":{}})";
  Cli cli;
  auto r = cli({"ingest", posts.path().string()});
  CHECK(r.code == cli::kExitData);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["stored"].size() == 3);
  REQUIRE(j["failures"].size() == 1);
  CHECK(j["failures"][0]["file"].get<std::string>().find("p2.json") != std::string::npos);

  CHECK(cli({"ingest", posts.path().string(), "--kind", "cv"}).code == cli::kExitData);
  CHECK(cli({"ingest", posts.path().string(), "--kind", "resume"}).code == cli::kExitUsage);
  CHECK(cli({"ingest", (posts.path() / "missing.json").string()}).code == cli::kExitData);
}

TEST_CASE("match") {
  Cli cli;
  cli.ingest_demo();
  auto r = cli({"match", "--cv", "cv-tech-01", "--job", "job-tech-01"});
  REQUIRE(r.code == cli::kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "scored");
  CHECK(j.contains("MRValues"));
  CHECK_FALSE(j["explanation"].contains("concepts"));

  auto ex = nlohmann::json::parse(cli({"match", "--cv", "cv-tech-01", "--job", "job-tech-01", "--explain"}).out);
  CHECK(ex["explanation"].contains("concepts"));
  CHECK(ex["MRValues"] == j["MRValues"]);

  auto rej = cli({"match", "--cv", "cv-biz-04", "--job", "job-tech-01"});
  CHECK(rej.code == cli::kExitOk);
  auto rj = nlohmann::json::parse(rej.out);
  CHECK(rj["verdict"] == "rejected_education");
  CHECK(rj["rejection_reason"].get<std::string>().rfind("not qualified, reason: ", 0) == 0);

  CHECK(cli({"match", "--cv", "nobody", "--job", "job-tech-01"}).code == cli::kExitData);
  CHECK(cli({"match", "--cv", "cv-tech-01"}).code == cli::kExitUsage);
  CHECK(cli({"match", "--cv", "cv-tech-01", "--job", "job-tech-01", "--weights", "skills=9"}).code ==
        cli::kExitUsage);
}

TEST_CASE("rank") {
  Cli cli;
  auto empty = cli({"rank", "--job", "job-tech-01"});
  CHECK(empty.code == cli::kExitData);  // the job itself is not stored yet

  cli.ingest_demo();
  auto a = cli({"rank", "--job", "job-tech-01", "--format", "csv"});
  auto b = cli({"rank", "--job", "job-tech-01", "--format", "csv", "--threads", "4"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("ID,DomainSkillsMatch,SkillsMatch,CultureMatch,RequiredSkillsMatch,MRValues\ncv-tech-", 0) == 0);

  auto j = nlohmann::json::parse(cli({"rank", "--job", "job-tech-01"}).out);
  CHECK(j["ranking"].size() == 9);
  CHECK(j["rejected"].size() == 1);

  auto subset = nlohmann::json::parse(cli({"rank", "--job", "job-tech-01", "--cvs", "cv-biz-04"}).out);
  CHECK(subset["ranking"].empty());
  CHECK(subset["rejected"].size() == 1);

  CHECK(cli({"rank", "--job", "job-tech-01", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(cli({"rank", "--job", "job-tech-01", "--cvs", "ghost"}).code == cli::kExitData);
}

TEST_CASE("rank with no stored CVs is an empty table") {
  Cli cli;
  REQUIRE(cli({"ingest", (testsupport::demo_dir() / "jobs").string()}).code == 0);
  auto r = cli({"rank", "--job", "job-tech-01", "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
}

TEST_CASE("extract and similarity") {
  Cli cli;
  cli.ingest_demo();
  auto g = cli({"extract", "--text", "We use machine learning and Python."});
  REQUIRE(g.code == cli::kExitOk);
  auto j = nlohmann::json::parse(g.out);
  CHECK(j.contains("nodes"));
  auto t = nlohmann::json::parse(cli({"extract", "--doc", "job-tech-01", "--trace"}).out);
  CHECK(t.contains("trace"));
  CHECK(cli({"extract"}).code == cli::kExitUsage);
  CHECK(cli({"extract", "--text", "x", "--doc", "job-tech-01"}).code == cli::kExitUsage);
  CHECK(cli({"extract", "--text", "x", "--ontology", "other"}).code == cli::kExitUsage);

  auto s = cli({"similarity", "--job", "job-tech-01", "--cvs", "cv-tech-01,cv-biz-01"});
  REQUIRE(s.code == cli::kExitOk);
  CHECK(s.out.rfind("ID,skills,experience\ncv-tech-01,", 0) == 0);
}

TEST_CASE("taxonomy build and ontology export") {
  Cli cli;
  testsupport::TempDir out;
  auto csv = out.path() / "draft.csv";
  auto r = cli({"taxonomy", "build", "--corpus", (testsupport::demo_dir() / "jobs").string(), "--vectors",
                (testsupport::demo_dir() / "vectors.txt").string(), "--k", "3", "--seed", "7", "--out",
                csv.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(fs::exists(csv));
  std::ostringstream a;
  a << std::ifstream(csv).rdbuf();
  REQUIRE(cli({"taxonomy", "build", "--corpus", (testsupport::demo_dir() / "jobs").string(), "--vectors",
               (testsupport::demo_dir() / "vectors.txt").string(), "--k", "3", "--seed", "7", "--out",
               csv.string()})
              .code == 0);
  std::ostringstream b;
  b << std::ifstream(csv).rdbuf();
  CHECK(a.str() == b.str());
  CHECK(cli({"taxonomy", "build", "--corpus", "x", "--vectors", "y", "--out", "z"}).code == cli::kExitUsage);

  auto e = cli({"ontology", "export", "--in", csv.string()});
  CHECK(e.code == cli::kExitOk);
  CHECK(e.out.rfind("source\trelation\ttarget\n", 0) == 0);
}

TEST_CASE("help and unknown commands") {
  Cli cli;
  CHECK(cli({"--help"}).code == cli::kExitOk);
  CHECK(cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(cli({}).code == cli::kExitUsage);
}
