#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "skillmatch/culture.hpp"
#include "skillmatch/error.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace skillmatch;
using namespace skillmatch::culture;

namespace {

CultureProfile from_values(std::array<double, kPoles> v) {
  CultureProfile p;
  p.pole_values = v;
  return p;
}

}  // namespace

TEST_CASE("shipped culture graph") {
  auto cg = CultureGraph::load(testsupport::data_dir() / "culture_graph.json");
  REQUIRE(cg.dimensions().size() == 6);
  for (std::size_t d = 0; d < 6; ++d) CHECK(cg.dimensions()[d].name == kDimensionNames[d]);
  const auto& pd = cg.dimensions()[0];
  std::vector<std::string> small, large;
  for (const auto& desc : pd.poles[0].descriptors) small.push_back(desc.name);
  for (const auto& desc : pd.poles[1].descriptors) large.push_back(desc.name);
  CHECK(small == std::vector<std::string>{"decentralization", "management by experience", "autonomy of employee",
                                          "pragmatic superior relationships", "no privileges"});
  CHECK(large == std::vector<std::string>{"centralization", "management by rules", "order directed employee",
                                          "emotional superior relationships", "privileges"});
  CHECK(cg.pole_name(0) == "Power Distance / small power distance");
}

TEST_CASE("culture graph validation") {
  testsupport::OrthogonalCulture o;
  auto j = o.graph.to_json();
  CHECK_NOTHROW(CultureGraph::from_json(j));

  auto five = j;
  five.erase(std::string(kDimensionNames[5]));
  CHECK_THROWS_AS(CultureGraph::from_json(five), ValidationError);

  auto empty_terms = j;
  empty_terms[std::string(kDimensionNames[0])]["pole0"]["first"] = nlohmann::ordered_json::array();
  CHECK_THROWS_AS(CultureGraph::from_json(empty_terms), ValidationError);

  auto empty_pole = j;
  empty_pole[std::string(kDimensionNames[1])]["pole2"] = nlohmann::ordered_json::object();
  CHECK_THROWS_AS(CultureGraph::from_json(empty_pole), ValidationError);

  auto three_poles = j;
  three_poles[std::string(kDimensionNames[2])]["extra"] = {{"x", {"y"}}};
  CHECK_THROWS_AS(CultureGraph::from_json(three_poles), ValidationError);
}

TEST_CASE("orthogonal fixture isolates each pole") {
  testsupport::OrthogonalCulture o;
  for (std::size_t i = 0; i < kPoles; ++i) {
    auto p = profile(o.pole_text(i), o.graph, o.vectors, testsupport::analyzer());
    CHECK(p.pole_values[i] >= 0.99);
    CHECK(p.pole_values[i ^ 1u] <= 0.01);
    for (std::size_t k = 0; k < kPoles; ++k) {
      if (k != i) CHECK(p.pole_values[k] == 0.0);
    }
    CHECK(p.coverage == 1.0);
  }
}

TEST_CASE("profile errors") {
  testsupport::OrthogonalCulture o;
  const auto& a = testsupport::analyzer();
  CHECK_THROWS_AS(profile("", o.graph, o.vectors, a), ValidationError);
  CHECK_THROWS_AS(profile("the and of", o.graph, o.vectors, a), ValidationError);
  CHECK_THROWS_AS(profile("unknown vocabulary only", o.graph, o.vectors, a), ValidationError);
}

TEST_CASE("profile depends only on the set of content words") {
  testsupport::OrthogonalCulture o;
  const auto& a = testsupport::analyzer();
  std::vector<std::string> words{"w0a", "w3b", "w3c", "w7a", "filler", "w11c", "unknownword"};
  std::mt19937_64 rng(37);
  auto join = [](const std::vector<std::string>& ws) {
    std::string s;
    for (const auto& w : ws) s += w + " ";
    return s;
  };
  auto base = profile(join(words), o.graph, o.vectors, a);
  for (int t = 0; t < 50; ++t) {
    std::shuffle(words.begin(), words.end(), rng);
    auto text = join(words);
    CHECK(profile(text, o.graph, o.vectors, a) == base);
    CHECK(profile(text + " the " + text, o.graph, o.vectors, a) == base);
  }
}

TEST_CASE("profiling the demo documents is deterministic and bounded") {
  auto cg = CultureGraph::load(testsupport::data_dir() / "culture_graph.json");
  auto vs = embed::VectorStore::load(testsupport::demo_dir() / "vectors.txt");
  std::string text = "We offer a flat hierarchy, employee autonomy and open communication.";
  auto p1 = profile(text, cg, vs, testsupport::analyzer());
  auto p2 = profile(text, cg, vs, testsupport::analyzer());
  CHECK(p1 == p2);
  for (double v : p1.pole_values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(p1.pole_values[0] > p1.pole_values[1]);
}

TEST_CASE("culture_match examples") {
  std::array<double, kPoles> zeros{}, ones{}, first{};
  ones.fill(1.0);
  first[0] = 1.0;
  auto z = from_values(zeros), o = from_values(ones), f = from_values(first);
  CHECK(culture_match(o, o) == 1.0);
  CHECK(culture_match(z, o) == 0.0);
  CHECK(culture_match(f, z) == doctest::Approx(1.0 - 1.0 / std::sqrt(12.0)).epsilon(1e-15));
  CHECK(culture_match(f, z) == doctest::Approx(0.7113).epsilon(1e-4));
}

TEST_CASE("culture_match properties") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    std::array<double, kPoles> a{}, b{};
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    auto pa = from_values(a), pb = from_values(b);
    double m = culture_match(pa, pb);
    CHECK(m == culture_match(pb, pa));
    CHECK(culture_match(pa, pa) == 1.0);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
    // Pushing one coordinate of b further from a never raises the match.
    std::size_t i = rng() % kPoles;
    auto c = b;
    c[i] = b[i] >= a[i] ? std::min(1.0, b[i] + u(rng) * 0.5) : std::max(0.0, b[i] - u(rng) * 0.5);
    CHECK(culture_match(pa, from_values(c)) <= m + 1e-15);
  }
}

TEST_CASE("pole table rows") {
  testsupport::OrthogonalCulture o;
  auto p = profile(o.pole_text(0), o.graph, o.vectors, testsupport::analyzer());
  auto q = profile(o.pole_text(1), o.graph, o.vectors, testsupport::analyzer());
  auto rows = pole_table(o.graph, p, q);
  REQUIRE(rows.size() == kPoles);
  CHECK(rows[0]["dimension"] == std::string(kDimensionNames[0]));
  CHECK(rows[0]["delta"].get<double>() == doctest::Approx(1.0));
  CHECK(rows[1]["delta"].get<double>() == doctest::Approx(-1.0));
}
