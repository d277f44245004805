#include "skillmatch/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "skillmatch/error.hpp"

#ifndef SKILLMATCH_DATA_DIR
#define SKILLMATCH_DATA_DIR "data"
#endif

namespace skillmatch {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(where + ": '" + s + "' is not a number");
  return v;
}

std::vector<double> parse_vector(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), where));
  return out;
}

}  // namespace

fs::path bundled_data_dir() {
  if (const char* env = std::getenv("SKILLMATCH_DATA_DIR"); env && *env) return env;
  return SKILLMATCH_DATA_DIR;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.data_dir = bundled_data_dir();
  c.culture_graph_path = c.data_dir / "culture_graph.json";
  c.ladder_path = c.data_dir / "degree_ladder.json";
  return c;
}

RunConfig RunConfig::parse(const std::string& content, const fs::path& base_dir, const std::string& origin) {
  RunConfig c = defaults();
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  auto resolve = [&](const std::string& v) {
    fs::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto where = origin + ":" + std::to_string(line_no);
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    auto key = trim(t.substr(0, eq));
    auto value = trim(t.substr(eq + 1));
    if (key == "store_dir") {
      c.store_dir = resolve(value);
    } else if (key == "data_dir") {
      c.data_dir = resolve(value);
    } else if (key == "general_ontology") {
      c.general_ontology_path = resolve(value);
    } else if (key == "domain_ontology") {
      c.domain_ontology_path = resolve(value);
    } else if (key == "culture_graph") {
      c.culture_graph_path = resolve(value);
    } else if (key == "vectors") {
      c.vectors_path = resolve(value);
    } else if (key == "ladder") {
      c.ladder_path = resolve(value);
    } else if (key == "weights") {
      try {
        c.weights = rank::InterestWeights::parse(value);
      } catch (const ValidationError& e) {
        throw ParseError(where + ": " + e.what());
      }
    } else if (key == "lambda") {
      c.lambda = to_double(value, where);
    } else if (key == "profiles") {
      // Category boundaries separated by ';', each a comma list over the four axes.
      c.profiles.clear();
      std::stringstream ss(value);
      std::string prof;
      while (std::getline(ss, prof, ';')) c.profiles.push_back(parse_vector(trim(prof), where));
    } else if (key == "threads") {
      int n = static_cast<int>(to_double(value, where));
      if (n < 1) throw ParseError(where + ": threads must be >= 1");
      c.threads = static_cast<unsigned>(n);
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse(buf.str(), base, path.string());
}

fs::path RunConfig::path_of(const std::string& key) const {
  if (key == "data_dir") return data_dir;
  if (key == "general_ontology") return general_ontology_path;
  if (key == "domain_ontology") return domain_ontology_path;
  if (key == "culture_graph") return culture_graph_path;
  if (key == "vectors") return vectors_path;
  if (key == "ladder") return ladder_path;
  if (key == "store_dir") return store_dir;
  throw ValidationError("unknown config key '" + key + "'");
}

void RunConfig::require(const std::vector<std::string>& keys) const {
  for (const auto& k : keys) {
    auto p = path_of(k);
    if (p.empty()) throw NotFoundError("config: '" + k + "' is not set");
    if (!fs::exists(p)) throw NotFoundError("config: " + k + " " + p.string() + " does not exist");
  }
}

}  // namespace skillmatch
