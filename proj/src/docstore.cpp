#include "skillmatch/docstore.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "skillmatch/error.hpp"
#include "skillmatch/textkit.hpp"

namespace skillmatch::docs {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kContentIdBytes = 16;

std::string sha256_hex(std::string_view data, std::size_t bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < std::min<std::size_t>(bytes, len); ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ValidationError("field '" + field + "': " + msg);
}

std::string require_string(const nlohmann::json& j, const std::string& field) {
  if (!j.is_string()) field_error(field, "expected a string");
  return j.get<std::string>();
}

}  // namespace

std::string_view to_string(Kind k) { return k == Kind::cv ? "cv" : "job_post"; }

Kind kind_from_string(std::string_view s) {
  if (s == "cv") return Kind::cv;
  if (s == "job_post") return Kind::job_post;
  throw ValidationError("field 'kind': expected \"cv\" or \"job_post\", got \"" + std::string(s) + "\"");
}

const std::string& Document::section(std::string_view name) const {
  static const std::string empty;
  auto it = sections.find(std::string(name));
  return it == sections.end() ? empty : it->second;
}

bool is_valid_id(std::string_view id) {
  if (id.empty() || id.size() > 200 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '.' || c == '_' ||
           c == '-';
  });
}

void Document::validate() const {
  if (!id.empty() && !is_valid_id(id)) field_error("id", "must match [A-Za-z0-9._-]+ and not start with '.'");
  for (auto name : kRequiredSections) {
    if (!sections.count(std::string(name))) field_error("sections." + std::string(name), "missing");
  }
  for (const auto& [name, body] : sections) {
    if (name.empty()) field_error("sections", "section names must be nonempty");
    if (!text::is_valid_utf8(body)) field_error("sections." + name, "not valid UTF-8");
  }
  for (std::size_t i = 0; i < education.size(); ++i) {
    if (education[i].degree_raw.empty()) field_error("education[" + std::to_string(i) + "].degree", "must be nonempty");
  }
  if (kind == Kind::cv && !required_skills.empty()) field_error("required_skills", "must be empty for a cv");
  for (std::size_t i = 0; i < required_skills.size(); ++i) {
    if (required_skills[i].empty()) field_error("required_skills[" + std::to_string(i) + "]", "must be nonempty");
  }
  if (language.empty()) field_error("language", "must be nonempty");
}

nlohmann::json Document::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["kind"] = to_string(kind);
  j["language"] = language;
  j["sections"] = sections;
  auto edu = nlohmann::json::array();
  for (const auto& e : education) {
    nlohmann::json je{{"degree", e.degree_raw}};
    if (!e.institution.empty()) je["institution"] = e.institution;
    if (e.year) je["year"] = *e.year;
    edu.push_back(std::move(je));
  }
  j["education"] = std::move(edu);
  j["required_skills"] = required_skills;
  return j;
}

Document Document::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("document must be a JSON object");
  static const std::vector<std::string> known = {"id", "kind", "language", "sections", "education", "required_skills"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) field_error(k, "unknown field");
  }
  Document d;
  if (j.contains("id") && !j["id"].is_null()) d.id = require_string(j["id"], "id");
  if (!j.contains("kind")) field_error("kind", "missing");
  d.kind = kind_from_string(require_string(j["kind"], "kind"));
  if (j.contains("language")) d.language = require_string(j["language"], "language");
  if (!j.contains("sections") || !j["sections"].is_object()) field_error("sections", "expected an object");
  for (const auto& [name, body] : j["sections"].items()) d.sections[name] = require_string(body, "sections." + name);
  if (j.contains("education")) {
    if (!j["education"].is_array()) field_error("education", "expected an array");
    for (std::size_t i = 0; i < j["education"].size(); ++i) {
      const auto& e = j["education"][i];
      auto field = "education[" + std::to_string(i) + "]";
      if (!e.is_object()) field_error(field, "expected an object");
      EducationEntry entry;
      if (!e.contains("degree")) field_error(field + ".degree", "missing");
      entry.degree_raw = require_string(e["degree"], field + ".degree");
      if (e.contains("institution")) entry.institution = require_string(e["institution"], field + ".institution");
      if (e.contains("year") && !e["year"].is_null()) {
        if (!e["year"].is_number_integer()) field_error(field + ".year", "expected an integer");
        entry.year = e["year"].get<int>();
      }
      d.education.push_back(std::move(entry));
    }
  }
  if (j.contains("required_skills")) {
    if (!j["required_skills"].is_array()) field_error("required_skills", "expected an array");
    for (std::size_t i = 0; i < j["required_skills"].size(); ++i) {
      d.required_skills.push_back(
          require_string(j["required_skills"][i], "required_skills[" + std::to_string(i) + "]"));
    }
  }
  d.validate();
  return d;
}

std::string content_id(const Document& doc) {
  auto j = doc.to_json();
  j.erase("id");
  return sha256_hex(j.dump(), kContentIdBytes);
}

Document load_document_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return Document::from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

DocumentStore::DocumentStore(fs::path root) : root_(std::move(root)) {}

fs::path DocumentStore::path_for(Kind kind, std::string_view id) const {
  return root_ / std::string(to_string(kind)) / (std::string(id) + ".json");
}

std::optional<fs::path> DocumentStore::locate(std::string_view id) const {
  if (!is_valid_id(id)) return std::nullopt;
  for (Kind k : {Kind::cv, Kind::job_post}) {
    auto p = path_for(k, id);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

bool DocumentStore::contains(std::string_view id) const { return locate(id).has_value(); }

PutResult DocumentStore::put(Document doc, bool overwrite) {
  doc.validate();
  if (doc.id.empty()) doc.id = content_id(doc);
  PutResult result{doc.id, PutStatus::stored};
  if (auto existing = locate(doc.id)) {
    if (load_document_file(*existing) == doc) {
      result.status = PutStatus::unchanged;
      return result;
    }
    if (!overwrite) throw ValidationError("document '" + doc.id + "' already exists");
    result.status = PutStatus::replaced;
    if (*existing != path_for(doc.kind, doc.id)) fs::remove(*existing);
  }
  auto target = path_for(doc.kind, doc.id);
  fs::create_directories(target.parent_path());
  auto tmp = target.parent_path() / ("." + doc.id + ".json.tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << doc.to_json().dump(2) << '\n';
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
  return result;
}

Document DocumentStore::get(std::string_view id) const {
  auto p = locate(id);
  if (!p) throw NotFoundError("document '" + std::string(id) + "' not found");
  return load_document_file(*p);
}

std::vector<std::string> DocumentStore::list(std::optional<Kind> kind) const {
  std::vector<std::string> ids;
  for (Kind k : {Kind::cv, Kind::job_post}) {
    if (kind && *kind != k) continue;
    auto dir = root_ / std::string(to_string(k));
    if (!fs::is_directory(dir)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      auto name = entry.path().filename().string();
      if (!entry.is_regular_file() || name.front() == '.' || entry.path().extension() != ".json") continue;
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace skillmatch::docs
