#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace skillmatch::docs {

enum class Kind { cv, job_post };

std::string_view to_string(Kind k);
Kind kind_from_string(std::string_view s);

struct EducationEntry {
  std::string degree_raw;
  std::string institution;
  std::optional<int> year;

  friend bool operator==(const EducationEntry&, const EducationEntry&) = default;
};

// A parsed CV or job post.
struct Document {
  std::string id;
  Kind kind = Kind::cv;
  std::map<std::string, std::string> sections;
  std::vector<EducationEntry> education;
  std::vector<std::string> required_skills;
  std::string language = "en";

  // Sections that every document carries, possibly empty.
  static constexpr std::string_view kRequiredSections[] = {"experience", "skills", "summary"};

  const std::string& section(std::string_view name) const;

  // Field-level validation; throws ValidationError naming the offending field.
  void validate() const;

  nlohmann::json to_json() const;
  // Parses and validates. A missing or empty "id" is left empty.
  static Document from_json(const nlohmann::json& j);

  friend bool operator==(const Document&, const Document&) = default;
};

// Hex digest of the canonical JSON of a document with its id removed.
std::string content_id(const Document& doc);

// True for ids usable as file names: [A-Za-z0-9._-], not starting with '.'.
bool is_valid_id(std::string_view id);

enum class PutStatus { stored, unchanged, replaced };

struct PutResult {
  std::string id;
  PutStatus status = PutStatus::stored;
};

// Directory of JSON documents: <root>/{cv,job_post}/<id>.json.
// Single writer, any number of readers.
class DocumentStore {
 public:
  explicit DocumentStore(std::filesystem::path root);

  // Assigns a content id when doc.id is empty. Re-putting identical content is a
  // no-op; a different document under an existing id needs `overwrite`.
  PutResult put(Document doc, bool overwrite = false);
  Document get(std::string_view id) const;
  bool contains(std::string_view id) const;

  // Sorted lexicographically.
  std::vector<std::string> list(std::optional<Kind> kind = std::nullopt) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::optional<std::filesystem::path> locate(std::string_view id) const;
  std::filesystem::path path_for(Kind kind, std::string_view id) const;

  std::filesystem::path root_;
};

Document load_document_file(const std::filesystem::path& path);

}  // namespace skillmatch::docs
