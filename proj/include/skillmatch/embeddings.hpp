#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillmatch::embed {

using Vector = std::vector<double>;

struct Neighbor {
  std::string word;
  double similarity = 0.0;
};

// Immutable word -> vector table. Vectors are stored row-major in one buffer.
class VectorStore {
 public:
  VectorStore() = default;
  explicit VectorStore(std::size_t dim) : dim_(dim) {}

  // Plain-text embedding format: `word v1 ... vd` per line, optional `count dim` header.
  // A repeated word keeps its last vector and records a warning.
  static VectorStore load(const std::filesystem::path& path);
  static VectorStore parse(std::string_view content, std::string_view origin = "<memory>");

  // Inserts or replaces. Used by loaders and test fixtures.
  void add(std::string word, std::span<const double> values);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  bool contains(std::string_view word) const;

  // nullopt when out of vocabulary.
  std::optional<std::span<const double>> find(std::string_view word) const;

  const std::vector<std::string>& words() const { return words_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> warnings_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v);

// Throws on dimension mismatch or a zero-norm argument.
double cosine(std::span<const double> a, std::span<const double> b);

// Highest-cosine entries, descending, ties broken by word. A string query is
// excluded from its own results; zero-norm rows are skipped.
std::vector<Neighbor> top_k(const VectorStore& store, std::string_view query, std::size_t k);
std::vector<Neighbor> top_k(const VectorStore& store, std::span<const double> query, std::size_t k);

struct Centroid {
  Vector vector;
  std::size_t used = 0;
  std::size_t out_of_vocabulary = 0;
  // The mean vector has zero norm (e.g. v and -v).
  bool degenerate = false;
};

// Mean of the in-vocabulary word vectors. Throws when no word is in vocabulary.
Centroid centroid(std::span<const std::string> words, const VectorStore& store);

// A phrase is represented by the centroid of its space-separated tokens.
std::optional<Centroid> phrase_vector(std::string_view phrase, const VectorStore& store);

}  // namespace skillmatch::embed
