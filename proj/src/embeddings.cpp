#include "skillmatch/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "skillmatch/error.hpp"

namespace skillmatch::embed {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool neighbor_before(const Neighbor& a, const Neighbor& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.word < b.word;
}

std::vector<Neighbor> scan(const VectorStore& store, std::span<const double> query, std::size_t k,
                           std::optional<std::string_view> exclude) {
  if (k == 0) throw ValidationError("top_k: k must be >= 1");
  if (query.size() != store.dim()) throw ValidationError("top_k: query dimension mismatch");
  double qn = norm(query);
  if (qn == 0.0) throw ValidationError("top_k: zero-norm query vector");
  std::vector<Neighbor> all;
  all.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& w = store.words()[i];
    if (exclude && w == *exclude) continue;
    auto row = store.row(i);
    double rn = norm(row);
    if (rn == 0.0) continue;
    all.push_back({w, dot(query, row) / (qn * rn)});
  }
  std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), neighbor_before);
  all.resize(take);
  return all;
}

}  // namespace

VectorStore VectorStore::parse(std::string_view content, std::string_view origin) {
  VectorStore store;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_content_line = true;
  auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no); };
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    std::string_view line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (first_content_line) {
      first_content_line = false;
      std::size_t count = 0;
      std::size_t dim = 0;
      if (fields.size() == 2 && parse_size(fields[0], count) && parse_size(fields[1], dim)) {
        if (dim == 0) throw ParseError(where() + ": header declares dimension 0");
        store.dim_ = dim;
        continue;
      }
    }
    if (store.dim_ == 0) {
      if (fields.size() < 2) throw ParseError(where() + ": expected a word followed by at least one value");
      store.dim_ = fields.size() - 1;
    }
    if (fields.size() != store.dim_ + 1) {
      throw ParseError(where() + ": expected " + std::to_string(store.dim_) + " values, found " +
                       std::to_string(fields.size() - 1));
    }
    Vector values(store.dim_);
    for (std::size_t d = 0; d < store.dim_; ++d) {
      if (!parse_double(fields[d + 1], values[d])) {
        throw ParseError(where() + ": value '" + std::string(fields[d + 1]) + "' is not a finite number");
      }
    }
    std::string word(fields[0]);
    if (store.contains(word)) {
      store.warnings_.push_back(where() + ": duplicate word '" + word + "', keeping the last occurrence");
    }
    store.add(std::move(word), values);
  }
  if (store.empty()) throw ParseError(std::string(origin) + ": no vectors found");
  return store;
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open vector file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void VectorStore::add(std::string word, std::span<const double> values) {
  if (dim_ == 0) {
    if (values.empty()) throw ValidationError("vector dimension must be >= 1");
    dim_ = values.size();
  }
  if (values.size() != dim_) throw ValidationError("vector for '" + word + "' has the wrong dimension");
  if (auto it = index_.find(word); it != index_.end()) {
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    return;
  }
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
}

bool VectorStore::contains(std::string_view word) const { return index_.count(std::string(word)) != 0; }

std::optional<std::span<const double>> VectorStore::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw ValidationError("cosine: zero-norm vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<Neighbor> top_k(const VectorStore& store, std::string_view query, std::size_t k) {
  auto v = store.find(query);
  if (!v) throw NotFoundError("top_k: '" + std::string(query) + "' is out of vocabulary");
  return scan(store, *v, k, query);
}

std::vector<Neighbor> top_k(const VectorStore& store, std::span<const double> query, std::size_t k) {
  return scan(store, query, k, std::nullopt);
}

Centroid centroid(std::span<const std::string> words, const VectorStore& store) {
  Centroid c;
  c.vector.assign(store.dim(), 0.0);
  for (const auto& w : words) {
    auto v = store.find(w);
    if (!v) {
      ++c.out_of_vocabulary;
      continue;
    }
    for (std::size_t d = 0; d < store.dim(); ++d) c.vector[d] += (*v)[d];
    ++c.used;
  }
  if (c.used == 0) throw ValidationError("centroid: no in-vocabulary word");
  for (auto& x : c.vector) x /= static_cast<double>(c.used);
  c.degenerate = norm(c.vector) == 0.0;
  return c;
}

std::optional<Centroid> phrase_vector(std::string_view phrase, const VectorStore& store) {
  std::vector<std::string> tokens;
  for (auto t : split_ws(phrase)) tokens.emplace_back(t);
  if (tokens.empty()) return std::nullopt;
  bool any = std::any_of(tokens.begin(), tokens.end(), [&](const auto& t) { return store.contains(t); });
  if (!any) return std::nullopt;
  return centroid(tokens, store);
}

}  // namespace skillmatch::embed
