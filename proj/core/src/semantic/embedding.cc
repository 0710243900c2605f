#include "sqlreward/semantic/embedding.h"

#include <cctype>
#include <cmath>

#include "sqlreward/error.h"

namespace sqlreward::semantic {

std::string_view trim(std::string_view text) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

namespace {

void check_vector(const EmbeddingProvider& provider, const EmbeddingVector& v) {
  if (v.size() != provider.dimension()) {
    throw EmbedderFailure(provider.name() + " returned a vector of dimension " + std::to_string(v.size()) +
                          ", expected " + std::to_string(provider.dimension()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw EmbedderFailure(provider.name() + " returned a non-finite value");
  }
}

}  // namespace

std::vector<EmbeddingVector> embed_all(const EmbeddingProvider& provider, const std::vector<std::string>& texts) {
  std::vector<std::string> trimmed;
  trimmed.reserve(texts.size());
  for (const std::string& t : texts) {
    std::string_view s = trim(t);
    if (s.empty()) throw InvalidArgument("cannot embed blank text");
    trimmed.emplace_back(s);
  }
  if (trimmed.empty()) return {};
  std::vector<EmbeddingVector> out = provider.embed_batch(trimmed);
  if (out.size() != trimmed.size()) {
    throw EmbedderFailure(provider.name() + " returned " + std::to_string(out.size()) + " vectors for " +
                          std::to_string(trimmed.size()) + " texts");
  }
  for (const EmbeddingVector& v : out) check_vector(provider, v);
  return out;
}

EmbeddingVector embed(const EmbeddingProvider& provider, std::string_view text) {
  return std::move(embed_all(provider, {std::string(text)}).front());
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine of vectors with dimensions " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector("cosine of a zero vector");
  const double c = dot / std::sqrt(na * nb);
  return std::fmax(-1.0, std::fmin(1.0, c));
}

HashedBagEmbedder::HashedBagEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("embedding dimension must be positive");
}

std::uint64_t HashedBagEmbedder::fnv1a(std::string_view token) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> HashedBagEmbedder::tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

EmbeddingVector HashedBagEmbedder::embed_one(std::string_view text) const {
  std::vector<std::string> toks = tokens(text);
  if (toks.empty()) toks.emplace_back(trim(text));
  EmbeddingVector v(dimension_, 0.0);
  for (const std::string& t : toks) v[bucket(t)] += 1.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<EmbeddingVector> HashedBagEmbedder::embed_batch(const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(embed_one(t));
  return out;
}

}  // namespace sqlreward::semantic
