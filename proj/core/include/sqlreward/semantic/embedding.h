#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sqlreward::semantic {

using EmbeddingVector = std::vector<double>;

// Source of fixed-dimension text embeddings.
//
// Implementations that report concurrent_safe() may be called from several
// threads at once; others are serialized by the caller or internally.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  // Same text gives the same vector for the lifetime of the provider.
  virtual bool deterministic() const = 0;
  virtual bool concurrent_safe() const = 0;

  // One vector per input, in order. Throws EmbedderFailure.
  virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const = 0;
};

// Embeds one text after trimming it. Throws InvalidArgument for blank text
// and EmbedderFailure when the provider returns a vector of the wrong
// dimension or with non-finite entries.
EmbeddingVector embed(const EmbeddingProvider& provider, std::string_view text);

// Batch form of embed() with the same checks. Blank texts are rejected.
std::vector<EmbeddingVector> embed_all(const EmbeddingProvider& provider,
                                       const std::vector<std::string>& texts);

// Throws DimensionMismatch or ZeroVector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Deterministic bag-of-tokens embedder: lowercase alphanumeric runs hashed
// with FNV-1a into `dimension` buckets, counts L2-normalized. Text with no
// such run is hashed whole as a single token.
class HashedBagEmbedder : public EmbeddingProvider {
 public:
  explicit HashedBagEmbedder(std::size_t dimension = 256);

  std::string name() const override { return "hashed-bag"; }
  std::size_t dimension() const override { return dimension_; }
  bool deterministic() const override { return true; }
  bool concurrent_safe() const override { return true; }
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override;

  EmbeddingVector embed_one(std::string_view text) const;

  static std::vector<std::string> tokens(std::string_view text);
  static std::uint64_t fnv1a(std::string_view token);
  std::size_t bucket(std::string_view token) const { return fnv1a(token) % dimension_; }

 private:
  std::size_t dimension_;
};

std::string_view trim(std::string_view text);

}  // namespace sqlreward::semantic
