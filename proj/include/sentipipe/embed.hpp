#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sentipipe::embed {

// Marker tokens that must always resolve to a vector, whether or not the
// embedding file provides one.
const std::vector<std::string>& special_tokens();

class EmbeddingTable {
 public:
  EmbeddingTable(size_t dim, std::unordered_map<std::string, std::vector<double>> entries);

  size_t dim() const { return dim_; }
  size_t size() const { return entries_.size(); }
  bool contains(const std::string& token) const { return entries_.count(token) > 0; }

  // Stored vector if present; zero vector otherwise (OOV policy).
  const std::vector<double>& lookup(const std::string& token) const;

  // Arithmetic mean of lookups; zero vector for an empty sequence.
  std::vector<double> average(const std::vector<std::string>& tokens) const;

 private:
  size_t dim_;
  std::unordered_map<std::string, std::vector<double>> entries_;
  std::vector<double> zero_;
};

// Word-vector text format: first line "<vocab_count> <dim>", then one line
// per token "token v1 ... vd", space-separated, UTF-8. Special tokens absent
// from the file are added as deterministic unit vectors seeded by the token
// string. Duplicate tokens keep the last row; a warning is emitted per
// duplicate via `warn` when given.
EmbeddingTable load_embeddings(const std::string& path,
                               const std::function<void(const std::string&)>& warn = {});

// Deterministic pseudo-random unit vector for a special token.
std::vector<double> special_token_vector(const std::string& token, size_t dim);

}  // namespace sentipipe::embed
