#include "sentipipe/embed.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sentipipe/errors.hpp"
#include "sentipipe/rng.hpp"

namespace sentipipe::embed {

const std::vector<std::string>& special_tokens() {
  static const std::vector<std::string> tokens = {
      "url",  "user",  "hashtag", "email", "phone", "sad",   "happy",
      "neutral", "MASK", "[CLS]", "[SEP]", "[PAD]", "[UNK]"};
  return tokens;
}

EmbeddingTable::EmbeddingTable(size_t dim,
                               std::unordered_map<std::string, std::vector<double>> entries)
    : dim_(dim), entries_(std::move(entries)), zero_(dim, 0.0) {
  for (const auto& [token, vec] : entries_) {
    if (vec.size() != dim_) {
      throw InputError("embedding for \"" + token + "\" has dimension " +
                       std::to_string(vec.size()) + ", table dimension is " +
                       std::to_string(dim_));
    }
  }
  for (const auto& token : special_tokens()) {
    if (!entries_.count(token)) entries_[token] = special_token_vector(token, dim_);
  }
}

const std::vector<double>& EmbeddingTable::lookup(const std::string& token) const {
  const auto it = entries_.find(token);
  return it == entries_.end() ? zero_ : it->second;
}

std::vector<double> EmbeddingTable::average(const std::vector<std::string>& tokens) const {
  std::vector<double> acc(dim_, 0.0);
  if (tokens.empty()) return acc;
  for (const auto& token : tokens) {
    const auto& v = lookup(token);
    for (size_t i = 0; i < dim_; ++i) acc[i] += v[i];
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (auto& x : acc) x *= inv;
  return acc;
}

std::vector<double> special_token_vector(const std::string& token, size_t dim) {
  Rng rng(fnv1a64(token));
  std::vector<double> v(dim);
  double norm2 = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    norm2 += x * x;
  }
  const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
  for (auto& x : v) x *= inv;
  return v;
}

EmbeddingTable load_embeddings(const std::string& path,
                               const std::function<void(const std::string&)>& warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open embedding file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty embedding file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  size_t declared_count = 0, dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> declared_count >> dim) || dim == 0) {
      throw InputError(path + ":1: expected header \"<vocab_count> <dim>\"");
    }
  }

  std::unordered_map<std::string, std::vector<double>> entries;
  entries.reserve(declared_count);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    std::vector<double> vec;
    vec.reserve(dim);
    std::string field;
    while (row >> field) {
      try {
        size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        vec.push_back(v);
      } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(lineno) +
                         ": non-numeric value \"" + field + "\"");
      }
    }
    if (vec.size() != dim) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(dim) + " values, got " +
                       std::to_string(vec.size()));
    }
    if (entries.count(token) && warn) {
      warn(path + ":" + std::to_string(lineno) + ": duplicate token \"" + token +
           "\", keeping the last row");
    }
    entries[token] = std::move(vec);
  }
  return EmbeddingTable(dim, std::move(entries));
}

}  // namespace sentipipe::embed
