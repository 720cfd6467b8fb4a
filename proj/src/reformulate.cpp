#include "sentipipe/reformulate.hpp"

#include <fstream>

#include "sentipipe/errors.hpp"
#include "sentipipe/unicode.hpp"

namespace sentipipe::reform {

namespace uni = sentipipe::uni;

Scheme scheme_from_string(const std::string& s) {
  if (s == "single") return Scheme::Single;
  if (s == "pair_qa") return Scheme::PairQA;
  if (s == "pair_nli") return Scheme::PairNLI;
  throw InputError("unknown scheme: \"" + s + "\" (want single|pair_qa|pair_nli)");
}

std::string scheme_to_string(Scheme s) {
  switch (s) {
    case Scheme::Single: return "single";
    case Scheme::PairQA: return "pair_qa";
    case Scheme::PairNLI: return "pair_nli";
  }
  return "?";
}

PromptTable PromptTable::defaults() {
  PromptTable t;
  t.prompts[Scheme::PairNLI] = "The sentiment polarity of MASK is";
  t.prompts[Scheme::PairQA] = "What do you think about MASK?";
  return t;
}

PromptTable PromptTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open prompt table: " + path);
  PromptTable t = defaults();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": expected scheme<TAB>auxiliary sentence");
    }
    t.prompts[scheme_from_string(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return t;
}

namespace {

std::string replace_all_literal(const std::string& text, const std::string& what,
                                const std::string& with) {
  if (what.empty()) return text;
  std::string out;
  size_t pos = 0;
  while (true) {
    const auto hit = text.find(what, pos);
    if (hit == std::string::npos) {
      out += text.substr(pos);
      return out;
    }
    out += text.substr(pos, hit - pos);
    out += with;
    pos = hit + what.size();
  }
}

// Case-insensitive find over codepoints; returns byte offsets of matches.
std::vector<std::pair<size_t, size_t>> find_all_ci(const std::string& text,
                                                   const std::string& needle) {
  std::vector<std::pair<size_t, size_t>> hits;
  const auto t = uni::decode(text);
  const auto n = uni::decode(needle);
  if (n.empty()) return hits;

  // map codepoint index -> byte offset
  std::vector<size_t> byte_at(t.size() + 1);
  {
    std::string acc;
    for (size_t i = 0; i < t.size(); ++i) {
      byte_at[i] = acc.size();
      uni::append_utf8(acc, t[i]);
    }
    byte_at[t.size()] = acc.size();
  }
  size_t i = 0;
  while (i + n.size() <= t.size()) {
    bool match = true;
    for (size_t k = 0; k < n.size(); ++k) {
      if (uni::to_lower(t[i + k]) != uni::to_lower(n[k])) {
        match = false;
        break;
      }
    }
    if (match) {
      hits.emplace_back(byte_at[i], byte_at[i + n.size()]);
      i += n.size();
    } else {
      ++i;
    }
  }
  return hits;
}

}  // namespace

std::string PromptTable::prompt_for(Scheme scheme, const std::string& mask_token) const {
  const auto it = prompts.find(scheme);
  if (it == prompts.end()) {
    throw InputError("no auxiliary sentence configured for scheme " +
                     scheme_to_string(scheme));
  }
  return mask_token == "MASK" ? it->second
                              : replace_all_literal(it->second, "MASK", mask_token);
}

size_t count_occurrences_ci(const std::string& text, const std::string& needle) {
  return find_all_ci(text, needle).size();
}

ReformulatedInput reformulate_targeted(const corpus::Sample& sample, Scheme scheme,
                                       const std::string& mask_token,
                                       const PromptTable& prompts) {
  if (!sample.target_entity || sample.target_entity->empty()) {
    throw InputError("sample \"" + sample.id + "\" has no target entity");
  }
  const auto hits = find_all_ci(sample.text, *sample.target_entity);
  if (hits.empty()) {
    throw InputError("entity \"" + *sample.target_entity +
                     "\" not found in text of sample \"" + sample.id + "\"");
  }
  ReformulatedInput out;
  out.mask_token = mask_token;
  size_t pos = 0;
  for (const auto& [from, to] : hits) {
    out.sentence_a += sample.text.substr(pos, from - pos);
    out.sentence_a += mask_token;
    pos = to;
  }
  out.sentence_a += sample.text.substr(pos);
  if (scheme != Scheme::Single) {
    out.sentence_b = prompts.prompt_for(scheme, mask_token);
  }
  return out;
}

ReformulatedInput reformulate_general(const corpus::Sample& sample, Scheme scheme,
                                      const std::string& mask_token,
                                      const PromptTable& prompts) {
  ReformulatedInput out;
  out.mask_token = mask_token;
  out.sentence_a = mask_token + " = " + sample.text;
  if (scheme != Scheme::Single) {
    out.sentence_b = prompts.prompt_for(scheme, mask_token);
  }
  return out;
}

}  // namespace sentipipe::reform
