#pragma once

#include <map>
#include <optional>
#include <string>

#include "sentipipe/corpus.hpp"

namespace sentipipe::reform {

enum class Scheme { Single, PairQA, PairNLI };

Scheme scheme_from_string(const std::string& s);  // single|pair_qa|pair_nli
std::string scheme_to_string(Scheme s);

struct ReformulatedInput {
  std::string sentence_a;
  std::optional<std::string> sentence_b;  // present iff scheme != Single
  std::string mask_token = "MASK";
};

// Auxiliary sentences per scheme. Entries contain the literal placeholder
// "MASK"; it is substituted when a different mask token is configured.
struct PromptTable {
  std::map<Scheme, std::string> prompts;
  static PromptTable defaults();
  // File format: scheme<TAB>auxiliary sentence, one per line.
  static PromptTable load(const std::string& path);
  std::string prompt_for(Scheme scheme, const std::string& mask_token) const;
};

// Replaces every (case-insensitive, non-overlapping, leftmost) occurrence of
// the entity surface form with the mask token. Throws InputError when the
// entity is missing or not found in the text.
ReformulatedInput reformulate_targeted(const corpus::Sample& sample, Scheme scheme,
                                       const std::string& mask_token = "MASK",
                                       const PromptTable& prompts = PromptTable::defaults());

// General task: the mask token is assigned to the whole sentence,
// "<mask> = <text>".
ReformulatedInput reformulate_general(const corpus::Sample& sample, Scheme scheme,
                                      const std::string& mask_token = "MASK",
                                      const PromptTable& prompts = PromptTable::defaults());

// Number of case-insensitive non-overlapping occurrences (used by tests and
// validation).
size_t count_occurrences_ci(const std::string& text, const std::string& needle);

}  // namespace sentipipe::reform
