#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sentipipe::textnorm {

// Preprocessing steps, in canonical pipeline order.
enum class NormStep {
  Lowercase,
  Url,
  Mention,
  Hashtag,
  Email,
  Phone,
  Emoticon,
  StripSpecial,
  SquashRepeats,
  LemmaStop,
};

// All steps except LemmaStop, in pipeline order.
const std::vector<NormStep>& default_steps();
const std::vector<NormStep>& all_steps();

std::string step_name(NormStep s);
NormStep step_from_name(const std::string& name);  // throws InputError

// Replacement tokens produced by the rewrite rules. These are protected from
// lemmatization and stopword removal.
const std::unordered_set<std::string>& protected_tokens();

using Lemmatizer = std::function<std::string(const std::string&)>;

struct NormConfig {
  std::vector<NormStep> steps = default_steps();
  std::unordered_set<std::string> stopwords;
  // pattern -> token in {sad, happy, neutral}; longest literal match wins.
  // Runs of '(' or ')' of length >= 2 map to sad/happy as a built-in rule.
  std::map<std::string, std::string> emoticons = default_emoticons();
  Lemmatizer lemmatizer;  // identity when empty

  static std::map<std::string, std::string> default_emoticons();
  bool has_step(NormStep s) const;
};

// Applies the enabled steps in pipeline order. The rewrite steps iterate to a
// fixpoint (bounded) so the output never contains a URL/mention/hashtag/
// email/phone pattern and the pipeline is idempotent; LemmaStop runs once at
// the end.
std::string normalize(const std::string& text, const NormConfig& config);

// Maximal runs of word characters, or of non-space non-word characters.
std::vector<std::string> tokenize(const std::string& text);

// Lemma then stopword filter; replacement tokens pass through untouched.
std::vector<std::string> lemma_stop(const std::vector<std::string>& tokens,
                                    const std::unordered_set<std::string>& stopwords,
                                    const Lemmatizer& lemmatizer = {});

// File loaders (one token per line / pattern<TAB>token / surface<TAB>lemma).
std::unordered_set<std::string> load_stopwords(const std::string& path);
std::map<std::string, std::string> load_emoticon_map(const std::string& path);
Lemmatizer load_lemma_dictionary(const std::string& path);

}  // namespace sentipipe::textnorm
