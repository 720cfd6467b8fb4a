#include "sentipipe/textnorm.hpp"

#include <algorithm>
#include <fstream>

#include "sentipipe/errors.hpp"
#include "sentipipe/unicode.hpp"

namespace sentipipe::textnorm {

namespace uni = sentipipe::uni;
using CpString = std::vector<char32_t>;

namespace {

CpString cps(std::string_view s) { return uni::decode(s); }

// Exact rewrite patterns. The categories come from the preprocessing step
// list; the concrete character sets are fixed here so the rules are
// bit-exact and reproducible.
//
//   url      "http://", "https://" or "www." followed by >=1 URL character
//            from [letters digits - . _ ~ : / ? # @ ! $ & ' ( ) * + , ; = % [ ]]
//   mention  '@' + word chars, left context not a word char
//   hashtag  '#' + word chars, left context not a word char
//   email    local [letters digits . _ % + -] '@' domain [letters digits . -]
//            with a dot and a final label of >=2 letters
//   phone    optional '+' or '(', then digits/()- with >=7 digits, no spaces,
//            left context not a digit; trailing non-digits are not consumed
//   emoticon longest literal from the map, absorbing repeats of its final
//            char; runs of 2+ '(' / ')' map to sad / happy

bool is_url_char(char32_t c) {
  if (uni::is_letter(c) || uni::is_digit(c)) return true;
  switch (c) {
    case U'-': case U'.': case U'_': case U'~': case U':': case U'/':
    case U'?': case U'#': case U'@': case U'!': case U'$': case U'&':
    case U'\'': case U'(': case U')': case U'*': case U'+': case U',':
    case U';': case U'=': case U'%': case U'[': case U']':
      return true;
    default:
      return false;
  }
}

bool is_email_local_char(char32_t c) {
  return uni::is_letter(c) || uni::is_digit(c) || c == U'.' || c == U'_' ||
         c == U'%' || c == U'+' || c == U'-';
}

bool is_email_domain_char(char32_t c) {
  return uni::is_letter(c) || uni::is_digit(c) || c == U'.' || c == U'-';
}

bool prefix_at(const CpString& s, size_t i, std::string_view ascii) {
  if (i + ascii.size() > s.size()) return false;
  for (size_t k = 0; k < ascii.size(); ++k) {
    if (uni::to_lower(s[i + k]) != static_cast<char32_t>(ascii[k])) return false;
  }
  return true;
}

void replace_range(CpString& s, size_t i, size_t j, const CpString& token) {
  CpString out;
  out.reserve(s.size() - (j - i) + token.size());
  out.insert(out.end(), s.begin(), s.begin() + static_cast<ptrdiff_t>(i));
  out.insert(out.end(), token.begin(), token.end());
  out.insert(out.end(), s.begin() + static_cast<ptrdiff_t>(j), s.end());
  s = std::move(out);
}

bool pass_lowercase(CpString& s) {
  bool changed = false;
  for (auto& c : s) {
    const char32_t l = uni::to_lower(c);
    if (l != c) {
      c = l;
      changed = true;
    }
  }
  return changed;
}

bool pass_url(CpString& s) {
  static const CpString token = cps("url");
  bool changed = false;
  size_t i = 0;
  while (i < s.size()) {
    size_t body = 0;
    if (prefix_at(s, i, "http://")) body = 7;
    else if (prefix_at(s, i, "https://")) body = 8;
    else if (prefix_at(s, i, "www.")) body = 4;
    if (body == 0 || i + body >= s.size() || !is_url_char(s[i + body])) {
      ++i;
      continue;
    }
    size_t j = i + body;
    while (j < s.size() && is_url_char(s[j])) ++j;
    replace_range(s, i, j, token);
    i += token.size();
    changed = true;
  }
  return changed;
}

bool pass_marker(CpString& s, char32_t marker, const CpString& token) {
  bool changed = false;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != marker || (i > 0 && uni::is_word_char(s[i - 1])) ||
        i + 1 >= s.size() || !uni::is_word_char(s[i + 1])) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < s.size() && uni::is_word_char(s[j])) ++j;
    replace_range(s, i, j, token);
    i += token.size();
    changed = true;
  }
  return changed;
}

bool pass_email(CpString& s) {
  static const CpString token = cps("email");
  bool changed = false;
  size_t k = 0;
  while (k < s.size()) {
    if (s[k] != U'@') {
      ++k;
      continue;
    }
    size_t i = k;
    while (i > 0 && is_email_local_char(s[i - 1])) --i;
    size_t j = k + 1;
    while (j < s.size() && is_email_domain_char(s[j])) ++j;
    while (j > k + 1 && (s[j - 1] == U'.' || s[j - 1] == U'-')) --j;
    // validate: non-empty local, dotted domain, alphabetic TLD of length >= 2
    size_t last_dot = CpString::npos;
    for (size_t p = k + 1; p < j; ++p) {
      if (s[p] == U'.') last_dot = p;
    }
    bool ok = i < k && last_dot != CpString::npos && last_dot > k + 1 &&
              j - last_dot - 1 >= 2;
    for (size_t p = last_dot + 1; ok && p < j; ++p) {
      if (!uni::is_letter(s[p])) ok = false;
    }
    if (!ok) {
      ++k;
      continue;
    }
    replace_range(s, i, j, token);
    k = i + token.size();
    changed = true;
  }
  return changed;
}

bool pass_phone(CpString& s) {
  static const CpString token = cps("phone");
  bool changed = false;
  size_t i = 0;
  while (i < s.size()) {
    const bool starts = uni::is_digit(s[i]) ||
                        ((s[i] == U'+' || s[i] == U'(') && i + 1 < s.size() &&
                         uni::is_digit(s[i + 1]));
    if (!starts || (i > 0 && uni::is_digit(s[i - 1]))) {
      ++i;
      continue;
    }
    size_t j = i + (uni::is_digit(s[i]) ? 0 : 1);
    size_t digits = 0;
    while (j < s.size() && (uni::is_digit(s[j]) || s[j] == U'(' ||
                            s[j] == U')' || s[j] == U'-')) {
      if (uni::is_digit(s[j])) ++digits;
      ++j;
    }
    while (j > i && !uni::is_digit(s[j - 1])) --j;
    if (digits < 7) {
      i = j > i ? j : i + 1;
      continue;
    }
    replace_range(s, i, j, token);
    i += token.size();
    changed = true;
  }
  return changed;
}

struct EmoticonTable {
  std::vector<std::pair<CpString, CpString>> patterns;  // longest first
  explicit EmoticonTable(const std::map<std::string, std::string>& map) {
    for (const auto& [pat, tok] : map) patterns.emplace_back(cps(pat), cps(tok));
    std::stable_sort(patterns.begin(), patterns.end(),
                     [](const auto& a, const auto& b) {
                       return a.first.size() > b.first.size();
                     });
  }
};

bool pass_emoticon(CpString& s, const EmoticonTable& table) {
  static const CpString sad = cps("sad");
  static const CpString happy = cps("happy");
  bool changed = false;
  size_t i = 0;
  while (i < s.size()) {
    const CpString* replacement = nullptr;
    size_t j = i;
    for (const auto& [pat, tok] : table.patterns) {
      if (pat.size() > s.size() - i) continue;
      if (std::equal(pat.begin(), pat.end(), s.begin() + static_cast<ptrdiff_t>(i))) {
        j = i + pat.size();
        const char32_t tail = pat.back();
        while (j < s.size() && s[j] == tail) ++j;  // ":(((" is one emoticon
        replacement = &tok;
        break;
      }
    }
    if (!replacement && (s[i] == U'(' || s[i] == U')')) {
      size_t run = i;
      while (run < s.size() && s[run] == s[i]) ++run;
      if (run - i >= 2) {
        j = run;
        replacement = s[i] == U'(' ? &sad : &happy;
      }
    }
    if (!replacement) {
      ++i;
      continue;
    }
    replace_range(s, i, j, *replacement);
    i += replacement->size();
    changed = true;
  }
  return changed;
}

bool pass_strip_special(CpString& s) {
  CpString out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (uni::is_letter(c) || uni::is_digit(c) || uni::is_space(c) ||
        uni::is_punct(c)) {
      out.push_back(c);
    }
  }
  if (out.size() == s.size()) return false;
  s = std::move(out);
  return true;
}

bool pass_squash_repeats(CpString& s) {
  CpString out;
  out.reserve(s.size());
  size_t i = 0;
  bool changed = false;
  while (i < s.size()) {
    size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    size_t keep = j - i;
    if (uni::is_letter(s[i]) && keep > 2) {
      keep = 2;
      changed = true;
    }
    out.insert(out.end(), keep, s[i]);
    i = j;
  }
  if (changed) s = std::move(out);
  return changed;
}

}  // namespace

const std::vector<NormStep>& default_steps() {
  static const std::vector<NormStep> steps = {
      NormStep::Lowercase, NormStep::Url,          NormStep::Mention,
      NormStep::Hashtag,   NormStep::Email,        NormStep::Phone,
      NormStep::Emoticon,  NormStep::StripSpecial, NormStep::SquashRepeats,
  };
  return steps;
}

const std::vector<NormStep>& all_steps() {
  static const std::vector<NormStep> steps = [] {
    auto v = default_steps();
    v.push_back(NormStep::LemmaStop);
    return v;
  }();
  return steps;
}

std::string step_name(NormStep s) {
  switch (s) {
    case NormStep::Lowercase: return "lowercase";
    case NormStep::Url: return "url";
    case NormStep::Mention: return "mention";
    case NormStep::Hashtag: return "hashtag";
    case NormStep::Email: return "email";
    case NormStep::Phone: return "phone";
    case NormStep::Emoticon: return "emoticon";
    case NormStep::StripSpecial: return "strip_special";
    case NormStep::SquashRepeats: return "squash_repeats";
    case NormStep::LemmaStop: return "lemma_stop";
  }
  return "?";
}

NormStep step_from_name(const std::string& name) {
  for (NormStep s : all_steps()) {
    if (step_name(s) == name) return s;
  }
  throw InputError("unknown normalization step: " + name);
}

const std::unordered_set<std::string>& protected_tokens() {
  static const std::unordered_set<std::string> tokens = {
      "url", "user", "hashtag", "email", "phone", "sad", "happy", "neutral"};
  return tokens;
}

std::map<std::string, std::string> NormConfig::default_emoticons() {
  return {
      {":)", "happy"},  {":-)", "happy"}, {"=)", "happy"},  {":d", "happy"},
      {":D", "happy"},  {":-d", "happy"}, {":-D", "happy"}, {";)", "happy"},
      {";-)", "happy"}, {":(", "sad"},    {":-(", "sad"},   {"=(", "sad"},
      {":'(", "sad"},   {":|", "neutral"}, {":-|", "neutral"},
  };
}

bool NormConfig::has_step(NormStep s) const {
  return std::find(steps.begin(), steps.end(), s) != steps.end();
}

std::string normalize(const std::string& text, const NormConfig& config) {
  CpString s = uni::decode(text);
  const EmoticonTable emoticons(config.emoticons);

  // The rewrite steps run in pipeline order, repeated until fixpoint:
  // a later step may expose an earlier step's pattern (StripSpecial deleting
  // a symbol inside a broken URL) and a replacement can itself complete a
  // match ("@@ivan" -> "@user" -> "user"). Benign text converges in one round.
  constexpr int kMaxRounds = 16;
  for (int round = 0; round < kMaxRounds; ++round) {
    bool changed = false;
    for (NormStep step : config.steps) {
      switch (step) {
        case NormStep::Lowercase:     changed |= pass_lowercase(s); break;
        case NormStep::Url:           changed |= pass_url(s); break;
        case NormStep::Mention:       changed |= pass_marker(s, U'@', cps("user")); break;
        case NormStep::Hashtag:       changed |= pass_marker(s, U'#', cps("hashtag")); break;
        case NormStep::Email:         changed |= pass_email(s); break;
        case NormStep::Phone:         changed |= pass_phone(s); break;
        case NormStep::Emoticon:      changed |= pass_emoticon(s, emoticons); break;
        case NormStep::StripSpecial:  changed |= pass_strip_special(s); break;
        case NormStep::SquashRepeats: changed |= pass_squash_repeats(s); break;
        case NormStep::LemmaStop:     break;  // applied once, below
      }
    }
    if (!changed) break;
  }

  std::string out = uni::encode(s);
  if (config.has_step(NormStep::LemmaStop)) {
    const auto tokens =
        lemma_stop(tokenize(out), config.stopwords, config.lemmatizer);
    out.clear();
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  const CpString s = uni::decode(text);
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < s.size()) {
    if (uni::is_space(s[i])) {
      ++i;
      continue;
    }
    const bool word = uni::is_word_char(s[i]);
    size_t j = i;
    while (j < s.size() && !uni::is_space(s[j]) && uni::is_word_char(s[j]) == word) ++j;
    tokens.push_back(uni::encode(CpString(s.begin() + static_cast<ptrdiff_t>(i),
                                          s.begin() + static_cast<ptrdiff_t>(j))));
    i = j;
  }
  return tokens;
}

std::vector<std::string> lemma_stop(const std::vector<std::string>& tokens,
                                    const std::unordered_set<std::string>& stopwords,
                                    const Lemmatizer& lemmatizer) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (protected_tokens().count(token)) {
      out.push_back(token);
      continue;
    }
    std::string lemma = lemmatizer ? lemmatizer(token) : token;
    if (stopwords.count(lemma)) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.insert(line);
  }
  return out;
}

std::map<std::string, std::string> load_emoticon_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open emoticon map: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("emoticon map " + path + " line " +
                       std::to_string(lineno) + ": expected pattern<TAB>token");
    }
    const std::string token = line.substr(tab + 1);
    if (token != "sad" && token != "happy" && token != "neutral") {
      throw InputError("emoticon map " + path + " line " +
                       std::to_string(lineno) + ": token must be sad|happy|neutral");
    }
    out[line.substr(0, tab)] = token;
  }
  return out;
}

Lemmatizer load_lemma_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lemma dictionary: " + path);
  auto dict = std::make_shared<std::unordered_map<std::string, std::string>>();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("lemma dictionary " + path + " line " +
                       std::to_string(lineno) + ": expected surface<TAB>lemma");
    }
    (*dict)[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return [dict](const std::string& token) {
    const auto it = dict->find(token);
    return it == dict->end() ? token : it->second;
  };
}

}  // namespace sentipipe::textnorm
