#include "sentipipe/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "sentipipe/errors.hpp"
#include "sentipipe/rng.hpp"
#include "sentipipe/unicode.hpp"

namespace sentipipe::corpus {

Label label_from_string(const std::string& s) {
  if (s == "positive" || s == "1") return Label::Positive;
  if (s == "negative" || s == "-1") return Label::Negative;
  if (s == "neutral" || s == "0") return Label::Neutral;
  throw InputError("unknown label: \"" + s + "\"");
}

std::string label_to_string(Label l) {
  switch (l) {
    case Label::Positive: return "positive";
    case Label::Negative: return "negative";
    case Label::Neutral: return "neutral";
  }
  return "?";
}

int label_to_int(Label l) {
  switch (l) {
    case Label::Positive: return 1;
    case Label::Negative: return -1;
    case Label::Neutral: return 0;
  }
  return 0;
}

Label label_from_int(int v) {
  switch (v) {
    case 1: return Label::Positive;
    case -1: return Label::Negative;
    case 0: return Label::Neutral;
  }
  throw InputError("label integer must be -1, 0 or 1, got " + std::to_string(v));
}

TaskKind task_from_string(const std::string& s) {
  if (s == "general") return TaskKind::General;
  if (s == "targeted") return TaskKind::Targeted;
  throw InputError("unknown task kind: \"" + s + "\" (want general|targeted)");
}

std::string task_to_string(TaskKind t) {
  return t == TaskKind::General ? "general" : "targeted";
}

std::array<size_t, kNumClasses> Dataset::class_counts() const {
  std::array<size_t, kNumClasses> counts{};
  for (const auto& s : samples) counts[static_cast<size_t>(s.label)]++;
  return counts;
}

std::array<long, kNumClasses> ClassDistribution::rounded() const {
  std::array<long, kNumClasses> out{};
  for (size_t i = 0; i < kNumClasses; ++i) out[i] = std::lround(percent[i]);
  return out;
}

std::string escape_field(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(const std::string& field) {
  std::string out;
  out.reserve(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out += field[i];
      continue;
    }
    if (i + 1 >= field.size()) throw InputError("dangling backslash in field");
    switch (field[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case '\\': out += '\\'; break;
      default:
        throw InputError(std::string("unknown escape \\") + field[i] + " in field");
    }
  }
  return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
  const auto h = uni::decode(uni::lowercase(haystack));
  const auto n = uni::decode(uni::lowercase(needle));
  if (n.empty() || n.size() > h.size()) return false;
  for (size_t i = 0; i + n.size() <= h.size(); ++i) {
    if (std::equal(n.begin(), n.end(), h.begin() + static_cast<ptrdiff_t>(i)))
      return true;
  }
  return false;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

[[noreturn]] void fail(const std::string& path, size_t lineno, const std::string& msg) {
  throw InputError(path + ":" + std::to_string(lineno) + ": " + msg);
}

}  // namespace

Dataset load_dataset(const std::string& path, TaskKind task_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dataset file: " + path);

  Dataset ds;
  ds.task_kind = task_kind;
  const auto slash = path.find_last_of("/\\");
  std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = stem.find_last_of('.');
  ds.name = dot == std::string::npos ? stem : stem.substr(0, dot);

  std::string line;
  size_t lineno = 0;
  std::unordered_set<std::string> seen_ids;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != "id\ttext\tentity\tlabel") {
        fail(path, lineno, "expected header \"id<TAB>text<TAB>entity<TAB>label\"");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 4) {
      fail(path, lineno, "expected 4 tab-separated columns, got " +
                             std::to_string(cols.size()));
    }
    Sample s;
    try {
      s.id = cols[0];
      s.text = unescape_field(cols[1]);
      s.label = label_from_string(cols[3]);
      if (!cols[2].empty()) s.target_entity = unescape_field(cols[2]);
    } catch (const InputError& e) {
      fail(path, lineno, e.what());
    }
    if (s.id.empty()) fail(path, lineno, "empty id");
    if (!seen_ids.insert(s.id).second) fail(path, lineno, "duplicate id \"" + s.id + "\"");
    if (task_kind == TaskKind::Targeted) {
      if (!s.target_entity) fail(path, lineno, "targeted dataset row has empty entity column");
      if (!contains_ci(s.text, *s.target_entity)) {
        fail(path, lineno, "entity \"" + *s.target_entity +
                               "\" does not occur in text of row \"" + s.id + "\"");
      }
    } else if (s.target_entity) {
      fail(path, lineno, "general dataset row has non-empty entity column");
    }
    ds.samples.push_back(std::move(s));
  }
  if (!header_seen) throw InputError(path + ": empty file (missing header)");
  if (ds.samples.empty()) throw InputError(path + ": dataset has no samples");
  return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RunError("cannot write dataset file: " + path);
  out << "id\ttext\tentity\tlabel\n";
  for (const auto& s : dataset.samples) {
    out << s.id << '\t' << escape_field(s.text) << '\t'
        << (s.target_entity ? escape_field(*s.target_entity) : std::string())
        << '\t' << label_to_string(s.label) << '\n';
  }
  if (!out) throw RunError("failed writing dataset file: " + path);
}

ClassDistribution class_distribution(const Dataset& dataset) {
  if (dataset.samples.empty()) throw InputError("class_distribution: empty dataset");
  const auto counts = dataset.class_counts();
  ClassDistribution dist;
  for (size_t i = 0; i < kNumClasses; ++i) {
    dist.percent[i] = 100.0 * static_cast<double>(counts[i]) /
                      static_cast<double>(dataset.samples.size());
  }
  return dist;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double fraction,
                                  uint64_t seed) {
  const size_t n = dataset.samples.size();
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InputError("split fraction must lie in (0,1)");
  }
  const auto first = static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
  if (first == 0 || first >= n) {
    throw InputError("split fraction " + std::to_string(fraction) +
                     " produces an empty part for " + std::to_string(n) + " samples");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  Dataset a, b;
  a.name = dataset.name + "-a";
  b.name = dataset.name + "-b";
  a.task_kind = b.task_kind = dataset.task_kind;
  a.samples.reserve(first);
  b.samples.reserve(n - first);
  for (size_t i = 0; i < n; ++i) {
    (i < first ? a : b).samples.push_back(dataset.samples[order[i]]);
  }
  return {std::move(a), std::move(b)};
}

}  // namespace sentipipe::corpus
