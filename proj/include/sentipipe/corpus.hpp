#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sentipipe::corpus {

enum class Label : int { Positive = 0, Negative = 1, Neutral = 2 };
constexpr size_t kNumClasses = 3;

// Accepts "positive|negative|neutral" and "1|-1|0"; emits words.
Label label_from_string(const std::string& s);  // throws InputError
std::string label_to_string(Label l);
int label_to_int(Label l);  // 1 / -1 / 0
Label label_from_int(int v);

enum class TaskKind { General, Targeted };
TaskKind task_from_string(const std::string& s);
std::string task_to_string(TaskKind t);

struct Sample {
  std::string id;
  std::string text;
  std::optional<std::string> target_entity;  // present iff targeted dataset
  Label label = Label::Neutral;
};

struct Dataset {
  std::string name;
  TaskKind task_kind = TaskKind::General;
  std::vector<Sample> samples;

  size_t size() const { return samples.size(); }
  std::array<size_t, kNumClasses> class_counts() const;
};

// Percentage per class, order (positive, negative, neutral).
struct ClassDistribution {
  std::array<double, kNumClasses> percent{};
  std::array<long, kNumClasses> rounded() const;  // Table-style whole points
};

// TSV interchange format: header "id<TAB>text<TAB>entity<TAB>label",
// UTF-8, LF line endings. Literal tab/newline/backslash inside a field are
// escaped as \t, \n, \\. The entity column is empty for general datasets.
std::string escape_field(const std::string& raw);
std::string unescape_field(const std::string& field);  // throws InputError

// Loads and fully validates a dataset; any schema violation throws
// InputError naming the offending line, and nothing is returned.
Dataset load_dataset(const std::string& path, TaskKind task_kind);

void save_dataset(const Dataset& dataset, const std::string& path);

ClassDistribution class_distribution(const Dataset& dataset);

// Deterministic shuffled partition: first part holds llround(fraction*n)
// samples. Throws InputError when either part would be empty.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double fraction,
                                  uint64_t seed);

// Case-insensitive substring test used by the targeted-task invariant.
bool contains_ci(const std::string& haystack, const std::string& needle);

}  // namespace sentipipe::corpus
