#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lrlm/task.hpp"

namespace lrlm {

using CountMap = std::map<std::string, std::int64_t>;

// "label:count" tokens, keys in sorted order.
std::string format_counts(const CountMap& counts);
CountMap parse_counts(std::string_view text);
CountMap merge_counts(CountMap a, const CountMap& b);

struct LabelRecord {
  std::uint64_t id = 0;
  std::string label;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

struct ParsedLabels {
  std::vector<LabelRecord> records;
  std::size_t malformed = 0;
};

// One `id<TAB>label` record per line; malformed lines are dropped and counted.
ParsedLabels parse_label_records(std::string_view text);
std::string format_label_records(const std::vector<LabelRecord>& records);

// Deterministic operators only; neural ones go through the oracle.
std::string compose_symbolic(ComposeOp op, const std::vector<std::string>& parts);

}  // namespace lrlm
