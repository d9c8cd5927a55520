#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lrlm/compose.hpp"
#include "lrlm/document.hpp"
#include "lrlm/executor.hpp"
#include "lrlm/task.hpp"

namespace lrlm {

enum class Family { needle, aggregate, pairwise, multihop };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;
TaskType task_of(Family f) noexcept;

using Answer = std::variant<std::string, CountMap, PairSet>;

struct TaskInstance {
  Family family = Family::aggregate;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  Document doc;                 // for multihop: the corpus joined in order
  std::vector<Document> corpus;  // multihop only
  Document query;
  Answer truth;
};

// Filler words; none of them is a query word or contains ':'.
const std::vector<std::string>& filler_vocabulary();

// One needle token `needle:<key>=<value>`. Tokens `key:<key>` sit at every
// second position before it and right after it, so any chunk that reaches
// the needle shows the key within its first three tokens.
TaskInstance gen_needle(std::size_t n, std::uint64_t seed);

// Question lines `Q<i> label:<category> ...` padded to exactly n tokens.
TaskInstance gen_aggregate(std::size_t n, std::size_t categories, std::uint64_t seed);

// `item:<id>:<label>` tokens separated by filler; truth is every
// same-label pair (i < j).
TaskInstance gen_pairwise(std::size_t items, std::uint64_t seed, std::size_t labels = 4);

// Two documents share the query topic and each holds one hop of the
// answer; `relevant` >= 2 adds same-topic documents without useful facts.
TaskInstance gen_multihop(std::size_t docs, std::uint64_t seed, std::size_t relevant = 2);

// Size-driven entry point used by the CLI and the simulator.
TaskInstance generate(Family family, std::size_t tokens, std::uint64_t seed);

std::vector<std::string> category_names(std::size_t categories);
std::string least_common(const CountMap& counts);

// Brute-force ground truth straight from the text.
std::string needle_truth(const Document& doc);
std::size_t needle_count(const Document& doc);
CountMap aggregate_truth(const Document& doc);
std::vector<LabelRecord> item_labels(const Document& doc);
PairSet pairwise_truth(const Document& doc);
std::string multihop_truth(const std::vector<Document>& corpus, const Document& query);

Answer typed_answer(Family family, const std::string& text);
std::string answer_text(const Answer& a);

enum class Metric { exact, f1 };
double score(const Answer& answer, const Answer& truth, Metric metric);

inline constexpr std::string_view instance_schema = "lrlm.instance/1";
nlohmann::json to_json(const TaskInstance& inst);
TaskInstance instance_from_json(const nlohmann::json& j);

}  // namespace lrlm
