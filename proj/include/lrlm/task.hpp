#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrlm/document.hpp"

namespace lrlm {

enum class TaskType { search, classify, aggregate, pairwise, summarise, multi_hop };

inline constexpr std::array<TaskType, 6> all_tasks = {
    TaskType::search,   TaskType::classify,  TaskType::aggregate,
    TaskType::pairwise, TaskType::summarise, TaskType::multi_hop};

std::string_view to_string(TaskType t) noexcept;
std::optional<TaskType> parse_task(std::string_view name) noexcept;

enum class ComposeOp { FilterBest, Concat, MergeCounts, CrossFilter, NeuralConcat, NeuralSynth };

std::string_view to_string(ComposeOp op) noexcept;
// Symbolic operators cost nothing and always preserve the answer.
bool is_neural(ComposeOp op) noexcept;

enum class Stage {
  Split,
  SplitDelta,
  Peek,
  Filter,
  MapOracle,
  MapPeek,
  Parse,
  Cross,
  Concat,
  Merge,
  Best,
  Synth
};

std::string_view to_string(Stage s) noexcept;

struct PlanRow {
  ComposeOp compose;
  std::vector<Stage> pipeline;
};

PlanRow lookup_plan(TaskType t);

// A pipeline prunes chunks when a previewing map is followed by a filter.
bool pipeline_prunes(const std::vector<Stage>& pipeline) noexcept;

std::string_view leaf_header(TaskType t) noexcept;
std::string_view compose_header(ComposeOp op) noexcept;
inline constexpr std::string_view detection_header =
    "Select from T: search classify aggregate pairwise summarise multi_hop ; meta:";
inline constexpr std::string_view synthesis_header = "answer";
inline constexpr std::size_t detection_preview_tokens = 500;

// Header token count under the whitespace measure.
std::size_t header_tokens(std::string_view header) noexcept;
// Largest leaf header; the planner reserves this much of the window.
std::size_t max_leaf_header_tokens() noexcept;

// Neutral element returned for an empty leaf.
std::string neutral_answer(TaskType t);

Document leaf_prompt(const Document& chunk, TaskType t);
Document compose_prompt(ComposeOp op, const std::vector<std::string>& parts);
Document detection_prompt(const Document& preview, std::size_t length);
std::size_t detection_prompt_tokens(std::size_t preview_tokens, std::size_t length);
Document synthesis_prompt(const Document& query, const Document& evidence);

// Cached header document for `text` under `kind`.
const Document& header_document(std::string_view text, TokenizerKind kind);

}  // namespace lrlm
