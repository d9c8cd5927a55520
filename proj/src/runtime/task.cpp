#include "lrlm/task.hpp"

#include <map>
#include <mutex>

namespace lrlm {

std::string_view to_string(TaskType t) noexcept {
  switch (t) {
    case TaskType::search: return "search";
    case TaskType::classify: return "classify";
    case TaskType::aggregate: return "aggregate";
    case TaskType::pairwise: return "pairwise";
    case TaskType::summarise: return "summarise";
    case TaskType::multi_hop: return "multi_hop";
  }
  return "?";
}

std::optional<TaskType> parse_task(std::string_view name) noexcept {
  for (auto t : all_tasks)
    if (to_string(t) == name) return t;
  return std::nullopt;
}

std::string_view to_string(ComposeOp op) noexcept {
  switch (op) {
    case ComposeOp::FilterBest: return "FilterBest";
    case ComposeOp::Concat: return "Concat";
    case ComposeOp::MergeCounts: return "MergeCounts";
    case ComposeOp::CrossFilter: return "CrossFilter";
    case ComposeOp::NeuralConcat: return "NeuralConcat";
    case ComposeOp::NeuralSynth: return "NeuralSynth";
  }
  return "?";
}

bool is_neural(ComposeOp op) noexcept {
  return op == ComposeOp::NeuralConcat || op == ComposeOp::NeuralSynth;
}

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Split: return "Split";
    case Stage::SplitDelta: return "SplitDelta";
    case Stage::Peek: return "Peek";
    case Stage::Filter: return "Filter";
    case Stage::MapOracle: return "MapOracle";
    case Stage::MapPeek: return "MapPeek";
    case Stage::Parse: return "Parse";
    case Stage::Cross: return "Cross";
    case Stage::Concat: return "Concat";
    case Stage::Merge: return "Merge";
    case Stage::Best: return "Best";
    case Stage::Synth: return "Synth";
  }
  return "?";
}

PlanRow lookup_plan(TaskType t) {
  using S = Stage;
  switch (t) {
    case TaskType::search:
      return {ComposeOp::FilterBest, {S::Split, S::MapPeek, S::Filter, S::MapOracle, S::Best}};
    case TaskType::classify:
      return {ComposeOp::Concat, {S::Split, S::MapOracle, S::Concat}};
    case TaskType::aggregate:
      return {ComposeOp::MergeCounts, {S::Split, S::MapOracle, S::Merge}};
    case TaskType::pairwise:
      return {ComposeOp::CrossFilter, {S::Split, S::MapOracle, S::Parse, S::Filter, S::Cross}};
    case TaskType::summarise:
      return {ComposeOp::NeuralConcat, {S::Split, S::MapOracle, S::Concat, S::Synth}};
    case TaskType::multi_hop:
      return {ComposeOp::NeuralSynth,
              {S::SplitDelta, S::MapPeek, S::Filter, S::MapOracle, S::Synth}};
  }
  return {ComposeOp::MergeCounts, {S::Split, S::MapOracle, S::Merge}};
}

bool pipeline_prunes(const std::vector<Stage>& pipeline) noexcept {
  for (std::size_t i = 0; i + 1 < pipeline.size(); ++i)
    if (pipeline[i] == Stage::MapPeek && pipeline[i + 1] == Stage::Filter) return true;
  return false;
}

std::string_view leaf_header(TaskType t) noexcept {
  switch (t) {
    case TaskType::search: return "find value:";
    case TaskType::classify: return "classify items:";
    case TaskType::aggregate: return "count categories:";
    case TaskType::pairwise: return "label items:";
    case TaskType::summarise: return "summarise:";
    case TaskType::multi_hop: return "extract facts:";
  }
  return "";
}

std::string_view compose_header(ComposeOp op) noexcept {
  return op == ComposeOp::NeuralSynth ? "synthesize:" : "summarise:";
}

std::size_t header_tokens(std::string_view header) noexcept {
  std::size_t n = 0;
  bool in = false;
  for (char c : header) {
    const bool sp = c == ' ' || c == '\t' || c == '\n';
    if (!sp && !in) ++n;
    in = !sp;
  }
  return n;
}

std::size_t max_leaf_header_tokens() noexcept {
  std::size_t h = 0;
  for (auto t : all_tasks) h = std::max(h, header_tokens(leaf_header(t)));
  return h;
}

std::string neutral_answer(TaskType t) { return t == TaskType::search ? "NONE" : ""; }

const Document& header_document(std::string_view text, TokenizerKind kind) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, Document> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(std::string(text), static_cast<int>(kind));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, Document::from_text(std::string(text) + " ", kind)).first;
  return it->second;
}

Document leaf_prompt(const Document& chunk, TaskType t) {
  return concat(header_document(leaf_header(t), chunk.tokenizer()), chunk);
}

Document compose_prompt(ComposeOp op, const std::vector<std::string>& parts) {
  std::string body(compose_header(op));
  for (const auto& p : parts) {
    body += ' ';
    body += p;
  }
  return Document::from_text(std::move(body));
}

Document detection_prompt(const Document& preview, std::size_t length) {
  const Document parts[] = {header_document(detection_header, preview.tokenizer()), preview,
                            Document::from_text(" len=" + std::to_string(length),
                                                preview.tokenizer())};
  return concat(parts);
}

std::size_t detection_prompt_tokens(std::size_t preview_tokens, std::size_t /*length*/) {
  return header_tokens(detection_header) + preview_tokens + 1;
}

Document synthesis_prompt(const Document& query, const Document& evidence) {
  const Document parts[] = {header_document(synthesis_header, query.tokenizer()), query,
                            evidence};
  return concat(parts);
}

}  // namespace lrlm
