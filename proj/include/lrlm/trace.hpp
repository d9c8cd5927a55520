#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lrlm/planner.hpp"

namespace lrlm {

enum class CallKind { detect, direct, leaf, compose, extract, synth };

std::string_view to_string(CallKind k) noexcept;

struct CallRecord {
  std::uint64_t index = 0;
  int depth = 0;
  std::size_t input_tokens = 0;
  std::size_t output_tokens = 0;
  double cost = 0.0;
  std::string backend;
  CallKind kind = CallKind::leaf;
  std::optional<bool> was_correct;
};

enum class EventKind {
  split,
  prune,
  empty_leaf,
  all_pruned,
  neural_phase,
  symbolic_phase,
  preview,
  no_relevant_documents,
  unrecognized_task,
  parse_failure
};

std::string_view to_string(EventKind k) noexcept;

// Structural log entry; contains no timing so traces stay reproducible.
struct TraceEvent {
  EventKind kind;
  int depth = 0;
  std::size_t tokens = 0;
  std::size_t count = 0;
  std::size_t extra = 0;
};

struct ExecTrace {
  std::vector<CallRecord> calls;  // ordered by call index
  std::size_t oracle_calls = 0;
  int max_depth = 0;
  double accumulated_cost = 0.0;
  std::size_t pruned_chunks = 0;
  std::vector<std::string> flags;
  std::vector<TraceEvent> events;

  void flag(const std::string& f);
  bool has_flag(std::string_view f) const;
};

CallRecord make_record(std::uint64_t index, int depth, CallKind kind, std::string_view backend,
                       const OracleCallRecord& r);

nlohmann::json to_json(const Strategy& s);
nlohmann::json to_json(const Plan& plan);
nlohmann::json to_json(const CostEstimate& e);
nlohmann::json to_json(const CallRecord& r);
nlohmann::json to_json(const ExecTrace& t);

// {plan, calls, oracle_calls, max_depth, accumulated_cost, answer, ...}
nlohmann::json trace_document(const Plan& plan, const ExecTrace& trace, const std::string& answer);
std::string dump_json(const nlohmann::json& j);

}  // namespace lrlm
