#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lrlm/compose.hpp"
#include "lrlm/document.hpp"
#include "lrlm/oracle.hpp"
#include "lrlm/planner.hpp"
#include "lrlm/trace.hpp"

namespace lrlm {

struct ExecOptions {
  // Query terms for the preview filter; empty disables pruning.
  std::vector<std::string> relevance_keywords;
  int jobs = 1;
  // Index of the first oracle call this run makes.
  std::uint64_t first_index = 0;
};

struct ExecResult {
  std::string answer;
  ExecTrace trace;
};

// Query tokens of the form name:value.
std::vector<std::string> query_keywords(const Document& query);

// True when a token of peek(chunk, 0, preview) equals a keyword.
bool chunk_relevant(const Document& chunk, std::size_t preview,
                    const std::vector<std::string>& keywords);

// The fixed-point executor. Leaf calls are dispatched concurrently (up to
// `jobs` threads); call indices are assigned before dispatch so the trace
// does not depend on completion order.
ExecResult execute_phi(const Document& doc, const Plan& plan, Oracle& oracle,
                       const ExecOptions& options = {});

// Sequential reference implementation; produces identical traces.
ExecResult execute_phi_serial(const Document& doc, const Plan& plan, Oracle& oracle,
                              const ExecOptions& options = {});

using PairSet = std::set<std::pair<std::uint64_t, std::uint64_t>>;

struct PairPredicate {
  std::string name;
  std::function<bool(const LabelRecord&)> keep;
  std::function<bool(const LabelRecord&, const LabelRecord&)> relation;

  static PairPredicate same_label();
  static PairPredicate both(std::string label);
};

struct PairwiseResult {
  PairSet pairs;
  ExecTrace trace;
  std::size_t malformed = 0;
};

// Neural labelling over ceil(n / tau) chunks, then a symbolic filter and
// cross product that cost nothing.
PairwiseResult execute_pairwise(const Document& doc, const PairPredicate& predicate,
                                const Plan& plan, Oracle& oracle, const ExecOptions& options = {});

inline constexpr std::size_t default_preview_budget = 500;

struct MultihopResult {
  std::string answer;
  ExecTrace trace;
  std::vector<std::size_t> retained;
};

// Preview filter, one extraction per retained document, one synthesis.
MultihopResult execute_multihop(const std::vector<Document>& corpus, const Document& query,
                                Oracle& oracle, std::size_t preview_budget = default_preview_budget,
                                const ExecOptions& options = {});

std::string format_pairs(const PairSet& pairs);
PairSet parse_pairs(std::string_view text);

}  // namespace lrlm
