#include <algorithm>
#include <exception>

#include <omp.h>

#include "lrlm/error.hpp"
#include "lrlm/executor.hpp"

namespace lrlm {

std::vector<std::string> query_keywords(const Document& query) {
  std::vector<std::string> out;
  query.for_each_token([&](std::string_view t) {
    if (t.empty() || t.front() == '#' || t.find(':') == std::string_view::npos) return;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.emplace_back(t);
  });
  return out;
}

bool chunk_relevant(const Document& chunk, std::size_t preview,
                    const std::vector<std::string>& keywords) {
  const auto head = peek(chunk, 0, std::min(preview, chunk.size()));
  bool hit = false;
  head.for_each_token([&](std::string_view t) {
    if (!hit && std::find(keywords.begin(), keywords.end(), t) != keywords.end()) hit = true;
  });
  return hit;
}

namespace {

enum class NodeKind { direct, leaf, empty, internal };

struct Node {
  Document chunk;
  int depth = 0;
  NodeKind kind = NodeKind::leaf;
  std::vector<std::size_t> children;
  bool has_call = false;
  std::uint64_t call_index = 0;
  std::string answer;
  double cost = 0.0;
  CallRecord record;
};

class TreeRun {
 public:
  TreeRun(const Document& doc, const Plan& plan, Oracle& oracle, const ExecOptions& opt)
      : doc_(doc), plan_(plan), oracle_(oracle), opt_(opt), next_index_(opt.first_index) {
    prune_ = pipeline_prunes(plan.pipeline) && !opt.relevance_keywords.empty();
    if (!plan.direct()) ceiling_ = ceil_log(doc.size(), plan.tau_star, plan.k_star) + 2;
  }

  ExecResult run() {
    validate_plan(plan_, doc_.size(), oracle_.profile());
    build(doc_, 0);
    dispatch_leaves();
    reduce();
    ExecResult out;
    out.answer = nodes_[0].answer;
    for (const auto& n : nodes_)
      if (n.has_call) trace_.calls.push_back(n.record);
    std::sort(trace_.calls.begin(), trace_.calls.end(),
              [](const CallRecord& a, const CallRecord& b) { return a.index < b.index; });
    trace_.oracle_calls = trace_.calls.size();
    trace_.accumulated_cost = nodes_[0].cost;
    out.trace = std::move(trace_);
    return out;
  }

 private:
  // Symbolic phase: the whole recursion tree in depth-first order, with
  // call indices fixed up front.
  std::size_t build(const Document& p, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    nodes_[id].chunk = p;
    nodes_[id].depth = depth;
    trace_.max_depth = std::max(trace_.max_depth, depth);
    if (plan_.direct()) {
      nodes_[id].kind = NodeKind::direct;
      assign_call(id);
      return id;
    }
    if (depth > ceiling_) throw PlanInvalid("recursion exceeded the stack ceiling d + 2");
    if (p.size() <= plan_.tau_star) {
      if (p.empty()) {
        nodes_[id].kind = NodeKind::empty;
        nodes_[id].answer = neutral_answer(plan_.task);
        trace_.events.push_back({EventKind::empty_leaf, depth, 0, 0, 0});
        trace_.flag("empty_leaf");
      } else {
        nodes_[id].kind = NodeKind::leaf;
        assign_call(id);
      }
      return id;
    }
    nodes_[id].kind = NodeKind::internal;
    auto chunks = split(p, plan_.k_star);
    trace_.events.push_back({EventKind::split, depth, p.size(), chunks.size(), 0});
    if (prune_) {
      const std::size_t preview = plan_.tau_star / 10;
      std::vector<Document> kept;
      for (auto& c : chunks)
        if (chunk_relevant(c, preview, opt_.relevance_keywords)) kept.push_back(std::move(c));
      const std::size_t dropped = chunks.size() - kept.size();
      trace_.events.push_back({EventKind::prune, depth, preview, kept.size(), dropped});
      trace_.pruned_chunks += dropped;
      chunks = std::move(kept);
      if (chunks.empty()) {
        trace_.events.push_back({EventKind::all_pruned, depth, p.size(), 0, 0});
        trace_.flag("all_chunks_pruned");
      }
    }
    for (const auto& c : chunks) {
      const auto child = build(c, depth + 1);
      nodes_[id].children.push_back(child);
    }
    if (is_neural(plan_.compose) && !nodes_[id].children.empty()) assign_call(id);
    return id;
  }

  void assign_call(std::size_t id) {
    nodes_[id].has_call = true;
    nodes_[id].call_index = next_index_++;
  }

  // Neural phase: independent leaf calls, any order, results by slot.
  void dispatch_leaves() {
    std::vector<std::size_t> leaves;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].has_call && nodes_[i].kind != NodeKind::internal) leaves.push_back(i);
    std::vector<std::exception_ptr> errors(leaves.size());
    const int jobs = std::max(1, opt_.jobs);
    const auto count = static_cast<long>(leaves.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1 && count > 1)
    for (long i = 0; i < count; ++i) {
      auto& node = nodes_[leaves[static_cast<std::size_t>(i)]];
      try {
        const bool direct = node.kind == NodeKind::direct;
        const auto prompt = direct ? node.chunk : leaf_prompt(node.chunk, plan_.task);
        auto reply = oracle_.call(prompt, node.call_index);
        node.answer = std::move(reply.answer);
        node.cost = reply.record.cost;
        node.record = make_record(node.call_index, node.depth,
                                  direct ? CallKind::direct : CallKind::leaf, oracle_.backend(),
                                  reply.record);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    // Leaves are in index order, so the first failure is the lowest index.
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Composition, children before parents.
  void reduce() {
    for (std::size_t id = nodes_.size(); id-- > 0;) {
      auto& node = nodes_[id];
      if (node.kind != NodeKind::internal) continue;
      std::vector<std::string> parts;
      double c = 0.0;
      for (auto ch : node.children) {
        parts.push_back(nodes_[ch].answer);
        c += nodes_[ch].cost;
      }
      if (parts.empty()) {
        node.answer = neutral_answer(plan_.task);
      } else if (is_neural(plan_.compose)) {
        auto reply = oracle_.call(compose_prompt(plan_.compose, parts), node.call_index);
        reply.record.cost = compose_cost(oracle_.profile(), parts.size(), plan_.compose);
        node.answer = std::move(reply.answer);
        node.record = make_record(node.call_index, node.depth, CallKind::compose,
                                  oracle_.backend(), reply.record);
        c += reply.record.cost;
      } else {
        node.answer = compose_symbolic(plan_.compose, parts);
        c += 0.0;
      }
      node.cost = c;
    }
  }

  const Document& doc_;
  const Plan& plan_;
  Oracle& oracle_;
  const ExecOptions& opt_;
  bool prune_ = false;
  int ceiling_ = 0;
  std::uint64_t next_index_;
  std::vector<Node> nodes_;
  ExecTrace trace_;
};

}  // namespace

ExecResult execute_phi(const Document& doc, const Plan& plan, Oracle& oracle,
                       const ExecOptions& options) {
  return TreeRun(doc, plan, oracle, options).run();
}

}  // namespace lrlm
