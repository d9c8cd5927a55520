#include <map>
#include <vector>

#include "lrlm/compose.hpp"
#include "lrlm/oracle.hpp"

namespace lrlm {

namespace {

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

// Number of prompt tokens consumed by `header`, or 0 when it does not match.
std::size_t match_header(const Document& p, std::string_view header) {
  const auto ws = words(header);
  if (p.size() < ws.size()) return 0;
  std::size_t i = 0;
  for (const auto& s : p.segments()) {
    for (std::size_t t = s.begin; t < s.end && i < ws.size(); ++t, ++i)
      if (s.src->token(t) != ws[i]) return 0;
    if (i == ws.size()) break;
  }
  return ws.size();
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string find_value(const Document& d) {
  std::string out = "NONE";
  bool found = false;
  d.for_each_token([&](std::string_view t) {
    if (found || !starts_with(t, "needle:")) return;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) return;
    out = std::string(t.substr(eq + 1));
    found = true;
  });
  return out;
}

std::string count_labels(const Document& d) {
  CountMap counts;
  d.for_each_token([&](std::string_view t) {
    if (starts_with(t, "label:") && t.size() > 6) ++counts[std::string(t.substr(6))];
  });
  return format_counts(counts);
}

// item:<id>:<label>
std::string label_items(const Document& d) {
  std::string out;
  d.for_each_token([&](std::string_view t) {
    if (!starts_with(t, "item:")) return;
    const auto rest = t.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= rest.size()) return;
    out.append(rest.substr(0, colon));
    out += '\t';
    out.append(rest.substr(colon + 1));
    out += '\n';
  });
  return out;
}

std::string lead_summary(const Document& d) {
  std::string out;
  std::size_t taken = 0;
  for (const auto& s : d.segments()) {
    for (std::size_t t = s.begin; t < s.end && taken < summary_lead_tokens; ++t, ++taken) {
      if (!out.empty()) out += ' ';
      out.append(s.src->token(t));
    }
    if (taken == summary_lead_tokens) break;
  }
  return out;
}

std::string collect_facts(const Document& d) {
  std::string out;
  d.for_each_token([&](std::string_view t) {
    if (!starts_with(t, "fact:")) return;
    if (!out.empty()) out += ' ';
    out.append(t);
  });
  return out;
}

std::vector<std::string_view> colon_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  for (;;) {
    const auto c = s.find(':', i);
    out.push_back(s.substr(i, c == std::string_view::npos ? s.npos : c - i));
    if (c == std::string_view::npos) break;
    i = c + 1;
  }
  return out;
}

// q:<subject>:<rel1>:<rel2> joined through fact:<s>:<rel>:<o> tokens.
std::string synthesize(const Document& d) {
  std::vector<std::string_view> q;
  std::map<std::pair<std::string, std::string>, std::string> facts;
  d.for_each_token([&](std::string_view t) {
    if (starts_with(t, "q:") && q.empty()) q = colon_fields(t);
    if (starts_with(t, "fact:")) {
      auto f = colon_fields(t);
      if (f.size() == 4) facts.emplace(std::make_pair(std::string(f[1]), std::string(f[2])),
                                       std::string(f[3]));
    }
  });
  if (q.size() != 4) return "NONE";
  auto hop = facts.find({std::string(q[1]), std::string(q[2])});
  if (hop == facts.end()) return "NONE";
  auto end = facts.find({hop->second, std::string(q[3])});
  return end == facts.end() ? "NONE" : end->second;
}

std::string detect(const Document& d) {
  std::string out = "unknown";
  bool done = false;
  d.for_each_token([&](std::string_view t) {
    if (done || t.size() < 2 || t.front() != '#') return;
    done = true;
    if (auto task = parse_task(t.substr(1))) out = std::string(to_string(*task));
  });
  return out;
}

Interpretation leaf_semantics(TaskType t, const Document& content) {
  switch (t) {
    case TaskType::search: return {AnswerKind::value, find_value(content)};
    case TaskType::aggregate: return {AnswerKind::counts, count_labels(content)};
    case TaskType::classify:
    case TaskType::pairwise: return {AnswerKind::labels, label_items(content)};
    case TaskType::summarise: return {AnswerKind::summary, lead_summary(content)};
    case TaskType::multi_hop: return {AnswerKind::facts, collect_facts(content)};
  }
  return {AnswerKind::summary, lead_summary(content)};
}

}  // namespace

Interpretation interpret_prompt(const Document& prompt) {
  const auto rest = [&](std::size_t h) { return peek(prompt, h, prompt.size()); };
  if (auto h = match_header(prompt, detection_header))
    return {AnswerKind::task_name, detect(rest(h))};
  for (auto t : all_tasks)
    if (auto h = match_header(prompt, leaf_header(t))) return leaf_semantics(t, rest(h));
  if (auto h = match_header(prompt, compose_header(ComposeOp::NeuralSynth)))
    return {AnswerKind::facts, collect_facts(rest(h))};
  if (auto h = match_header(prompt, synthesis_header))
    return {AnswerKind::synthesis, synthesize(rest(h))};
  // A raw document, handed over whole when it fits the window.
  if (!prompt.empty()) {
    const auto first = prompt.token(0);
    if (first.size() > 1 && first.front() == '#')
      if (auto t = parse_task(first.substr(1))) return leaf_semantics(*t, prompt);
  }
  return {AnswerKind::summary, lead_summary(prompt)};
}

OracleReply SymbolicOracle::do_call(const Document& prompt, std::uint64_t /*index*/) {
  OracleReply r;
  r.answer = interpret_prompt(prompt).answer;
  // Simulated backends bill the profile's expected output length.
  r.record = priced(prompt.size(), profile_.n_out_bar);
  r.record.was_correct = true;
  return r;
}

}  // namespace lrlm
