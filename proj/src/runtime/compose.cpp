#include "lrlm/compose.hpp"

#include <charconv>

#include "lrlm/error.hpp"

namespace lrlm {

namespace {

template <class F>
void for_each_word(std::string_view text, F&& f) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\n' || text[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\n' && text[i] != '\t') ++i;
    if (i > b) f(text.substr(b, i - b));
  }
}

}  // namespace

std::string format_counts(const CountMap& counts) {
  std::string out;
  for (const auto& [k, v] : counts) {
    if (!out.empty()) out += ' ';
    out += k;
    out += ':';
    out += std::to_string(v);
  }
  return out;
}

CountMap parse_counts(std::string_view text) {
  CountMap out;
  for_each_word(text, [&](std::string_view w) {
    const auto colon = w.rfind(':');
    if (colon == std::string_view::npos || colon == 0) return;
    std::int64_t v = 0;
    const auto digits = w.substr(colon + 1);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || p != digits.data() + digits.size()) return;
    out[std::string(w.substr(0, colon))] += v;
  });
  return out;
}

CountMap merge_counts(CountMap a, const CountMap& b) {
  for (const auto& [k, v] : b) a[k] += v;
  return a;
}

ParsedLabels parse_label_records(std::string_view text) {
  ParsedLabels out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto nl = text.find('\n', i);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(i, nl - i);
    i = nl + 1;
    while (!line.empty() && (line.front() == ' ' || line.front() == '\r')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    LabelRecord r;
    bool ok = tab != std::string_view::npos && tab > 0 && tab + 1 < line.size();
    if (ok) {
      auto [p, ec] = std::from_chars(line.data(), line.data() + tab, r.id);
      ok = ec == std::errc{} && p == line.data() + tab;
      r.label = std::string(line.substr(tab + 1));
      ok = ok && r.label.find_first_of(" \t") == std::string::npos;
    }
    if (ok)
      out.records.push_back(std::move(r));
    else
      ++out.malformed;
  }
  return out;
}

std::string format_label_records(const std::vector<LabelRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += std::to_string(r.id);
    out += '\t';
    out += r.label;
    out += '\n';
  }
  return out;
}

std::string compose_symbolic(ComposeOp op, const std::vector<std::string>& parts) {
  switch (op) {
    case ComposeOp::FilterBest:
      for (const auto& p : parts)
        if (!p.empty() && p != "NONE") return p;
      return "NONE";
    case ComposeOp::MergeCounts: {
      CountMap acc;
      for (const auto& p : parts) acc = merge_counts(std::move(acc), parse_counts(p));
      return format_counts(acc);
    }
    case ComposeOp::Concat:
    case ComposeOp::CrossFilter: {
      // Label records are newline-terminated, so plain concatenation keeps
      // them parseable; text answers get a separating space.
      std::string out;
      for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!out.empty() && out.back() != '\n') out += ' ';
        out += p;
      }
      return out;
    }
    case ComposeOp::NeuralConcat:
    case ComposeOp::NeuralSynth:
      break;
  }
  throw Error("InvalidCompose", std::string(to_string(op)) + " requires the oracle");
}

}  // namespace lrlm
