#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "lrlm/compose.hpp"
#include "lrlm/oracle.hpp"
#include "lrlm/rng.hpp"

namespace lrlm {

namespace {

using SegKey = std::tuple<const TokenizedText*, std::size_t, std::size_t>;

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::string join_words(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

// Ground-truth answers keyed by the prompt's segment identity. The pinned
// texts keep the raw pointers in the keys valid.
struct StochasticOracle::Cache {
  std::shared_mutex mu;
  std::map<std::vector<SegKey>, Interpretation> answers;
  std::vector<std::shared_ptr<const TokenizedText>> pinned;
  std::set<const TokenizedText*> pinned_set;

  Interpretation lookup(const Document& prompt) {
    std::vector<SegKey> key;
    key.reserve(prompt.segments().size());
    for (const auto& s : prompt.segments()) key.emplace_back(s.src.get(), s.begin, s.end);
    {
      std::shared_lock lock(mu);
      if (auto it = answers.find(key); it != answers.end()) return it->second;
    }
    auto value = interpret_prompt(prompt);
    std::unique_lock lock(mu);
    for (const auto& s : prompt.segments())
      if (pinned_set.insert(s.src.get()).second) pinned.push_back(s.src);
    answers.emplace(std::move(key), value);
    return value;
  }
};

std::string corrupt_answer(AnswerKind kind, const std::string& answer, std::uint64_t seed) {
  Rng rng(seed);
  switch (kind) {
    case AnswerKind::task_name:
      return "unknown";
    case AnswerKind::value:
      if (answer == "NONE") return "v" + std::to_string(rng.below(1'000'000));
      return answer + "~" + std::to_string(rng.below(1000));
    case AnswerKind::counts: {
      auto counts = parse_counts(answer);
      if (counts.empty()) return "unknown:1";
      auto it = std::next(counts.begin(), static_cast<long>(rng.below(counts.size())));
      const auto delta = static_cast<std::int64_t>(rng.between(1, 3));
      const bool down = rng.below(2) == 0 && it->second >= delta;
      it->second += down ? -delta : delta;
      return format_counts(counts);
    }
    case AnswerKind::labels: {
      auto parsed = parse_label_records(answer);
      auto& recs = parsed.records;
      if (recs.empty()) return format_label_records({{999'999, "bogus"}});
      std::vector<std::string> labels;
      for (const auto& r : recs) labels.push_back(r.label);
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      auto& victim = recs[rng.below(recs.size())];
      if (labels.size() < 2) {
        victim.label += "x";
      } else {
        std::vector<std::string> others;
        for (const auto& l : labels)
          if (l != victim.label) others.push_back(l);
        victim.label = others[rng.below(others.size())];
      }
      return format_label_records(recs);
    }
    case AnswerKind::facts: {
      auto ws = split_words(answer);
      if (ws.empty()) return "fact:bogus:rel:none";
      ws.erase(ws.begin() + static_cast<long>(rng.below(ws.size())));
      return join_words(ws);
    }
    case AnswerKind::synthesis:
      if (answer == "NONE") return "bogus";
      return answer + "~" + std::to_string(rng.below(1000));
    case AnswerKind::summary: {
      auto ws = split_words(answer);
      if (ws.empty()) return "noise";
      ws.pop_back();
      return join_words(ws);
    }
  }
  return answer + "~";
}

StochasticOracle::StochasticOracle(OracleProfile profile, std::uint64_t seed)
    : StochasticOracle(std::move(profile), seed, std::make_shared<Cache>()) {}

StochasticOracle::StochasticOracle(OracleProfile profile, std::uint64_t seed,
                                   std::shared_ptr<Cache> cache)
    : Oracle(std::move(profile)), seed_(seed), cache_(std::move(cache)) {}

StochasticOracle StochasticOracle::with_seed(std::uint64_t seed) const {
  return StochasticOracle(profile_, seed, cache_);
}

bool StochasticOracle::draw_correct(std::uint64_t index, std::size_t length) const noexcept {
  const double u = to_unit(derive_seed({seed_, index, length}));
  return u < accuracy_at(profile_, static_cast<double>(length));
}

OracleReply StochasticOracle::simulate(const Document& prompt, std::uint64_t index) {
  auto truth = cache_->lookup(prompt);
  OracleReply r;
  const bool ok = draw_correct(index, prompt.size());
  r.answer = ok ? truth.answer
                : corrupt_answer(truth.kind, truth.answer,
                                 derive_seed({seed_, index, prompt.size(), 0xC0FFEEULL}));
  r.record = priced(prompt.size(), profile_.n_out_bar);
  r.record.was_correct = ok;
  return r;
}

OracleReply StochasticOracle::do_call(const Document& prompt, std::uint64_t index) {
  return simulate(prompt, index);
}

}  // namespace lrlm
