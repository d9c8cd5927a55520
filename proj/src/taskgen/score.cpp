#include <set>

#include "lrlm/taskgen.hpp"

namespace lrlm {

std::string least_common(const CountMap& counts) {
  std::string best;
  std::int64_t low = 0;
  for (const auto& [k, v] : counts)
    if (best.empty() || v < low) {
      best = k;
      low = v;
    }
  return best;
}

namespace {

template <class T>
double set_f1(const std::set<T>& pred, const std::set<T>& truth) {
  if (pred.empty() && truth.empty()) return 1.0;
  if (pred.empty() || truth.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& x : pred) hit += truth.count(x);
  if (hit == 0) return 0.0;
  const double p = static_cast<double>(hit) / static_cast<double>(pred.size());
  const double r = static_cast<double>(hit) / static_cast<double>(truth.size());
  return 2.0 * p * r / (p + r);
}

std::set<std::string> word_set(const std::string& s) {
  std::set<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) out.insert(s.substr(b, i - b));
  }
  return out;
}

}  // namespace

double score(const Answer& answer, const Answer& truth, Metric metric) {
  if (answer.index() != truth.index()) return 0.0;
  if (metric == Metric::exact) return answer == truth ? 1.0 : 0.0;
  if (const auto* p = std::get_if<PairSet>(&answer)) return set_f1(*p, std::get<PairSet>(truth));
  if (const auto* c = std::get_if<CountMap>(&answer)) {
    std::set<std::pair<std::string, std::int64_t>> a(c->begin(), c->end());
    const auto& tc = std::get<CountMap>(truth);
    std::set<std::pair<std::string, std::int64_t>> t(tc.begin(), tc.end());
    return set_f1(a, t);
  }
  return set_f1(word_set(std::get<std::string>(answer)), word_set(std::get<std::string>(truth)));
}

}  // namespace lrlm
