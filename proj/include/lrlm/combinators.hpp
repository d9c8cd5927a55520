#pragma once

#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "lrlm/document.hpp"
#include "lrlm/error.hpp"

namespace lrlm {

template <class F, class T>
auto map_op(F&& f, const std::vector<T>& xs) {
  std::vector<std::decay_t<std::invoke_result_t<F&, const T&>>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

template <class P, class T>
std::vector<T> filter_op(P&& p, const std::vector<T>& xs) {
  std::vector<T> out;
  for (const auto& x : xs)
    if (p(x)) out.push_back(x);
  return out;
}

// Left fold in list order. Throws EmptyReduce on an empty list.
template <class Op, class T>
T reduce_op(Op&& op, const std::vector<T>& xs) {
  if (xs.empty()) throw EmptyReduce();
  T acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = op(std::move(acc), xs[i]);
  return acc;
}

inline Document concat_op(const std::vector<Document>& xs) { return concat(xs); }

template <class A, class B>
std::vector<std::pair<A, B>> cross_op(const std::vector<A>& xs, const std::vector<B>& ys) {
  std::vector<std::pair<A, B>> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& x : xs)
    for (const auto& y : ys) out.emplace_back(x, y);
  return out;
}

}  // namespace lrlm
