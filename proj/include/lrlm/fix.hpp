#pragma once

#include <utility>

namespace lrlm {

// Host-level fixed point: fix(g)(args...) == g(fix(g), args...).
template <class G>
class Fix {
 public:
  explicit Fix(G g) : g_(std::move(g)) {}

  template <class... Args>
  decltype(auto) operator()(Args&&... args) const {
    return g_(*this, std::forward<Args>(args)...);
  }

 private:
  G g_;
};

template <class G>
Fix<G> fix(G g) {
  return Fix<G>(std::move(g));
}

}  // namespace lrlm
