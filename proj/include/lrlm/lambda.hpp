#pragma once

// Untyped lambda calculus with integer literals and strict arithmetic
// primitives. Reduction is normal order (leftmost-outermost), which is the
// only order under which the Y combinator terminates on recursive recipes.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lrlm/error.hpp"

namespace lrlm::lambda {

enum class PrimOp { add, sub, mul, eq };

std::string_view to_string(PrimOp op) noexcept;

struct Node;

// Immutable handle to a term. Copies share structure.
class Expr {
 public:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const noexcept { return *node_; }

  template <class T>
  const T* as() const noexcept;

  bool same_object(const Expr& other) const noexcept { return node_ == other.node_; }

 private:
  std::shared_ptr<const Node> node_;
};

struct Var {
  std::string name;
};
struct Abs {
  std::string param;
  Expr body;
};
struct App {
  Expr fn;
  Expr arg;
};
struct IntLit {
  std::int64_t value;
};
struct Prim {
  PrimOp op;
  std::vector<Expr> args;
};
// `if0 c then a else b`: a when c reduces to 0, b for any other integer.
struct IfZero {
  Expr cond;
  Expr then_branch;
  Expr else_branch;
};

struct Node {
  std::variant<Var, Abs, App, IntLit, Prim, IfZero> value;
};

template <class T>
const T* Expr::as() const noexcept {
  return std::get_if<T>(&node_->value);
}

Expr var(std::string name);
Expr abs(std::string param, Expr body);
Expr app(Expr fn, Expr arg);
Expr app(Expr fn, std::initializer_list<Expr> args);
Expr lit(std::int64_t value);
Expr prim(PrimOp op, Expr lhs, Expr rhs);
Expr if_zero(Expr cond, Expr then_branch, Expr else_branch);

// Child index path from the root; Abs body = 0, App fn = 0 / arg = 1,
// Prim args by position, IfZero cond/then/else = 0/1/2.
using Path = std::vector<std::uint8_t>;

// Accepts `\` or `λ` for lambda, `\x y. e` as sugar for `\x. \y. e`,
// `add|sub|mul|eq a b`, and `if0 c then a else b`.
Expr parse_expr(std::string_view text);

std::string to_string(const Expr& e);

// Pretty-prints `e` and reports the [begin, end) character span of the
// subterm at `path`.
std::pair<std::string, std::pair<std::size_t, std::size_t>> render_with_span(const Expr& e,
                                                                              const Path& path);

std::set<std::string> free_vars(const Expr& e);

// Capture-avoiding e[x := a].
Expr substitute(const Expr& e, const std::string& x, const Expr& a);

// Stem plus a numeric suffix above every suffix used with that stem in
// either term.
std::string fresh_name(const std::string& base, const Expr& e, const Expr& a);

bool alpha_equivalent(const Expr& a, const Expr& b);
bool structurally_equal(const Expr& a, const Expr& b);

enum class StepKind { beta, delta };

struct Step {
  Expr result;
  Path redex;
  StepKind kind;
};

// One normal-order step, or nullopt when `e` is in normal form.
std::optional<Step> beta_step(const Expr& e);

struct ReductionStep {
  Path redex;
  Expr before;
  Expr after;
  StepKind kind;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  bool terminated = false;
  std::size_t fuel_used = 0;
};

struct Normalized {
  Expr term;
  ReductionTrace trace;
};

inline constexpr std::size_t default_fuel = 10'000;

class FuelExhausted : public Error {
 public:
  explicit FuelExhausted(ReductionTrace partial)
      : Error("FuelExhausted",
              "no normal form within " + std::to_string(partial.fuel_used) + " steps"),
        trace_(std::move(partial)) {}

  const ReductionTrace& trace() const noexcept { return trace_; }

 private:
  ReductionTrace trace_;
};

Normalized normalize(const Expr& e, std::size_t fuel = default_fuel);

// λf. (λx. f (x x)) (λx. f (x x))
Expr y_combinator();

// λf. λn. if0 n then 1 else mul n (f (sub n 1))
Expr factorial_recipe();

}  // namespace lrlm::lambda
