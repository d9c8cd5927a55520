#include <algorithm>
#include <cctype>
#include <map>

#include "lrlm/lambda.hpp"

namespace lrlm::lambda {

std::string_view to_string(PrimOp op) noexcept {
  switch (op) {
    case PrimOp::add: return "add";
    case PrimOp::sub: return "sub";
    case PrimOp::mul: return "mul";
    case PrimOp::eq: return "eq";
  }
  return "?";
}

namespace {

Expr make(auto&& v) {
  return Expr(std::make_shared<const Node>(Node{std::forward<decltype(v)>(v)}));
}

void collect_free(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          if (std::find(bound.begin(), bound.end(), n.name) == bound.end()) out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Abs>) {
          bound.push_back(n.param);
          collect_free(n.body, bound, out);
          bound.pop_back();
        } else if constexpr (std::is_same_v<T, App>) {
          collect_free(n.fn, bound, out);
          collect_free(n.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Prim>) {
          for (const auto& a : n.args) collect_free(a, bound, out);
        } else if constexpr (std::is_same_v<T, IfZero>) {
          collect_free(n.cond, bound, out);
          collect_free(n.then_branch, bound, out);
          collect_free(n.else_branch, bound, out);
        }
      },
      e.node().value);
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Abs>) {
          out.insert(n.param);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, App>) {
          collect_names(n.fn, out);
          collect_names(n.arg, out);
        } else if constexpr (std::is_same_v<T, Prim>) {
          for (const auto& a : n.args) collect_names(a, out);
        } else if constexpr (std::is_same_v<T, IfZero>) {
          collect_names(n.cond, out);
          collect_names(n.then_branch, out);
          collect_names(n.else_branch, out);
        }
      },
      e.node().value);
}

// "x12" -> ("x", 12); "x" -> ("x", 0).
std::pair<std::string, std::uint64_t> split_suffix(const std::string& name) {
  std::size_t cut = name.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
  if (cut == 0 || cut == name.size()) return {name, 0};
  const auto digits = name.substr(cut);
  if (digits.size() > 18) return {name, 0};
  return {name.substr(0, cut), std::stoull(digits)};
}

bool alpha_eq(const Expr& a, const Expr& b, std::vector<std::string>& env_a,
              std::vector<std::string>& env_b) {
  if (a.node().value.index() != b.node().value.index()) return false;
  if (const auto* va = a.as<Var>()) {
    const auto* vb = b.as<Var>();
    auto ia = std::find(env_a.rbegin(), env_a.rend(), va->name);
    auto ib = std::find(env_b.rbegin(), env_b.rend(), vb->name);
    const bool bound_a = ia != env_a.rend();
    const bool bound_b = ib != env_b.rend();
    if (bound_a != bound_b) return false;
    if (!bound_a) return va->name == vb->name;
    return (ia - env_a.rbegin()) == (ib - env_b.rbegin());
  }
  if (const auto* xa = a.as<Abs>()) {
    const auto* xb = b.as<Abs>();
    env_a.push_back(xa->param);
    env_b.push_back(xb->param);
    const bool eq = alpha_eq(xa->body, xb->body, env_a, env_b);
    env_a.pop_back();
    env_b.pop_back();
    return eq;
  }
  if (const auto* pa = a.as<App>()) {
    const auto* pb = b.as<App>();
    return alpha_eq(pa->fn, pb->fn, env_a, env_b) && alpha_eq(pa->arg, pb->arg, env_a, env_b);
  }
  if (const auto* la = a.as<IntLit>()) return la->value == b.as<IntLit>()->value;
  if (const auto* ra = a.as<Prim>()) {
    const auto* rb = b.as<Prim>();
    if (ra->op != rb->op || ra->args.size() != rb->args.size()) return false;
    for (std::size_t i = 0; i < ra->args.size(); ++i)
      if (!alpha_eq(ra->args[i], rb->args[i], env_a, env_b)) return false;
    return true;
  }
  const auto* ia = a.as<IfZero>();
  const auto* ib = b.as<IfZero>();
  return alpha_eq(ia->cond, ib->cond, env_a, env_b) &&
         alpha_eq(ia->then_branch, ib->then_branch, env_a, env_b) &&
         alpha_eq(ia->else_branch, ib->else_branch, env_a, env_b);
}

}  // namespace

Expr var(std::string name) { return make(Var{std::move(name)}); }
Expr abs(std::string param, Expr body) { return make(Abs{std::move(param), std::move(body)}); }
Expr app(Expr fn, Expr arg) { return make(App{std::move(fn), std::move(arg)}); }
Expr app(Expr fn, std::initializer_list<Expr> args) {
  for (const auto& a : args) fn = app(std::move(fn), a);
  return fn;
}
Expr lit(std::int64_t value) { return make(IntLit{value}); }
Expr prim(PrimOp op, Expr lhs, Expr rhs) {
  return make(Prim{op, {std::move(lhs), std::move(rhs)}});
}
Expr if_zero(Expr cond, Expr then_branch, Expr else_branch) {
  return make(IfZero{std::move(cond), std::move(then_branch), std::move(else_branch)});
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(e, bound, out);
  return out;
}

std::string fresh_name(const std::string& base, const Expr& e, const Expr& a) {
  std::set<std::string> names;
  collect_names(e, names);
  collect_names(a, names);
  names.insert(base);
  const auto stem = split_suffix(base).first;
  std::uint64_t highest = 0;
  for (const auto& n : names) {
    auto [s, k] = split_suffix(n);
    if (s == stem) highest = std::max(highest, k);
  }
  return stem + std::to_string(highest + 1);
}

Expr substitute(const Expr& e, const std::string& x, const Expr& a) {
  if (!free_vars(e).contains(x)) return e;
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Var>) {
          return n.name == x ? a : e;
        } else if constexpr (std::is_same_v<T, Abs>) {
          // x is free in e, so n.param != x here.
          if (!free_vars(a).contains(n.param)) return abs(n.param, substitute(n.body, x, a));
          auto renamed = fresh_name(n.param, e, a);
          auto body = substitute(n.body, n.param, var(renamed));
          return abs(std::move(renamed), substitute(body, x, a));
        } else if constexpr (std::is_same_v<T, App>) {
          return app(substitute(n.fn, x, a), substitute(n.arg, x, a));
        } else if constexpr (std::is_same_v<T, Prim>) {
          Prim out{n.op, {}};
          for (const auto& arg : n.args) out.args.push_back(substitute(arg, x, a));
          return make(std::move(out));
        } else if constexpr (std::is_same_v<T, IfZero>) {
          return if_zero(substitute(n.cond, x, a), substitute(n.then_branch, x, a),
                         substitute(n.else_branch, x, a));
        } else {
          return e;
        }
      },
      e.node().value);
}

bool alpha_equivalent(const Expr& a, const Expr& b) {
  std::vector<std::string> env_a, env_b;
  return alpha_eq(a, b, env_a, env_b);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.same_object(b)) return true;
  if (a.node().value.index() != b.node().value.index()) return false;
  if (const auto* va = a.as<Var>()) return va->name == b.as<Var>()->name;
  if (const auto* xa = a.as<Abs>()) {
    const auto* xb = b.as<Abs>();
    return xa->param == xb->param && structurally_equal(xa->body, xb->body);
  }
  if (const auto* pa = a.as<App>()) {
    const auto* pb = b.as<App>();
    return structurally_equal(pa->fn, pb->fn) && structurally_equal(pa->arg, pb->arg);
  }
  if (const auto* la = a.as<IntLit>()) return la->value == b.as<IntLit>()->value;
  if (const auto* ra = a.as<Prim>()) {
    const auto* rb = b.as<Prim>();
    if (ra->op != rb->op || ra->args.size() != rb->args.size()) return false;
    for (std::size_t i = 0; i < ra->args.size(); ++i)
      if (!structurally_equal(ra->args[i], rb->args[i])) return false;
    return true;
  }
  const auto* ia = a.as<IfZero>();
  const auto* ib = b.as<IfZero>();
  return structurally_equal(ia->cond, ib->cond) &&
         structurally_equal(ia->then_branch, ib->then_branch) &&
         structurally_equal(ia->else_branch, ib->else_branch);
}

Expr y_combinator() {
  auto half = abs("x", app(var("f"), app(var("x"), var("x"))));
  return abs("f", app(half, half));
}

Expr factorial_recipe() {
  auto body = if_zero(var("n"), lit(1),
                      prim(PrimOp::mul, var("n"),
                           app(var("f"), prim(PrimOp::sub, var("n"), lit(1)))));
  return abs("f", abs("n", std::move(body)));
}

}  // namespace lrlm::lambda
