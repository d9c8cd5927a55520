#include "lrlm/lambda.hpp"

namespace lrlm::lambda {

namespace {

std::int64_t apply_prim(PrimOp op, std::int64_t a, std::int64_t b) {
  switch (op) {
    case PrimOp::add: return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
    case PrimOp::sub: return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
    case PrimOp::mul: return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
    case PrimOp::eq: return a == b ? 1 : 0;
  }
  return 0;
}

std::optional<Step> step_at(const Expr& e, Path& path) {
  if (const auto* p = e.as<App>()) {
    if (const auto* f = p->fn.as<Abs>())
      return Step{substitute(f->body, f->param, p->arg), path, StepKind::beta};
    path.push_back(0);
    if (auto s = step_at(p->fn, path)) {
      path.pop_back();
      return Step{app(s->result, p->arg), std::move(s->redex), s->kind};
    }
    path.back() = 1;
    if (auto s = step_at(p->arg, path)) {
      path.pop_back();
      return Step{app(p->fn, s->result), std::move(s->redex), s->kind};
    }
    path.pop_back();
    return std::nullopt;
  }
  if (const auto* a = e.as<Abs>()) {
    path.push_back(0);
    auto s = step_at(a->body, path);
    path.pop_back();
    if (!s) return std::nullopt;
    return Step{abs(a->param, s->result), std::move(s->redex), s->kind};
  }
  if (const auto* r = e.as<Prim>()) {
    bool all_lit = true;
    for (const auto& x : r->args) all_lit = all_lit && x.as<IntLit>();
    if (all_lit && r->args.size() == 2)
      return Step{lit(apply_prim(r->op, r->args[0].as<IntLit>()->value,
                                 r->args[1].as<IntLit>()->value)),
                  path, StepKind::delta};
    for (std::size_t i = 0; i < r->args.size(); ++i) {
      path.push_back(static_cast<std::uint8_t>(i));
      auto s = step_at(r->args[i], path);
      path.pop_back();
      if (s) {
        auto args = r->args;
        args[i] = s->result;
        Prim next{r->op, std::move(args)};
        return Step{Expr(std::make_shared<const Node>(Node{std::move(next)})), std::move(s->redex),
                    s->kind};
      }
    }
    return std::nullopt;
  }
  if (const auto* z = e.as<IfZero>()) {
    if (const auto* c = z->cond.as<IntLit>())
      return Step{c->value == 0 ? z->then_branch : z->else_branch, path, StepKind::delta};
    const Expr* parts[] = {&z->cond, &z->then_branch, &z->else_branch};
    for (std::uint8_t i = 0; i < 3; ++i) {
      path.push_back(i);
      auto s = step_at(*parts[i], path);
      path.pop_back();
      if (s) {
        Expr c = z->cond, t = z->then_branch, f = z->else_branch;
        (i == 0 ? c : i == 1 ? t : f) = s->result;
        return Step{if_zero(std::move(c), std::move(t), std::move(f)), std::move(s->redex),
                    s->kind};
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Step> beta_step(const Expr& e) {
  Path path;
  return step_at(e, path);
}

Normalized normalize(const Expr& e, std::size_t fuel) {
  ReductionTrace trace;
  Expr cur = e;
  for (;;) {
    auto s = beta_step(cur);
    if (!s) {
      trace.terminated = true;
      return {cur, std::move(trace)};
    }
    if (trace.fuel_used == fuel) throw FuelExhausted(std::move(trace));
    trace.steps.push_back({s->redex, cur, s->result, s->kind});
    ++trace.fuel_used;
    cur = std::move(s->result);
  }
}

}  // namespace lrlm::lambda
