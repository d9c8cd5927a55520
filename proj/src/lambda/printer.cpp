#include "lrlm/lambda.hpp"

namespace lrlm::lambda {

namespace {

struct Printer {
  std::string out;
  const Path* target = nullptr;
  Path cur;
  std::pair<std::size_t, std::size_t> span{0, 0};

  bool compound(const Expr& e) const { return !e.as<Var>() && !e.as<IntLit>(); }

  void child(const Expr& e, std::uint8_t idx, bool parens) {
    cur.push_back(idx);
    if (parens) out += '(';
    emit(e);
    if (parens) out += ')';
    cur.pop_back();
  }

  void emit(const Expr& e) {
    const std::size_t begin = out.size();
    if (const auto* v = e.as<Var>()) {
      out += v->name;
    } else if (const auto* l = e.as<IntLit>()) {
      out += std::to_string(l->value);
    } else if (const auto* a = e.as<Abs>()) {
      out += "\\" + a->param + ". ";
      child(a->body, 0, false);
    } else if (const auto* p = e.as<App>()) {
      child(p->fn, 0, p->fn.as<Abs>() || p->fn.as<IfZero>());
      out += ' ';
      child(p->arg, 1, compound(p->arg));
    } else if (const auto* r = e.as<Prim>()) {
      out += to_string(r->op);
      for (std::size_t i = 0; i < r->args.size(); ++i) {
        out += ' ';
        child(r->args[i], static_cast<std::uint8_t>(i), compound(r->args[i]));
      }
    } else if (const auto* z = e.as<IfZero>()) {
      out += "if0 ";
      child(z->cond, 0, false);
      out += " then ";
      child(z->then_branch, 1, false);
      out += " else ";
      child(z->else_branch, 2, false);
    }
    if (target && cur == *target) span = {begin, out.size()};
  }
};

}  // namespace

std::string to_string(const Expr& e) {
  Printer p;
  p.emit(e);
  return std::move(p.out);
}

std::pair<std::string, std::pair<std::size_t, std::size_t>> render_with_span(const Expr& e,
                                                                              const Path& path) {
  Printer p;
  p.target = &path;
  p.emit(e);
  return {std::move(p.out), p.span};
}

}  // namespace lrlm::lambda
