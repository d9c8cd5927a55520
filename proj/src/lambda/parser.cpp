#include <cctype>
#include <charconv>

#include "lrlm/lambda.hpp"

namespace lrlm::lambda {

namespace {

enum class Tok { ident, number, lambda, dot, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\\') {
      out.push_back({Tok::lambda, "\\", i++});
    } else if (s.substr(i, 2) == "\xCE\xBB") {  // UTF-8 λ
      out.push_back({Tok::lambda, "\\", i});
      i += 2;
    } else if (c == '.') {
      out.push_back({Tok::dot, ".", i++});
    } else if (c == '(') {
      out.push_back({Tok::lparen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::rparen, ")", i++});
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      const std::size_t start = i++;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::number, std::string(s.substr(start, i - start)), start});
    } else if (ident_start(c)) {
      const std::size_t start = i++;
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start});
    } else {
      throw SyntaxError(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

std::optional<PrimOp> prim_keyword(const std::string& w) {
  if (w == "add") return PrimOp::add;
  if (w == "sub") return PrimOp::sub;
  if (w == "mul") return PrimOp::mul;
  if (w == "eq") return PrimOp::eq;
  return std::nullopt;
}

bool reserved(const std::string& w) {
  return w == "if0" || w == "then" || w == "else" || prim_keyword(w).has_value();
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr parse_all() {
    auto e = expr();
    if (peek().kind != Tok::end) fail("trailing input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(peek().pos, msg); }

  bool is_word(const char* w) const { return peek().kind == Tok::ident && peek().text == w; }

  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "'");
    ++at_;
  }

  bool starts_atom() const {
    const auto& t = peek();
    if (t.kind == Tok::number || t.kind == Tok::lparen) return true;
    return t.kind == Tok::ident && (t.text == "if0" || !reserved(t.text) ||
                                    prim_keyword(t.text).has_value());
  }

  Expr expr() {
    if (peek().kind == Tok::lambda) return lambda_expr();
    if (is_word("if0")) return if_expr();
    return application();
  }

  Expr lambda_expr() {
    take();
    std::vector<std::string> params;
    while (peek().kind == Tok::ident) {
      if (reserved(peek().text)) fail("reserved word used as parameter");
      params.push_back(take().text);
    }
    if (params.empty()) fail("expected parameter after lambda");
    if (peek().kind != Tok::dot) fail("expected '.'");
    take();
    auto body = expr();
    for (auto it = params.rbegin(); it != params.rend(); ++it) body = abs(*it, std::move(body));
    return body;
  }

  Expr if_expr() {
    expect_word("if0");
    auto c = expr();
    expect_word("then");
    auto t = expr();
    expect_word("else");
    auto f = expr();
    return if_zero(std::move(c), std::move(t), std::move(f));
  }

  Expr application() {
    auto head = operand();
    for (;;) {
      // A trailing lambda or conditional extends as far right as possible.
      if (peek().kind == Tok::lambda || is_word("if0")) return app(std::move(head), expr());
      if (!starts_atom()) return head;
      head = app(std::move(head), operand());
    }
  }

  // An atom, or a saturated primitive `op a b`.
  Expr operand() {
    if (peek().kind == Tok::ident) {
      if (auto op = prim_keyword(peek().text)) {
        take();
        auto lhs = atom();
        auto rhs = atom();
        return prim(*op, std::move(lhs), std::move(rhs));
      }
    }
    return atom();
  }

  Expr atom() {
    const auto& t = peek();
    switch (t.kind) {
      case Tok::number: {
        const auto tok = take();
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (ec != std::errc{}) throw SyntaxError(tok.pos, "integer literal out of range");
        return lit(v);
      }
      case Tok::lparen: {
        take();
        auto e = expr();
        if (peek().kind != Tok::rparen) fail("expected ')'");
        take();
        return e;
      }
      case Tok::ident:
        if (reserved(t.text)) fail("unexpected keyword '" + t.text + "'");
        return var(take().text);
      case Tok::lambda: {
        return lambda_expr();
      }
      default:
        fail("expected expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(lex(text)).parse_all(); }

}  // namespace lrlm::lambda
