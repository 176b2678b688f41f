#include "ovv/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <vector>

namespace ovv {

namespace {

struct Token {
  enum class Kind { Ident, Int, Str, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::int64_t num = 0;
  int line = 1;
  int col = 1;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;
  std::vector<Token> out;
  ParseError error;
  bool failed = false;

  void fail(std::string msg) {
    if (!failed) error = {std::move(msg), line, col};
    failed = true;
  }

  char peek() const { return pos < src.size() ? src[pos] : '\0'; }
  char peek2() const { return pos + 1 < src.size() ? src[pos + 1] : '\0'; }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void push(Token::Kind k, std::string text, int l, int c,
            std::int64_t num = 0) {
    out.push_back({k, std::move(text), num, l, c});
  }

  void run() {
    while (pos < src.size() && !failed) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos < src.size() && peek() != '\n') advance();
        continue;
      }
      int l = line, cl = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(peek())) ||
                peek() == '_')) {
          id.push_back(peek());
          advance();
        }
        push(Token::Kind::Ident, std::move(id), l, cl);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && std::isdigit(static_cast<unsigned char>(peek2())))) {
        std::string digits;
        if (c == '-') {
          digits.push_back('-');
          advance();
        }
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(peek()))) {
          digits.push_back(peek());
          advance();
        }
        push(Token::Kind::Int, digits, l, cl, std::strtoll(digits.c_str(),
                                                           nullptr, 10));
        continue;
      }
      if (c == '"') {
        advance();
        std::string s;
        while (pos < src.size() && peek() != '"' && peek() != '\n') {
          s.push_back(peek());
          advance();
        }
        if (peek() != '"') {
          fail("unterminated string literal");
          return;
        }
        advance();
        push(Token::Kind::Str, std::move(s), l, cl);
        continue;
      }
      if (c == '-' && peek2() == '>') {
        advance();
        advance();
        push(Token::Kind::Punct, "->", l, cl);
        continue;
      }
      if (c == '?' && peek2() == ':') {
        advance();
        advance();
        push(Token::Kind::Punct, "?:", l, cl);
        continue;
      }
      if (std::string("=.{}(),@?!:").find(c) != std::string::npos) {
        advance();
        push(Token::Kind::Punct, std::string(1, c), l, cl);
        continue;
      }
      fail(std::string("unexpected character '") + c + "'");
      return;
    }
    push(Token::Kind::End, "", line, col);
  }
};

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  ParseError error;
  bool failed = false;

  const Token& peek() const { return toks[pos]; }
  const Token& next() { return toks[pos++]; }

  std::nullptr_t fail(std::string msg) {
    if (!failed) error = {std::move(msg), peek().line, peek().col};
    failed = true;
    return nullptr;
  }

  bool at_punct(const std::string& p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool at_ident(const std::string& id) const {
    return peek().kind == Token::Kind::Ident && peek().text == id;
  }
  bool accept_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    ++pos;
    return true;
  }
  bool expect_punct(const std::string& p) {
    if (accept_punct(p)) return true;
    fail("expected '" + p + "'");
    return false;
  }
  bool expect_ident(const std::string& id) {
    if (at_ident(id)) {
      ++pos;
      return true;
    }
    fail("expected '" + id + "'");
    return false;
  }

  std::string parse_name() {
    if (peek().kind != Token::Kind::Ident) {
      fail("expected an identifier");
      return "";
    }
    return next().text;
  }

  static Span span_of(const Token& t) { return {t.line, t.col, t.line, t.col}; }

  bool parse_mode(Mode& out) {
    if (accept_punct("?")) {
      out = Mode::Uncertain;
      return true;
    }
    if (accept_punct("!")) {
      out = Mode::Certain;
      return true;
    }
    fail("expected '?' or '!'");
    return false;
  }

  VType parse_vtype() {
    if (failed) return nullptr;
    if (accept_punct("?")) return t_unknown();
    if (accept_punct("(")) {
      VType a = parse_vtype();
      if (!a) return nullptr;
      if (!expect_punct(")")) return nullptr;
      return a;
    }
    if (peek().kind == Token::Kind::Int && peek().num == 1) {
      ++pos;
      return t_unit();
    }
    if (peek().kind != Token::Kind::Ident) {
      fail("expected a value type");
      return nullptr;
    }
    std::string id = next().text;
    if (id == "Num") return t_num();
    if (id == "Str") return t_str();
    if (id == "Bool") return t_bool();
    if (id == "U") {
      CType c = parse_ctype();
      return c ? t_thunk(c) : nullptr;
    }
    if (id == "Ref") {
      VType a = parse_vtype();
      return a ? t_ref(a) : nullptr;
    }
    if (id == "Db") {
      VType a = parse_vtype();
      return a ? t_db(a) : nullptr;
    }
    if (id == "Dict") {
      if (!expect_punct("{")) return nullptr;
      DictType d;
      if (!accept_punct("}")) {
        do {
          ValuePtr k = parse_value();
          if (!k) return nullptr;
          if (!expect_punct(":")) return nullptr;
          VType a = parse_vtype();
          if (!a) return nullptr;
          d.entries.emplace_back(std::move(k), std::move(a));
        } while (accept_punct(","));
        if (!expect_punct("}")) return nullptr;
      }
      return t_dict(std::move(d));
    }
    fail("unknown type name '" + id + "'");
    return nullptr;
  }

  CType parse_ctype() {
    if (failed) return nullptr;
    if (accept_punct("(")) {
      CType c = parse_ctype();
      if (!c) return nullptr;
      if (!expect_punct(")")) return nullptr;
      return c;
    }
    if (at_ident("F")) {
      ++pos;
      VType a = parse_vtype();
      return a ? t_f(a) : nullptr;
    }
    VType a = parse_vtype();
    if (!a) return nullptr;
    if (!expect_punct("->")) return nullptr;
    CType c = parse_ctype();
    return c ? t_arrow(a, c) : nullptr;
  }

  ValuePtr parse_value() {
    if (failed) return nullptr;
    const Token& t = peek();
    Span sp = span_of(t);
    if (t.kind == Token::Kind::Int) {
      ++pos;
      return v_num(t.num, sp);
    }
    if (t.kind == Token::Kind::Str) {
      ++pos;
      return v_str(t.text, sp);
    }
    if (t.kind != Token::Kind::Ident) {
      fail("expected a value");
      return nullptr;
    }
    std::string id = next().text;
    if (id == "true") return v_bool(true, sp);
    if (id == "false") return v_bool(false, sp);
    if (id == "unit") return v_unit(sp);
    if (id == "dict") {
      if (!expect_punct("{")) return nullptr;
      DictVal d;
      if (!accept_punct("}")) {
        do {
          ValuePtr k = parse_value();
          if (!k) return nullptr;
          if (!expect_punct("->")) return nullptr;
          ValuePtr v = parse_value();
          if (!v) return nullptr;
          d.entries.emplace_back(std::move(k), std::move(v));
        } while (accept_punct(","));
        if (!expect_punct("}")) return nullptr;
      }
      return v_dict(std::move(d), {}, sp);
    }
    if (id == "othunk") {
      if (!expect_punct("{")) return nullptr;
      ExprPtr body = parse_expr();
      if (!body) return nullptr;
      if (!expect_punct("}")) return nullptr;
      return v_othunk(std::move(body), {}, sp);
    }
    return v_var(std::move(id), sp);
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_expr_head();
    if (!e) return nullptr;
    for (;;) {
      if (accept_punct("@")) {
        ValuePtr v = parse_value();
        if (!v) return nullptr;
        e = mk_expr(AppE{e, std::move(v)}, {}, e->src);
        continue;
      }
      if (accept_punct("?:")) {
        CType c = parse_ctype();
        if (!c) return nullptr;
        e = mk_expr(AscribeE{e, ExprAnnot{c}}, {}, e->src);
        continue;
      }
      return e;
    }
  }

  ExprPtr parse_expr_head() {
    if (failed) return nullptr;
    Span sp = span_of(peek());
    if (accept_punct("(")) {
      ExprPtr e = parse_expr();
      if (!e) return nullptr;
      if (!expect_punct(")")) return nullptr;
      return e;
    }
    if (peek().kind != Token::Kind::Ident) {
      fail("expected an expression");
      return nullptr;
    }
    std::string kw = next().text;
    if (kw == "let") {
      std::string x = parse_name();
      if (failed) return nullptr;
      if (!expect_punct("=")) return nullptr;
      ExprPtr bound = parse_expr();
      if (!bound) return nullptr;
      if (!expect_ident("in")) return nullptr;
      ExprPtr body = parse_expr();
      if (!body) return nullptr;
      return mk_expr(LetE{std::move(x), std::move(bound), std::move(body)}, {},
                     sp);
    }
    if (kw == "lam") {
      std::string x = parse_name();
      if (failed) return nullptr;
      if (!expect_punct(".")) return nullptr;
      ExprPtr body = parse_expr();
      if (!body) return nullptr;
      return mk_expr(LamE{std::move(x), std::move(body)}, {}, sp);
    }
    if (kw == "ret" || kw == "force" || kw == "ref" || kw == "get") {
      ValuePtr v = parse_value();
      if (!v) return nullptr;
      if (kw == "ret") return mk_expr(RetE{std::move(v)}, {}, sp);
      if (kw == "force") return mk_expr(ForceE{std::move(v)}, {}, sp);
      if (kw == "ref") return mk_expr(RefE{std::move(v)}, {}, sp);
      return mk_expr(GetE{std::move(v)}, {}, sp);
    }
    if (kw == "set") {
      ValuePtr target = parse_value();
      if (!target) return nullptr;
      ValuePtr v = parse_value();
      if (!v) return nullptr;
      return mk_expr(SetE{std::move(target), std::move(v)}, {}, sp);
    }
    if (kw == "ext") {
      ValuePtr d = parse_value();
      if (!d) return nullptr;
      ValuePtr k = parse_value();
      if (!k) return nullptr;
      ValuePtr v = parse_value();
      if (!v) return nullptr;
      return mk_expr(ExtE{std::move(d), std::move(k), std::move(v)}, {}, sp);
    }
    if (kw == "proj") {
      Mode m;
      if (!parse_mode(m)) return nullptr;
      ValuePtr d = parse_value();
      if (!d) return nullptr;
      ValuePtr k = parse_value();
      if (!k) return nullptr;
      return mk_expr(ProjE{m, std::move(d), std::move(k)}, {}, sp);
    }
    if (kw == "openDb") {
      Mode m;
      if (!parse_mode(m)) return nullptr;
      ValuePtr p = parse_value();
      if (!p) return nullptr;
      return mk_expr(OpenDbE{m, std::move(p)}, {}, sp);
    }
    if (kw == "filterDb") {
      Mode m;
      if (!parse_mode(m)) return nullptr;
      ValuePtr d = parse_value();
      if (!d) return nullptr;
      ValuePtr p = parse_value();
      if (!p) return nullptr;
      return mk_expr(FilterDbE{m, std::move(d), std::move(p)}, {}, sp);
    }
    if (kw == "joinDb") {
      Mode m;
      if (!parse_mode(m)) return nullptr;
      ValuePtr d1 = parse_value();
      if (!d1) return nullptr;
      ValuePtr k1 = parse_value();
      if (!k1) return nullptr;
      ValuePtr d2 = parse_value();
      if (!d2) return nullptr;
      ValuePtr k2 = parse_value();
      if (!k2) return nullptr;
      return mk_expr(JoinDbE{m, std::move(d1), std::move(k1), std::move(d2),
                             std::move(k2)},
                     {}, sp);
    }
    if (kw == "rcc") {
      std::string meta = parse_name();
      if (failed) return nullptr;
      if (!expect_punct("{")) return nullptr;
      ExprPtr cont = parse_expr();
      if (!cont) return nullptr;
      if (!expect_punct("}")) return nullptr;
      return mk_expr(RccE{std::move(meta), std::move(cont)}, {}, sp);
    }
    --pos;
    fail("unexpected '" + kw + "' at the start of an expression");
    return nullptr;
  }
};

}  // namespace

Result<ExprPtr, ParseError> parse_program(const std::string& text) {
  using R = Result<ExprPtr, ParseError>;
  Lexer lex{text};
  lex.run();
  if (lex.failed) return R::error(lex.error);
  Parser p{std::move(lex.out)};
  ExprPtr e = p.parse_expr();
  if (!e || p.failed) return R::error(p.error);
  if (p.peek().kind != Token::Kind::End) {
    p.fail("trailing input after the program");
    return R::error(p.error);
  }
  return e;
}

Result<CType, ParseError> parse_ctype(const std::string& text) {
  using R = Result<CType, ParseError>;
  Lexer lex{text};
  lex.run();
  if (lex.failed) return R::error(lex.error);
  Parser p{std::move(lex.out)};
  CType c = p.parse_ctype();
  if (!c || p.failed) return R::error(p.error);
  if (p.peek().kind != Token::Kind::End) {
    p.fail("trailing input after the type");
    return R::error(p.error);
  }
  return c;
}

}  // namespace ovv
