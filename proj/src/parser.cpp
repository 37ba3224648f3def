#include <cctype>

#include "dlcd/syntax.hpp"

namespace dlcd {
namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok type;
  std::string text;
  int line;
  int col;
};

// Shape of a parsed atom before the ontology-wide domain is known.
enum class AtomShape { Lin, Diff, Shared, Defined };

struct Lexer {
  std::vector<Token> tokens;
  CdKind pragma = CdKind::None;

  explicit Lexer(const std::string& s) {
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (s[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
        ++i;
      }
    };
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '#') {
        size_t e = s.find('\n', i);
        if (e == std::string::npos) e = s.size();
        std::string body = s.substr(i, e - i);
        if (body.rfind("#!domain", 0) == 0) {
          std::string k = body.substr(8);
          k.erase(0, k.find_first_not_of(" \t"));
          k.erase(k.find_last_not_of(" \t\r") + 1);
          if (k == "lin") pragma = CdKind::Lin;
          else if (k == "diff") pragma = CdKind::Diff;
        }
        advance(e - i);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          ++j;
        tokens.push_back({Tok::Ident, s.substr(i, j - i), line, col});
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        tokens.push_back({Tok::Number, s.substr(i, j - i), line, col});
        advance(j - i);
      } else if (std::string("()[].=>+-/").find(c) != std::string::npos) {
        tokens.push_back({Tok::Sym, std::string(1, c), line, col});
        advance(1);
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    tokens.push_back({Tok::End, "", line, col});
  }
};

bool is_keyword(const std::string& s) {
  return s == "SubClassOf" || s == "and" || s == "or" || s == "some" || s == "all" ||
         s == "not" || s == "Top" || s == "Bot";
}

struct LinearSide {
  std::map<std::string, Rational> vars;
  Rational constant = 0;
  bool has_constant = false;
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  bool allow_self_diff = false;
  // Per-atom shapes with the position of their opening bracket.
  std::vector<std::pair<AtomShape, Token>> shapes;

  const Token& peek(size_t k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  bool at_sym(const std::string& s) const { return peek().type == Tok::Sym && peek().text == s; }
  bool at_word(const std::string& s) const {
    return peek().type == Tok::Ident && peek().text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + (peek().type == Tok::End ? " at end of input"
                                                    : " near '" + peek().text + "'"),
                     peek().line, peek().col);
  }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) fail("expected '" + s + "'");
    ++pos;
  }

  Rational number() {
    if (peek().type != Tok::Number) fail("expected a number");
    std::string t = peek().text;
    ++pos;
    if (at_sym("/") && peek(1).type == Tok::Number) {
      ++pos;
      std::string d = peek().text;
      ++pos;
      if (d.find_first_not_of('0') == std::string::npos) fail("zero denominator");
      return make_rational(t + "/" + d);
    }
    return make_rational(t);
  }

  LinearSide side() {
    LinearSide s;
    bool first = true;
    while (true) {
      int sign = 1;
      if (at_sym("+") || at_sym("-")) {
        if (at_sym("-")) sign = -1;
        ++pos;
      } else if (!first) {
        break;
      }
      Rational coeff = 1;
      bool explicit_coeff = false;
      if (peek().type == Tok::Number) {
        coeff = number();
        explicit_coeff = true;
      }
      if (peek().type == Tok::Ident && !is_keyword(peek().text)) {
        Rational c = coeff * sign;
        Rational sum = s.vars[peek().text] + c;
        if (sum == 0) {
          s.vars.erase(peek().text);
        } else {
          s.vars[peek().text] = sum;
        }
        ++pos;
      } else if (explicit_coeff) {
        s.constant += coeff * sign;
        s.has_constant = true;
      } else {
        fail("expected a term");
      }
      first = false;
    }
    return s;
  }

  static bool single_unit_var(const LinearSide& s) {
    return s.vars.size() == 1 && s.vars.begin()->second == 1;
  }

  // Parses the inside of [ ... ] and records its shape.
  Constraint atom_body(AtomShape& shape) {
    if (at_word("Top") && peek(1).type == Tok::Sym && peek(1).text == "(") {
      pos += 2;
      if (peek().type != Tok::Ident || is_keyword(peek().text)) fail("expected a variable");
      std::string v = peek().text;
      ++pos;
      expect_sym(")");
      shape = AtomShape::Defined;
      return Defined{v};
    }
    Token start = peek();
    LinearSide l = side();
    if (!at_sym("=") && !at_sym(">")) fail("expected '=' or '>'");
    bool gt = at_sym(">");
    ++pos;
    LinearSide r = side();
    if (gt) {
      if (!single_unit_var(l) || l.has_constant || !r.vars.empty())
        throw ParseError("inequalities must have the form x > q", start.line, start.col);
      shape = AtomShape::Diff;
      return DiffConstraint::gt(l.vars.begin()->first, r.constant);
    }
    if (!r.vars.empty()) {
      if (!single_unit_var(l) || !single_unit_var(r) || r.has_constant)
        throw ParseError(
            "variables on the right-hand side are only allowed in atoms x + q = y",
            start.line, start.col);
      std::string x = l.vars.begin()->first;
      std::string y = r.vars.begin()->first;
      if (x == y && !allow_self_diff)
        throw ParseError("difference atoms need two distinct variables", start.line,
                         start.col);
      shape = AtomShape::Diff;
      return DiffConstraint::diff(x, l.constant, y);
    }
    if (l.has_constant && !l.vars.empty())
      throw ParseError("constants belong on the right-hand side of an equation",
                       start.line, start.col);
    if (single_unit_var(l)) {
      shape = AtomShape::Shared;
      return DiffConstraint::eq(l.vars.begin()->first, r.constant);
    }
    if (l.has_constant && l.constant != 0)
      throw ParseError("constants belong on the right-hand side of an equation",
                       start.line, start.col);
    shape = AtomShape::Lin;
    LinConstraint c;
    c.coeffs = l.vars;
    c.rhs = r.constant;
    return c;
  }

  Concept concept_expr() {
    Concept c = conjunction();
    while (at_word("or")) {
      ++pos;
      c = disj(c, conjunction());
    }
    return c;
  }

  Concept conjunction() {
    Concept c = unary();
    while (at_word("and")) {
      ++pos;
      c = conj(c, unary());
    }
    return c;
  }

  Concept unary() {
    if (at_word("not")) {
      ++pos;
      return neg(unary());
    }
    if (peek().type == Tok::Ident && !is_keyword(peek().text) &&
        peek(1).type == Tok::Ident && (peek(1).text == "some" || peek(1).text == "all")) {
      std::string role = peek().text;
      bool ex = peek(1).text == "some";
      pos += 2;
      Concept f = unary();
      return ex ? some(role, f) : all(role, f);
    }
    return primary();
  }

  Concept primary() {
    if (at_sym("(")) {
      ++pos;
      Concept c = concept_expr();
      expect_sym(")");
      return c;
    }
    if (at_sym("[")) {
      Token start = peek();
      ++pos;
      AtomShape shape;
      Constraint c = atom_body(shape);
      expect_sym("]");
      shapes.emplace_back(shape, start);
      return atom(std::move(c));
    }
    if (at_word("Top")) {
      ++pos;
      return top();
    }
    if (at_word("Bot")) {
      ++pos;
      return bot();
    }
    if (peek().type == Tok::Ident && !is_keyword(peek().text)) {
      std::string n = peek().text;
      ++pos;
      return name(n);
    }
    fail("expected a concept");
  }

  Gci gci() {
    Concept l = concept_expr();
    if (!at_word("SubClassOf")) fail("expected 'SubClassOf'");
    ++pos;
    Concept r = concept_expr();
    return {l, r};
  }

  // Decides the domain from the recorded shapes.
  CdKind resolve(CdKind hint) const {
    const Token* lin = nullptr;
    const Token* diff = nullptr;
    bool any = false;
    for (const auto& [shape, tok] : shapes) {
      any = true;
      if (shape == AtomShape::Lin && !lin) lin = &tok;
      if (shape == AtomShape::Diff && !diff) diff = &tok;
    }
    auto mixed = [](const Token& t) {
      throw MixedDomainError(
          "line " + std::to_string(t.line) + ", column " + std::to_string(t.col) +
          ": linear equations and difference constraints cannot be mixed; their union "
          "is not convex (x > q together with linear equations can force a disjunction)");
    };
    if (lin && diff) mixed(lin->line > diff->line ||
                                   (lin->line == diff->line && lin->col > diff->col)
                               ? *lin
                               : *diff);
    if (hint == CdKind::Lin && diff) mixed(*diff);
    if (hint == CdKind::Diff && lin) mixed(*lin);
    if (lin) return CdKind::Lin;
    if (diff) return CdKind::Diff;
    if (hint != CdKind::None) return hint;
    return any ? CdKind::Lin : CdKind::None;
  }
};

Concept settle(const Concept& c, CdKind kind) {
  if (kind != CdKind::Lin) return c;
  return map_atoms(c, [](const Constraint& a) -> Concept {
    auto d = std::get_if<DiffConstraint>(&a);
    if (!d || d->kind != DiffConstraint::Kind::Eq) return nullptr;
    LinConstraint l;
    l.coeffs[d->x] = 1;
    l.rhs = d->q;
    return atom(l);
  });
}

}  // namespace

Ontology parse_ontology(const std::string& text, CdKind hint) {
  Lexer lx(text);
  Parser p{lx.tokens};
  if (hint == CdKind::None) hint = lx.pragma;
  std::vector<Gci> raw;
  while (p.peek().type != Tok::End) {
    raw.push_back(p.gci());
    p.expect_sym(".");
  }
  Ontology o;
  o.cd_kind = p.resolve(hint);
  for (const auto& g : raw) o.axioms.push_back({settle(g.lhs, o.cd_kind), settle(g.rhs, o.cd_kind)});
  return o;
}

Concept parse_concept(const std::string& text, CdKind kind) {
  Lexer lx(text);
  Parser p{lx.tokens};
  Concept c = p.concept_expr();
  if (p.peek().type != Tok::End) p.fail("unexpected trailing input");
  return settle(c, p.resolve(kind));
}

Gci parse_gci(const std::string& text, CdKind kind) {
  Lexer lx(text);
  Parser p{lx.tokens};
  Gci g = p.gci();
  if (p.at_sym(".")) ++p.pos;
  if (p.peek().type != Tok::End) p.fail("unexpected trailing input");
  CdKind k = p.resolve(kind);
  return {settle(g.lhs, k), settle(g.rhs, k)};
}

Constraint parse_constraint(const std::string& text, CdKind kind, bool allow_self_diff) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t == "Bot") {
    if (kind == CdKind::Diff) return DiffConstraint::bot();
    LinConstraint l;
    l.rhs = 1;
    return l;
  }
  Lexer lx(t);
  Parser p{lx.tokens};
  p.allow_self_diff = allow_self_diff;
  AtomShape shape;
  Constraint c = p.atom_body(shape);
  if (p.peek().type != Tok::End) p.fail("unexpected trailing input");
  p.shapes.emplace_back(shape, lx.tokens[0]);
  return *settle(atom(c), p.resolve(kind))->atom;
}

}  // namespace dlcd
