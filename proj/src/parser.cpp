#include "cqadb/parser.hpp"

#include <cctype>
#include <deque>
#include <sstream>

namespace cqadb {

namespace {

enum class Tok {
  Ident,
  Number,
  Str,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Dot,
  Colon,
  Arrow,
  Pipe,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Str: return "quoted symbol";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Pipe: return "'|'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok type = Tok::End;
  std::string text;   // identifier or quoted-symbol contents
  Rational num = 0;   // Tok::Number value
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  const Token& peek(std::size_t ahead = 0) {
    while (buf_.size() <= ahead) buf_.push_back(lex());
    return buf_[ahead];
  }

  Token take() {
    peek();
    Token t = buf_.front();
    buf_.pop_front();
    return t;
  }

  Token expect(Tok type, const std::string& context) {
    if (peek().type != type) {
      fail("expected " + std::string(tok_name(type)) + " in " + context +
               ", found " + describe(peek()),
           peek());
    }
    return take();
  }

  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.col);
  }

  static std::string describe(const Token& t) {
    if (t.type == Tok::Ident) return "'" + t.text + "'";
    if (t.type == Tok::Number) return "number '" + to_string(Value::rational(t.num)) + "'";
    if (t.type == Tok::Str) return "symbol '" + t.text + "'";
    return tok_name(t.type);
  }

 private:
  Token lex() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.type = Tok::End;
      return t;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        bump();
      }
      t.type = Tok::Ident;
      t.text = text_.substr(start, pos_ - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      t.type = Tok::Number;
      t.num = lex_number(t);
      return t;
    }
    if (c == '\'') {
      bump();
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '\'' && text_[pos_] != '\n') {
        bump();
      }
      if (pos_ >= text_.size() || text_[pos_] != '\'') {
        throw ParseError("unterminated quoted symbol", t.line, t.col);
      }
      t.type = Tok::Str;
      t.text = text_.substr(start, pos_ - start);
      bump();  // closing quote
      if (t.text.empty()) {
        throw ParseError("empty quoted symbol", t.line, t.col);
      }
      return t;
    }
    auto two = [&](char second) {
      return pos_ + 1 < text_.size() && text_[pos_ + 1] == second;
    };
    switch (c) {
      case '(': bump(); t.type = Tok::LParen; return t;
      case ')': bump(); t.type = Tok::RParen; return t;
      case '[': bump(); t.type = Tok::LBracket; return t;
      case ']': bump(); t.type = Tok::RBracket; return t;
      case ',': bump(); t.type = Tok::Comma; return t;
      case ';': bump(); t.type = Tok::Semi; return t;
      case '.': bump(); t.type = Tok::Dot; return t;
      case ':': bump(); t.type = Tok::Colon; return t;
      case '|': bump(); t.type = Tok::Pipe; return t;
      case '=': bump(); t.type = Tok::Eq; return t;
      case '!':
        if (two('=')) { bump(); bump(); t.type = Tok::Ne; return t; }
        break;
      case '<':
        bump();
        if (pos_ < text_.size() && text_[pos_] == '=') { bump(); t.type = Tok::Le; }
        else { t.type = Tok::Lt; }
        return t;
      case '>':
        bump();
        if (pos_ < text_.size() && text_[pos_] == '=') { bump(); t.type = Tok::Ge; }
        else { t.type = Tok::Gt; }
        return t;
      case '-':
        if (two('>')) { bump(); bump(); t.type = Tok::Arrow; return t; }
        break;
      default: break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line,
                     t.col);
  }

  Rational lex_number(const Token& at) {
    bool neg = false;
    if (text_[pos_] == '-') {
      neg = true;
      bump();
    }
    auto digits = [&]() {
      std::string d;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        d += text_[pos_];
        bump();
      }
      return d;
    };
    std::string numerator = digits();
    Rational r{boost::multiprecision::cpp_int(numerator)};
    if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      bump();  // '/'
      std::string denominator = digits();
      boost::multiprecision::cpp_int den(denominator);
      if (den == 0) {
        throw ParseError("rational with zero denominator", at.line, at.col);
      }
      r /= Rational(den);
    }
    if (neg) r = -r;
    return r;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::deque<Token> buf_;
};

bool is_keyword_tok(const Token& t, const char* kw) {
  return t.type == Tok::Ident && t.text == kw;
}

bool is_reserved_word(const std::string& s) {
  static const std::set<std::string> kw = {"relation", "fd",  "jd",  "rat",
                                          "sym",      "and", "or",  "not",
                                          "true",     "false"};
  return kw.count(s) != 0;
}

void skip_separators(Lexer& lx) {
  while (lx.peek().type == Tok::Semi || lx.peek().type == Tok::Dot ||
         lx.peek().type == Tok::Comma) {
    lx.take();
  }
}

bool take_cmp_op(Lexer& lx, CmpOp* op) {
  switch (lx.peek().type) {
    case Tok::Eq: *op = CmpOp::Eq; break;
    case Tok::Ne: *op = CmpOp::Ne; break;
    case Tok::Lt: *op = CmpOp::Lt; break;
    case Tok::Le: *op = CmpOp::Le; break;
    case Tok::Gt: *op = CmpOp::Gt; break;
    case Tok::Ge: *op = CmpOp::Ge; break;
    default: return false;
  }
  lx.take();
  return true;
}

// ---- constraint parsing -------------------------------------------------

// Bare identifiers are variables inside constraints.
Term parse_constraint_term(Lexer& lx) {
  Token t = lx.take();
  switch (t.type) {
    case Tok::Ident: return Term::variable(t.text);
    case Tok::Number: return Term::constant(Value::rational(t.num));
    case Tok::Str: return Term::constant(Value::symbol(t.text));
    default:
      Lexer::fail("expected a variable or constant, found " +
                      Lexer::describe(t),
                  t);
  }
}

Atom parse_constraint_atom(Lexer& lx, const Schema& s) {
  Token name = lx.expect(Tok::Ident, "atom");
  if (!s.has(name.text)) {
    Lexer::fail("unknown relation '" + name.text + "'", name);
  }
  lx.expect(Tok::LParen, "atom");
  Atom a;
  a.relation = name.text;
  if (lx.peek().type != Tok::RParen) {
    while (true) {
      a.args.push_back(parse_constraint_term(lx));
      if (lx.peek().type == Tok::Comma) {
        lx.take();
        continue;
      }
      break;
    }
  }
  lx.expect(Tok::RParen, "atom");
  return a;
}

Guard parse_guard_or(Lexer& lx);

Guard parse_guard_unary(Lexer& lx) {
  const Token& t = lx.peek();
  if (is_keyword_tok(t, "not")) {
    Token kw = lx.take();
    (void)kw;
    return Guard::negation(parse_guard_unary(lx));
  }
  if (is_keyword_tok(t, "true")) {
    lx.take();
    return Guard::truth();
  }
  if (is_keyword_tok(t, "false")) {
    lx.take();
    return Guard::falsity();
  }
  if (t.type == Tok::LParen) {
    lx.take();
    Guard g = parse_guard_or(lx);
    lx.expect(Tok::RParen, "guard expression");
    return g;
  }
  Term lhs = parse_constraint_term(lx);
  CmpOp op;
  Token at = lx.peek();
  if (!take_cmp_op(lx, &op)) {
    Lexer::fail("expected a comparison operator, found " + Lexer::describe(at),
                at);
  }
  Term rhs = parse_constraint_term(lx);
  return Guard::cmp(op, lhs, rhs);
}

Guard parse_guard_and(Lexer& lx) {
  std::vector<Guard> kids;
  kids.push_back(parse_guard_unary(lx));
  while (is_keyword_tok(lx.peek(), "and")) {
    lx.take();
    kids.push_back(parse_guard_unary(lx));
  }
  if (kids.size() == 1) return kids[0];
  return Guard::conj(std::move(kids));
}

Guard parse_guard_or(Lexer& lx) {
  std::vector<Guard> kids;
  kids.push_back(parse_guard_and(lx));
  while (is_keyword_tok(lx.peek(), "or")) {
    lx.take();
    kids.push_back(parse_guard_and(lx));
  }
  if (kids.size() == 1) return kids[0];
  return Guard::disj(std::move(kids));
}

std::vector<int> parse_position_list(Lexer& lx, const std::string& relation,
                                     const Schema& s) {
  std::vector<int> out;
  int n = s.arity(relation);
  while (true) {
    Token t = lx.expect(Tok::Number, "position list");
    if (denominator(t.num) != 1 || t.num < 1 || t.num > n) {
      Lexer::fail("position must be an integer between 1 and " +
                      std::to_string(n) + " for relation '" + relation + "'",
                  t);
    }
    out.push_back(static_cast<int>(numerator(t.num)) - 1);
    if (lx.peek().type == Tok::Comma) {
      lx.take();
      continue;
    }
    return out;
  }
}

Constraint parse_fd_sugar(Lexer& lx, const Schema& s) {
  Token name = lx.expect(Tok::Ident, "functional dependency");
  if (!s.has(name.text)) {
    Lexer::fail("unknown relation '" + name.text + "'", name);
  }
  lx.expect(Tok::Colon, "functional dependency");
  std::vector<int> left = parse_position_list(lx, name.text, s);
  lx.expect(Tok::Arrow, "functional dependency");
  std::vector<int> right = parse_position_list(lx, name.text, s);
  return make_fd(s, name.text, left, right);
}

Constraint parse_jd_sugar(Lexer& lx, const Schema& s) {
  Token name = lx.expect(Tok::Ident, "join dependency");
  if (!s.has(name.text)) {
    Lexer::fail("unknown relation '" + name.text + "'", name);
  }
  lx.expect(Tok::Colon, "join dependency");
  std::vector<std::vector<int>> components;
  Token open = lx.expect(Tok::LBracket, "join dependency");
  (void)open;
  while (true) {
    components.push_back(parse_position_list(lx, name.text, s));
    lx.expect(Tok::RBracket, "join dependency");
    if (lx.peek().type == Tok::LBracket) {
      lx.take();
      continue;
    }
    break;
  }
  return make_jd(s, name.text, components);
}

Constraint parse_one_constraint(Lexer& lx, const Schema& s) {
  Constraint c;
  std::vector<Guard> guard_parts;
  // Left of `->`: comma-separated atoms and guard conjuncts in any order.
  while (true) {
    if (lx.peek().type == Tok::Ident && lx.peek(1).type == Tok::LParen &&
        !is_keyword_tok(lx.peek(), "not")) {
      c.lhs.push_back(parse_constraint_atom(lx, s));
    } else {
      guard_parts.push_back(parse_guard_or(lx));
    }
    if (lx.peek().type == Tok::Comma) {
      lx.take();
      continue;
    }
    break;
  }
  lx.expect(Tok::Arrow, "constraint");
  if (guard_parts.empty()) {
    c.guard = Guard::truth();
  } else if (guard_parts.size() == 1) {
    c.guard = guard_parts[0];
  } else {
    c.guard = Guard::conj(std::move(guard_parts));
  }
  // Right of `->`: `false` or a disjunction of atoms.
  if (is_keyword_tok(lx.peek(), "false")) {
    lx.take();
  } else {
    while (true) {
      c.rhs.push_back(parse_constraint_atom(lx, s));
      if (lx.peek().type == Tok::Pipe) {
        lx.take();
        continue;
      }
      break;
    }
  }
  return c;
}

// ---- fact / query parsing -----------------------------------------------

// Bare identifiers are symbol constants inside facts and queries.
Value parse_value(Lexer& lx) {
  Token t = lx.take();
  switch (t.type) {
    case Tok::Number: return Value::rational(t.num);
    case Tok::Str: return Value::symbol(t.text);
    case Tok::Ident: return Value::symbol(t.text);
    default:
      Lexer::fail("expected a constant, found " + Lexer::describe(t), t);
  }
}

Fact parse_fact(Lexer& lx, const Schema& s) {
  Token name = lx.expect(Tok::Ident, "fact");
  if (!s.has(name.text)) {
    Lexer::fail("unknown relation '" + name.text + "'", name);
  }
  Token open = lx.expect(Tok::LParen, "fact");
  Fact f;
  f.relation = name.text;
  if (lx.peek().type != Tok::RParen) {
    while (true) {
      f.tuple.push_back(parse_value(lx));
      if (lx.peek().type == Tok::Comma) {
        lx.take();
        continue;
      }
      break;
    }
  }
  lx.expect(Tok::RParen, "fact");
  try {
    validate_fact(s, f);
  } catch (const ValidationError& e) {
    throw ParseError(std::string(e.what()) +
                         " (bare identifiers denote symbols; facts and "
                         "queries cannot contain variables)",
                     name.line, name.col);
  }
  return f;
}

Query parse_query_or(Lexer& lx, const Schema& s);

Query parse_query_unary(Lexer& lx, const Schema& s) {
  const Token& t = lx.peek();
  if (is_keyword_tok(t, "not")) {
    lx.take();
    return Query::negation(parse_query_unary(lx, s));
  }
  if (is_keyword_tok(t, "true")) {
    lx.take();
    return Query::truth();
  }
  if (is_keyword_tok(t, "false")) {
    lx.take();
    return Query::falsity();
  }
  if (t.type == Tok::LParen) {
    lx.take();
    Query q = parse_query_or(lx, s);
    lx.expect(Tok::RParen, "query expression");
    return q;
  }
  if (t.type == Tok::Ident && lx.peek(1).type == Tok::LParen) {
    return Query::atom(parse_fact(lx, s));
  }
  // Ground built-in comparison: folded to a truth value immediately.
  Token at = t;
  Value lhs = parse_value(lx);
  CmpOp op;
  Token op_at = lx.peek();
  if (!take_cmp_op(lx, &op)) {
    Lexer::fail("expected a comparison operator or fact, found " +
                    Lexer::describe(op_at),
                op_at);
  }
  Value rhs = parse_value(lx);
  try {
    Guard g = Guard::cmp(op, Term::constant(lhs), Term::constant(rhs));
    Binding empty;
    return eval_builtin(g, empty) ? Query::truth() : Query::falsity();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), at.line, at.col);
  }
}

Query parse_query_and(Lexer& lx, const Schema& s) {
  std::vector<Query> kids;
  kids.push_back(parse_query_unary(lx, s));
  while (is_keyword_tok(lx.peek(), "and")) {
    lx.take();
    kids.push_back(parse_query_unary(lx, s));
  }
  if (kids.size() == 1) return kids[0];
  return Query::conj(std::move(kids));
}

Query parse_query_or(Lexer& lx, const Schema& s) {
  std::vector<Query> kids;
  kids.push_back(parse_query_and(lx, s));
  while (is_keyword_tok(lx.peek(), "or")) {
    lx.take();
    kids.push_back(parse_query_and(lx, s));
  }
  if (kids.size() == 1) return kids[0];
  return Query::disj(std::move(kids));
}

// ---- serialization ------------------------------------------------------

std::string term_text(const Term& t) {
  if (t.is_var) return t.var;
  return to_string(t.val);
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

// Precedence: or < and < not/primary.
int guard_prec(const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::Or: return 0;
    case Guard::Kind::And: return 1;
    default: return 2;
  }
}

std::string guard_text(const Guard& g, int min_prec) {
  std::string out;
  switch (g.kind) {
    case Guard::Kind::True: return "true";
    case Guard::Kind::False: return "false";
    case Guard::Kind::Cmp:
      return term_text(g.lhs) + " " + cmp_text(g.op) + " " + term_text(g.rhs);
    case Guard::Kind::Not:
      return "not " + guard_text(g.kids[0], 2);
    case Guard::Kind::And: {
      for (std::size_t i = 0; i < g.kids.size(); ++i) {
        if (i) out += " and ";
        out += guard_text(g.kids[i], 1);
      }
      break;
    }
    case Guard::Kind::Or: {
      for (std::size_t i = 0; i < g.kids.size(); ++i) {
        if (i) out += " or ";
        out += guard_text(g.kids[i], 1);
      }
      break;
    }
  }
  if (guard_prec(g) < min_prec) return "(" + out + ")";
  return out;
}

std::string atom_text(const Atom& a) {
  std::string out = a.relation + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += term_text(a.args[i]);
  }
  return out + ")";
}

int query_prec(const Query& q) {
  switch (q.kind) {
    case Query::Kind::Or: return 0;
    case Query::Kind::And: return 1;
    default: return 2;
  }
}

std::string query_text(const Query& q, int min_prec) {
  std::string out;
  switch (q.kind) {
    case Query::Kind::True: return "true";
    case Query::Kind::False: return "false";
    case Query::Kind::Atom: return to_string(q.fact);
    case Query::Kind::Not:
      return "not " + query_text(q.kids[0], 2);
    case Query::Kind::And: {
      for (std::size_t i = 0; i < q.kids.size(); ++i) {
        if (i) out += " and ";
        out += query_text(q.kids[i], 1);
      }
      break;
    }
    case Query::Kind::Or: {
      for (std::size_t i = 0; i < q.kids.size(); ++i) {
        if (i) out += " or ";
        out += query_text(q.kids[i], 1);
      }
      break;
    }
  }
  if (query_prec(q) < min_prec) return "(" + out + ")";
  return out;
}

}  // namespace

Schema parse_schema(const std::string& text) {
  Lexer lx(text);
  Schema s;
  while (true) {
    skip_separators(lx);
    if (lx.peek().type == Tok::End) break;
    Token kw = lx.expect(Tok::Ident, "schema");
    if (kw.text != "relation") {
      Lexer::fail("expected 'relation', found '" + kw.text + "'", kw);
    }
    Token name = lx.expect(Tok::Ident, "relation declaration");
    if (is_reserved_word(name.text)) {
      Lexer::fail("'" + name.text + "' is a reserved word and cannot name a relation",
                  name);
    }
    lx.expect(Tok::LParen, "relation declaration");
    std::vector<Attribute> attrs;
    if (lx.peek().type != Tok::RParen) {
      while (true) {
        Token an = lx.expect(Tok::Ident, "attribute declaration");
        lx.expect(Tok::Colon, "attribute declaration");
        Token kind = lx.expect(Tok::Ident, "attribute declaration");
        Attribute a;
        a.name = an.text;
        if (kind.text == "rat") {
          a.kind = AttrKind::Rational;
        } else if (kind.text == "sym") {
          a.kind = AttrKind::Symbol;
        } else {
          Lexer::fail("attribute kind must be 'rat' or 'sym', found '" +
                          kind.text + "'",
                      kind);
        }
        attrs.push_back(a);
        if (lx.peek().type == Tok::Comma) {
          lx.take();
          continue;
        }
        break;
      }
    }
    Token close = lx.expect(Tok::RParen, "relation declaration");
    try {
      s.add_relation(name.text, attrs);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), name.line, name.col);
    }
    (void)close;
  }
  return s;
}

std::vector<Constraint> parse_constraints(const std::string& text,
                                          const Schema& s) {
  Lexer lx(text);
  std::vector<Constraint> out;
  while (true) {
    skip_separators(lx);
    if (lx.peek().type == Tok::End) break;
    Constraint c;
    Token head = lx.peek();
    if (is_keyword_tok(head, "fd") && lx.peek(1).type == Tok::Ident) {
      lx.take();
      c = parse_fd_sugar(lx, s);
    } else if (is_keyword_tok(head, "jd") && lx.peek(1).type == Tok::Ident) {
      lx.take();
      c = parse_jd_sugar(lx, s);
    } else {
      c = parse_one_constraint(lx, s);
    }
    validate_constraint(s, c);
    out.push_back(std::move(c));
  }
  return out;
}

Instance parse_instance(const std::string& text, const Schema& s,
                        std::vector<std::string>* warnings) {
  Lexer lx(text);
  Instance inst;
  while (true) {
    skip_separators(lx);
    if (lx.peek().type == Tok::End) break;
    Token at = lx.peek();
    Fact f = parse_fact(lx, s);
    if (!inst.insert(f).second && warnings) {
      warnings->push_back("duplicate fact " + to_string(f) + " at line " +
                          std::to_string(at.line) + " collapsed");
    }
  }
  return inst;
}

std::vector<Fact> parse_fact_sequence(const std::string& text,
                                      const Schema& s) {
  Lexer lx(text);
  std::vector<Fact> out;
  std::set<Fact> seen;
  while (true) {
    skip_separators(lx);
    if (lx.peek().type == Tok::End) break;
    Token at = lx.peek();
    Fact f = parse_fact(lx, s);
    if (!seen.insert(f).second)
      Lexer::fail("duplicate fact " + to_string(f) + " in sequence", at);
    out.push_back(std::move(f));
  }
  return out;
}

Query parse_query(const std::string& text, const Schema& s) {
  Lexer lx(text);
  Query q = parse_query_or(lx, s);
  skip_separators(lx);
  if (lx.peek().type != Tok::End) {
    Lexer::fail("unexpected trailing input after query: found " +
                    Lexer::describe(lx.peek()),
                lx.peek());
  }
  return q;
}

std::string serialize(const Schema& s) {
  std::string out;
  for (const auto& [name, attrs] : s.relations) {
    out += "relation " + name + "(";
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i) out += ", ";
      out += attrs[i].name + ": " +
             (attrs[i].kind == AttrKind::Rational ? "rat" : "sym");
    }
    out += ");\n";
  }
  return out;
}

std::string serialize(const std::vector<Constraint>& f) {
  std::string out;
  for (const Constraint& c : f) {
    if (c.fd) {
      out += "fd " + c.fd->relation + ": ";
      for (std::size_t i = 0; i < c.fd->lhs_positions.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(c.fd->lhs_positions[i] + 1);
      }
      out += " -> ";
      for (std::size_t i = 0; i < c.fd->rhs_positions.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(c.fd->rhs_positions[i] + 1);
      }
      out += ";\n";
      continue;
    }
    if (c.jd) {
      out += "jd " + c.jd->relation + ": ";
      for (const auto& comp : c.jd->components) {
        out += "[";
        for (std::size_t i = 0; i < comp.size(); ++i) {
          if (i) out += ", ";
          out += std::to_string(comp[i] + 1);
        }
        out += "]";
      }
      out += ";\n";
      continue;
    }
    for (std::size_t i = 0; i < c.lhs.size(); ++i) {
      if (i) out += ", ";
      out += atom_text(c.lhs[i]);
    }
    if (c.guard.kind != Guard::Kind::True) {
      out += ", " + guard_text(c.guard, 0);
    }
    out += " -> ";
    if (c.rhs.empty()) {
      out += "false";
    } else {
      for (std::size_t i = 0; i < c.rhs.size(); ++i) {
        if (i) out += " | ";
        out += atom_text(c.rhs[i]);
      }
    }
    out += ";\n";
  }
  return out;
}

std::string serialize(const Instance& i) {
  std::string out;
  for (const Fact& f : i) {
    out += to_string(f) + ".\n";
  }
  return out;
}

std::string serialize(const Query& q) {
  return query_text(q, 0) + "\n";
}

}  // namespace cqadb
