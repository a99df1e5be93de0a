#include <cctype>
#include <set>
#include <sstream>

#include "decomp/cmso.hpp"

namespace decomp::cmso {

namespace {

const std::set<std::string> kKeywords = {"exists", "forall", "in",    "notin", "subseteq",
                                         "union",  "inter",  "minus", "U",     "empty",
                                         "true",   "false",  "C2",    "leafset", "def"};

struct Token {
  enum Type { Ident, Sym, End } type = End;
  std::string text;
  int line = 1, col = 1;
};

[[noreturn]] void fail(ErrorKind k, int line, int col, const std::string& msg) {
  throw Error(k, "line " + std::to_string(line) + " col " + std::to_string(col) + ": " + msg);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto is_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_body = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (is_start(c)) {
      std::size_t j = i;
      while (j < s.size() &&
             (is_body(s[j]) || (s[j] == '-' && j + 1 < s.size() &&
                                std::isalpha(static_cast<unsigned char>(s[j + 1])))))
        ++j;
      t.type = Token::Ident;
      t.text = s.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    static const char* syms[] = {"<->", ":=", "->", "!=", "=", "!", "&", "|", "(",
                                 ")",   "{",  "}",  ",",  ".", ";", "~"};
    bool found = false;
    for (const char* sym : syms) {
      std::string_view v(sym);
      if (s.compare(i, v.size(), v) == 0) {
        t.type = Token::Sym;
        t.text = std::string(v);
        advance(v.size());
        out.push_back(t);
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorKind::SyntaxError, line, col, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

NodePtr make(Kind k, const Token& at, std::string name = {}, std::vector<NodePtr> kids = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->kids = std::move(kids);
  n->line = at.line;
  n->col = at.col;
  return n;
}

bool is_elem_var(const NodePtr& n) { return n->kind == Kind::Var && !is_set_name(n->name); }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool at_sym(const char* s, std::size_t k = 0) const {
    return peek(k).type == Token::Sym && peek(k).text == s;
  }
  bool at_kw(const char* s, std::size_t k = 0) const {
    return peek(k).type == Token::Ident && peek(k).text == s;
  }
  bool at_end() const { return peek().type == Token::End; }
  Token take() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }
  void expect_sym(const char* s) {
    if (!at_sym(s)) fail(ErrorKind::SyntaxError, peek().line, peek().col, std::string("expected '") + s + "'" + found());
    take();
  }
  std::string found() const {
    return at_end() ? " at end of input" : ", found '" + peek().text + "'";
  }
  std::string ident(const char* what) {
    if (peek().type != Token::Ident || kKeywords.count(peek().text))
      fail(ErrorKind::SyntaxError, peek().line, peek().col, std::string("expected ") + what + found());
    return take().text;
  }

  bool at_def() const { return at_kw("def"); }

  Macro definition() {
    take();
    Macro m;
    m.name = ident("macro name");
    expect_sym("(");
    if (!at_sym(")")) {
      m.params.push_back(ident("parameter"));
      while (at_sym(",")) {
        take();
        m.params.push_back(ident("parameter"));
      }
    }
    expect_sym(")");
    expect_sym(":=");
    m.body = formula();
    expect_sym(";");
    return m;
  }

  NodePtr formula() {
    NodePtr l = implication();
    while (at_sym("<->")) {
      Token op = take();
      NodePtr r = implication();
      l = make(Kind::Iff, op, {}, {l, r});
    }
    return l;
  }

  NodePtr implication() {
    NodePtr l = disjunction();
    if (at_sym("->")) {
      Token op = take();
      NodePtr r = implication();
      return make(Kind::Implies, op, {}, {l, r});
    }
    return l;
  }

  NodePtr disjunction() {
    NodePtr l = conjunction();
    while (at_sym("|")) {
      Token op = take();
      NodePtr r = conjunction();
      l = make(Kind::Or, op, {}, {l, r});
    }
    return l;
  }

  NodePtr conjunction() {
    NodePtr l = unary();
    while (at_sym("&")) {
      Token op = take();
      NodePtr r = unary();
      l = make(Kind::And, op, {}, {l, r});
    }
    return l;
  }

  NodePtr unary() {
    if (at_sym("!")) {
      Token op = take();
      NodePtr r = unary();
      return make(Kind::Not, op, {}, {r});
    }
    if (at_kw("exists") || at_kw("forall")) {
      Token q = take();
      Kind k = q.text == "exists" ? Kind::Exists : Kind::Forall;
      std::vector<Token> vars;
      do {
        if (at_sym(",")) take();
        Token v = peek();
        ident("quantified variable");
        vars.push_back(v);
      } while (!at_sym("."));
      take();
      NodePtr body = formula();
      for (std::size_t i = vars.size(); i-- > 0;) body = make(k, vars[i], vars[i].text, {body});
      return body;
    }
    return atom();
  }

  NodePtr atom() {
    const Token& t = peek();
    if (at_kw("true")) return make(Kind::True, take());
    if (at_kw("false")) return make(Kind::False, take());
    if (at_kw("C2")) {
      Token c = take();
      expect_sym("(");
      NodePtr s = set_expr();
      expect_sym(")");
      return make(Kind::Parity, c, {}, {s});
    }
    if (at_sym("(")) {
      std::size_t save = p_;
      try {
        NodePtr lhs = term();
        if (at_comparison()) return comparison(lhs);
      } catch (const Error&) {
      }
      p_ = save;
      take();
      NodePtr f = formula();
      expect_sym(")");
      return f;
    }
    if (t.type == Token::Ident && !kKeywords.count(t.text) && at_sym("(", 1)) return application();
    NodePtr lhs = term();
    if (!at_comparison())
      fail(ErrorKind::SyntaxError, peek().line, peek().col, "expected a comparison" + found());
    return comparison(lhs);
  }

  bool at_comparison() const {
    return at_kw("in") || at_kw("notin") || at_kw("subseteq") || at_sym("=") || at_sym("!=");
  }

  NodePtr comparison(NodePtr lhs) {
    Token op = take();
    if (op.text == "in" || op.text == "notin") {
      if (!is_elem_var(lhs)) fail(ErrorKind::SyntaxError, op.line, op.col, "left of 'in' must be an element variable");
      NodePtr r = set_expr();
      NodePtr n = make(Kind::In, op, {}, {lhs, r});
      return op.text == "in" ? n : make(Kind::Not, op, {}, {n});
    }
    if (op.text == "subseteq") {
      if (is_elem_var(lhs)) fail(ErrorKind::SyntaxError, op.line, op.col, "left of 'subseteq' must be a set");
      NodePtr r = set_expr();
      return make(Kind::Subseteq, op, {}, {lhs, r});
    }
    NodePtr rhs = term();
    if (is_elem_var(lhs) != is_elem_var(rhs))
      fail(ErrorKind::SyntaxError, op.line, op.col, "'" + op.text + "' compares an element with a set");
    NodePtr n = make(Kind::Equal, op, {}, {lhs, rhs});
    return op.text == "=" ? n : make(Kind::Not, op, {}, {n});
  }

  NodePtr application() {
    Token name = take();
    expect_sym("(");
    std::vector<NodePtr> args;
    if (!at_sym(")")) {
      args.push_back(term());
      while (at_sym(",")) {
        take();
        args.push_back(term());
      }
    }
    expect_sym(")");
    return make(Kind::Apply, name, name.text, std::move(args));
  }

  // Element variable or set expression.
  NodePtr term() {
    const Token& t = peek();
    if (t.type == Token::Ident && !kKeywords.count(t.text) && !is_set_name(t.text)) {
      Token v = take();
      return make(Kind::Var, v, v.text);
    }
    return set_expr();
  }

  NodePtr set_expr() {
    NodePtr l = set_inter();
    while (at_kw("union") || at_kw("minus")) {
      Token op = take();
      NodePtr r = set_inter();
      l = make(op.text == "union" ? Kind::Union : Kind::Minus, op, {}, {l, r});
    }
    return l;
  }

  NodePtr set_inter() {
    NodePtr l = set_prim();
    while (at_kw("inter")) {
      Token op = take();
      NodePtr r = set_prim();
      l = make(Kind::Inter, op, {}, {l, r});
    }
    return l;
  }

  NodePtr set_prim() {
    const Token& t = peek();
    if (at_sym("~")) {
      Token op = take();
      return make(Kind::Complement, op, {}, {set_prim()});
    }
    if (at_kw("U")) return make(Kind::Universe, take());
    if (at_kw("empty")) return make(Kind::Empty, take());
    if (at_sym("{")) {
      Token b = take();
      std::vector<NodePtr> elems;
      do {
        if (at_sym(",")) take();
        Token v = peek();
        std::string name = ident("element variable");
        if (is_set_name(name)) fail(ErrorKind::SyntaxError, v.line, v.col, "set variable inside {...}");
        elems.push_back(make(Kind::Var, v, name));
      } while (at_sym(","));
      expect_sym("}");
      return make(Kind::Singleton, b, {}, std::move(elems));
    }
    if (at_kw("leafset")) {
      Token l = take();
      expect_sym("(");
      std::vector<NodePtr> args;
      do {
        if (at_sym(",")) take();
        Token v = peek();
        std::string name = ident("element variable");
        if (is_set_name(name)) fail(ErrorKind::SyntaxError, v.line, v.col, "leafset takes element variables");
        args.push_back(make(Kind::Var, v, name));
      } while (at_sym(","));
      expect_sym(")");
      if (args.size() > 2) fail(ErrorKind::SyntaxError, l.line, l.col, "leafset takes one or two arguments");
      return make(Kind::Leafset, l, {}, std::move(args));
    }
    if (at_sym("(")) {
      take();
      NodePtr s = set_expr();
      expect_sym(")");
      return s;
    }
    if (t.type == Token::Ident && !kKeywords.count(t.text)) {
      if (!is_set_name(t.text))
        fail(ErrorKind::SyntaxError, t.line, t.col, "element variable '" + t.text + "' used as a set");
      Token v = take();
      return make(Kind::Var, v, v.text);
    }
    fail(ErrorKind::SyntaxError, t.line, t.col, "expected a set term" + found());
  }

 private:
  std::vector<Token> t_;
  std::size_t p_ = 0;
};

// Scope check; in macro bodies free uppercase names become colour constants.
struct Checker {
  const Library& lib;
  bool in_macro = false;
  std::set<std::string> declared;

  NodePtr run(const NodePtr& n, std::vector<std::string>& bound) {
    switch (n->kind) {
      case Kind::Var: {
        bool is_bound = std::find(bound.begin(), bound.end(), n->name) != bound.end() ||
                        declared.count(n->name);
        if (is_bound) return n;
        if (is_set_name(n->name)) {
          if (!in_macro) return n;
          auto c = std::make_shared<Node>(*n);
          c->kind = Kind::Const;
          return c;
        }
        fail(ErrorKind::ScopeError, n->line, n->col, "free variable '" + n->name + "'");
      }
      case Kind::Exists:
      case Kind::Forall: {
        bound.push_back(n->name);
        NodePtr body = run(n->kids[0], bound);
        bound.pop_back();
        if (body == n->kids[0]) return n;
        auto c = std::make_shared<Node>(*n);
        c->kids[0] = body;
        return c;
      }
      case Kind::Apply: {
        auto it = lib.find(n->name);
        if (it != lib.end()) {
          const Macro& m = *it->second;
          if (m.params.size() != n->kids.size())
            fail(ErrorKind::SyntaxError, n->line, n->col,
                 "'" + n->name + "' takes " + std::to_string(m.params.size()) + " arguments");
          for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (is_set_name(m.params[i]) == is_elem_var(n->kids[i]))
              fail(ErrorKind::SyntaxError, n->kids[i]->line, n->kids[i]->col,
                   "argument " + std::to_string(i + 1) + " of '" + n->name + "' has the wrong sort");
          }
        } else if (n->name == "children") {
          if (n->kids.size() != 2 || is_elem_var(n->kids[0]) || !is_elem_var(n->kids[1]))
            fail(ErrorKind::SyntaxError, n->line, n->col, "children takes (set, element)");
        }
        break;
      }
      default:
        break;
    }
    std::vector<NodePtr> kids;
    bool changed = false;
    for (auto& k : n->kids) {
      kids.push_back(run(k, bound));
      changed |= kids.back() != k;
    }
    if (!changed) return n;
    auto c = std::make_shared<Node>(*n);
    c->kids = std::move(kids);
    return c;
  }
};

std::shared_ptr<const Macro> check_macro(Macro m, const Library& lib, const Token& at) {
  std::set<std::string> seen;
  for (auto& p : m.params)
    if (!seen.insert(p).second) fail(ErrorKind::SyntaxError, at.line, at.col, "repeated parameter '" + p + "'");
  Checker c{lib, true, seen};
  std::vector<std::string> bound;
  m.body = c.run(m.body, bound);
  return std::make_shared<const Macro>(std::move(m));
}

}  // namespace

bool is_set_name(const std::string& name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

static void parse_defs(Parser& p, Library& lib) {
  while (p.at_def()) {
    Token at = p.peek();
    Macro m = p.definition();
    std::string name = m.name;  // a later definition shadows an earlier one
    lib[name] = check_macro(std::move(m), lib, at);
  }
}

Library parse_library(const std::string& text, const Library& base) {
  Parser p(lex(text));
  Library lib = base;
  parse_defs(p, lib);
  if (!p.at_end()) fail(ErrorKind::SyntaxError, p.peek().line, p.peek().col, "expected 'def'" + p.found());
  return lib;
}

Formula parse_formula(const std::string& text, const std::vector<std::string>& free,
                      const Library& base) {
  Parser p(lex(text));
  Library lib = base;
  parse_defs(p, lib);
  NodePtr root = p.formula();
  if (p.at_sym(";")) p.take();
  if (!p.at_end()) fail(ErrorKind::SyntaxError, p.peek().line, p.peek().col, "trailing input" + p.found());
  Checker c{lib, false, std::set<std::string>(free.begin(), free.end())};
  std::vector<std::string> bound;
  root = c.run(root, bound);
  return Formula(root, std::move(lib), free);
}

std::string to_string(const NodePtr& n) {
  auto bin = [&](const char* op) {
    return "(" + to_string(n->kids[0]) + " " + op + " " + to_string(n->kids[1]) + ")";
  };
  auto list = [&]() {
    std::string s;
    for (std::size_t i = 0; i < n->kids.size(); ++i) s += (i ? ", " : "") + to_string(n->kids[i]);
    return s;
  };
  switch (n->kind) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Not: return "!" + to_string(n->kids[0]);
    case Kind::And: return bin("&");
    case Kind::Or: return bin("|");
    case Kind::Implies: return bin("->");
    case Kind::Iff: return bin("<->");
    case Kind::Exists: return "(exists " + n->name + ". " + to_string(n->kids[0]) + ")";
    case Kind::Forall: return "(forall " + n->name + ". " + to_string(n->kids[0]) + ")";
    case Kind::Apply: return n->name + "(" + list() + ")";
    case Kind::In: return bin("in");
    case Kind::Subseteq: return bin("subseteq");
    case Kind::Equal: return bin("=");
    case Kind::Parity: return "C2(" + to_string(n->kids[0]) + ")";
    case Kind::Var:
    case Kind::Const: return n->name;
    case Kind::Universe: return "U";
    case Kind::Empty: return "empty";
    case Kind::Singleton: return "{" + list() + "}";
    case Kind::Union: return bin("union");
    case Kind::Inter: return bin("inter");
    case Kind::Minus: return bin("minus");
    case Kind::Complement: return "~" + to_string(n->kids[0]);
    case Kind::Leafset: return "leafset(" + list() + ")";
  }
  return "?";
}

std::string Formula::to_string() const {
  std::ostringstream os;
  for (auto& [name, m] : macros_) {
    os << "def " << name << "(";
    for (std::size_t i = 0; i < m->params.size(); ++i) os << (i ? ", " : "") << m->params[i];
    os << ") := " << cmso::to_string(m->body) << ";\n";
  }
  os << cmso::to_string(root_);
  return os.str();
}

}  // namespace decomp::cmso
