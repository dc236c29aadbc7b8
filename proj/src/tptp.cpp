#include "bumg/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace bumg {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {}

namespace {

struct Token {
  enum Kind { Lower, Upper, Quoted, Number, Dollar, Punct, Distinct, End };
  Kind kind = End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;

  bool is(const char* p) const { return kind == Punct && text == p; }
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(message, at.line, at.col);
  }

  Token expect(const char* punct) {
    if (!current_.is(punct)) fail(current_, std::string("expected '") + punct + "' but found '" + describe(current_) + "'");
    return next();
  }

  static std::string describe(const Token& t) { return t.kind == Token::End ? "end of input" : t.text; }

private:
  char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void bump() {
    if (at(pos_) == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      char c = at(pos_);
      if (c == '\0') return;
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '%') {
        while (at(pos_) != '\0' && at(pos_) != '\n') bump();
      } else if (c == '/' && at(pos_ + 1) == '*') {
        std::size_t l = line_, k = col_;
        bump();
        bump();
        while (!(at(pos_) == '*' && at(pos_ + 1) == '/')) {
          if (at(pos_) == '\0') throw ParseError("unterminated block comment", l, k);
          bump();
        }
        bump();
        bump();
      } else {
        return;
      }
    }
  }

  static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void advance() {
    skip_space();
    current_ = Token{};
    current_.line = line_;
    current_.col = col_;
    char c = at(pos_);
    if (c == '\0') {
      current_.kind = Token::End;
      return;
    }
    if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c))) {
      current_.kind = std::isupper(static_cast<unsigned char>(c)) ? Token::Upper : Token::Lower;
      while (word_char(at(pos_))) {
        current_.text += at(pos_);
        bump();
      }
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      current_.kind = Token::Number;
      while (std::isdigit(static_cast<unsigned char>(at(pos_)))) {
        current_.text += at(pos_);
        bump();
      }
      return;
    }
    if (c == '$') {
      current_.kind = Token::Dollar;
      current_.text += c;
      bump();
      if (at(pos_) == '$') {
        current_.text += '$';
        bump();
      }
      while (word_char(at(pos_))) {
        current_.text += at(pos_);
        bump();
      }
      return;
    }
    if (c == '\'' || c == '"') {
      current_.kind = c == '\'' ? Token::Quoted : Token::Distinct;
      bump();
      while (at(pos_) != c) {
        if (at(pos_) == '\0' || at(pos_) == '\n') throw ParseError("unterminated quoted name", current_.line, current_.col);
        if (at(pos_) == '\\') bump();
        current_.text += at(pos_);
        bump();
      }
      bump();
      return;
    }
    current_.kind = Token::Punct;
    if (c == '!' && at(pos_ + 1) == '=') {
      current_.text = "!=";
      bump();
      bump();
      return;
    }
    if (c == '-' && at(pos_ + 1) == '>') {
      current_.text = "->";
      bump();
      bump();
      return;
    }
    static const std::string single = "(),.|~=[]:&";
    if (single.find(c) == std::string::npos)
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    current_.text = std::string(1, c);
    bump();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token current_;
};

bool is_lower_word(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_integer(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string quote_symbol(const std::string& s) {
  if (is_lower_word(s) || is_integer(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

// Reads a symbol name (functor or constant) from the current token.
bool symbol_token(const Token& t) {
  return t.kind == Token::Lower || t.kind == Token::Quoted || t.kind == Token::Number;
}

class CnfParser {
public:
  CnfParser(std::string_view text, const ParseOptions& options) : lex_(text), options_(options) {}

  Problem run() {
    Problem p;
    p.name = options_.source_name;
    while (lex_.peek().kind != Token::End) {
      Token head = lex_.next();
      if (head.kind == Token::Lower && head.text == "include")
        lex_.fail(head, "include directives are not supported");
      if (head.kind != Token::Lower || head.text != "cnf") {
        if (head.kind == Token::Lower && (head.text == "fof" || head.text == "tff" || head.text == "thf"))
          lex_.fail(head, "only cnf formulas are supported, found " + head.text);
        lex_.fail(head, "expected 'cnf' but found '" + Lexer::describe(head) + "'");
      }
      lex_.expect("(");
      Token name = lex_.next();
      if (!symbol_token(name)) lex_.fail(name, "expected a formula name");
      lex_.expect(",");
      Token role = lex_.next();
      if (role.kind != Token::Lower) lex_.fail(role, "expected a formula role");
      lex_.expect(",");
      vars_.clear();
      std::vector<Atom> head_atoms, body_atoms;
      parse_formula(head_atoms, body_atoms);
      if (lex_.peek().is(",")) skip_annotations();
      lex_.expect(")");
      lex_.expect(".");
      Clause c(std::move(head_atoms), std::move(body_atoms), name.text);
      try {
        p.signature.add(c);
      } catch (const Error& e) {
        lex_.fail(name, e.what());
      }
      p.clauses.push_back(std::move(c));
    }
    return p;
  }

private:
  void skip_annotations() {
    int depth = 0;
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::End) lex_.fail(t, "unterminated annotations");
      if (depth == 0 && t.is(")")) return;
      if (t.is("(") || t.is("[")) ++depth;
      if (t.is(")") || t.is("]")) --depth;
      lex_.next();
    }
  }

  void parse_formula(std::vector<Atom>& head, std::vector<Atom>& body) {
    if (lex_.peek().is("(")) {
      lex_.next();
      parse_formula(head, body);
      lex_.expect(")");
    } else {
      parse_literal(head, body);
    }
    while (lex_.peek().is("|")) {
      lex_.next();
      if (lex_.peek().is("(")) {
        lex_.next();
        parse_formula(head, body);
        lex_.expect(")");
      } else {
        parse_literal(head, body);
      }
    }
  }

  void parse_literal(std::vector<Atom>& head, std::vector<Atom>& body) {
    bool negated = false;
    while (lex_.peek().is("~")) {
      lex_.next();
      negated = !negated;
    }
    int parens = 0;
    while (lex_.peek().is("(")) {
      lex_.next();
      ++parens;
    }
    Token start = lex_.peek();
    if (start.kind == Token::Dollar) {
      lex_.next();
      if (start.text == "$false") {
        if (negated) lex_.fail(start, "negated $false is not supported");
      } else if (start.text == "$true") {
        lex_.fail(start, "$true literals are not supported");
      } else {
        lex_.fail(start, "unsupported defined symbol " + start.text);
      }
      close_parens(parens);
      return;
    }
    Term lhs = parse_term();
    bool positive = !negated;
    std::optional<Atom> atom;
    if (lex_.peek().is("=") || lex_.peek().is("!=")) {
      bool neq = lex_.next().text == "!=";
      Term rhs = parse_term();
      atom = Atom::equation(std::move(lhs), std::move(rhs));
      if (neq) positive = !positive;
    } else {
      if (lhs.is_var()) lex_.fail(start, "a variable cannot be used as an atom");
      if (lhs.symbol() == "=" ) lex_.fail(start, "bad atom");
      atom = Atom(lhs.symbol(), lhs.args());
      check_symbol(atom->predicate, start, true);
    }
    close_parens(parens);
    (positive ? head : body).push_back(std::move(*atom));
  }

  void close_parens(int n) {
    for (int i = 0; i < n; ++i) lex_.expect(")");
  }

  void check_symbol(const std::string& name, const Token& at, bool predicate) {
    if (!is_reserved_name(name)) return;
    if (!options_.allow_generated) lex_.fail(at, "symbol '" + name + "' is reserved for generated symbols");
    (void)predicate;
  }

  Term parse_term() {
    Token t = lex_.next();
    if (t.kind == Token::Upper) {
      auto [it, inserted] = vars_.emplace(t.text, static_cast<VarId>(vars_.size()));
      return Term::var(it->second);
    }
    if (t.kind == Token::Distinct) lex_.fail(t, "distinct objects are not supported");
    if (t.kind == Token::Dollar) lex_.fail(t, "unsupported defined symbol " + t.text);
    if (!symbol_token(t)) lex_.fail(t, "expected a term but found '" + Lexer::describe(t) + "'");
    if (t.kind != Token::Number) check_symbol(t.text, t, false);
    std::vector<Term> args;
    if (lex_.peek().is("(")) {
      lex_.next();
      args.push_back(parse_term());
      while (lex_.peek().is(",")) {
        lex_.next();
        args.push_back(parse_term());
      }
      lex_.expect(")");
    }
    return Term::app(t.text, std::move(args));
  }

  Lexer lex_;
  const ParseOptions& options_;
  std::unordered_map<std::string, VarId> vars_;
};

void tag_generated(Problem& p) {
  for (const auto& [name, arity] : p.signature.predicates.entries()) {
    if (name == kDomain) p.signature.specials.emplace(name, SpecialSymbol{SpecialKind::Domain, {}});
    else if (name == kSubterm) p.signature.specials.emplace(name, SpecialSymbol{SpecialKind::Subterm, {}});
    else if (name == kMyEqual) p.signature.specials.emplace(name, SpecialSymbol{SpecialKind::MyEqual, {}});
    else if (name == kDisequality) p.signature.specials.emplace(name, SpecialSymbol{SpecialKind::Disequality, kEquality});
    else if (name.rfind(kShiftPrefix, 0) == 0)
      p.signature.specials.emplace(name, SpecialSymbol{SpecialKind::Shifted, name.substr(std::string(kShiftPrefix).size())});
  }
}

std::string tptp_term(const Term& t) {
  if (t.is_var()) return "X" + std::to_string(t.var_id());
  std::string out = quote_symbol(t.symbol());
  if (t.args().empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    out += tptp_term(t.args()[i]);
  }
  return out + ')';
}

std::string tptp_atom(const Atom& a) {
  if (a.args.empty()) return quote_symbol(a.predicate);
  std::string out = quote_symbol(a.predicate) + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += tptp_term(a.args[i]);
  }
  return out + ")";
}

std::string tptp_literal(const Atom& a, bool positive) {
  if (a.is_equation()) return tptp_term(a.args[0]) + (positive ? " = " : " != ") + tptp_term(a.args[1]);
  return (positive ? "" : "~") + tptp_atom(a);
}

}  // namespace

Problem parse(std::string_view text, const ParseOptions& options) {
  Problem p = CnfParser(text, options).run();
  if (options.allow_generated) tag_generated(p);
  return p;
}

Problem parse_file(const std::string& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (options.source_name.empty()) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.rfind('.');
    options.source_name = dot == std::string::npos ? base : base.substr(0, dot);
  }
  return parse(ss.str(), options);
}

std::string print_clause(const Clause& c, const std::string& fallback_label) {
  Clause k = canonical(c);
  std::vector<std::string> lits;
  for (const auto& a : k.head()) lits.push_back(tptp_literal(a, true));
  for (const auto& a : k.body()) lits.push_back(tptp_literal(a, false));
  std::string formula;
  if (lits.empty()) formula = "$false";
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) formula += " | ";
    formula += lits[i];
  }
  const std::string& label = c.label().empty() ? fallback_label : c.label();
  return "cnf(" + quote_symbol(label) + ", axiom, (" + formula + ")).";
}

std::string print_clauses(const Problem& p) {
  std::string out;
  for (std::size_t i = 0; i < p.clauses.size(); ++i) {
    out += print_clause(p.clauses[i], "c" + std::to_string(i + 1));
    out += '\n';
  }
  return out;
}

std::string to_string(SzsStatus s) {
  switch (s) {
    case SzsStatus::Satisfiable: return "Satisfiable";
    case SzsStatus::Unsatisfiable: return "Unsatisfiable";
    case SzsStatus::Timeout: return "Timeout";
    case SzsStatus::GaveUp: return "GaveUp";
  }
  return "GaveUp";
}

std::string print_szs(SzsStatus s, const std::string& name) {
  return "% SZS status " + to_string(s) + " for " + name;
}

std::size_t ModelDocument::index_of(const Term& t) const {
  auto it = std::find(domain.begin(), domain.end(), t);
  return it == domain.end() ? npos : static_cast<std::size_t>(it - domain.begin());
}

namespace {

std::string tuple_text(const ModelDocument& m, const std::vector<std::size_t>& idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += tptp_term(m.domain.at(idx[i]));
  }
  return out + ")";
}

}  // namespace

std::string print_model(const ModelDocument& m) {
  std::string out = "model.\ndomain: ";
  for (std::size_t i = 0; i < m.domain.size(); ++i) {
    if (i) out += ", ";
    out += tptp_term(m.domain[i]);
  }
  out += ".\n";
  for (const auto& rep : m.domain) {
    auto it = m.classes.find(rep);
    if (it == m.classes.end() || it->second.size() < 2) continue;
    out += "class: " + tptp_term(rep) + " = ";
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      if (i) out += ", ";
      out += tptp_term(it->second[i]);
    }
    out += ".\n";
  }
  std::vector<std::string> lines;
  for (const auto& [f, table] : m.functions)
    for (const auto& [args, result] : table)
      lines.push_back("fn " + quote_symbol(f) + ": " + tuple_text(m, args) + " -> " + tptp_term(m.domain.at(result)) + ".");
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out += l + "\n";
  lines.clear();
  for (const auto& [p, ext] : m.predicates)
    for (const auto& tuple : ext) lines.push_back("pred " + quote_symbol(p) + ": " + tuple_text(m, tuple) + ".");
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

class ModelParser {
public:
  explicit ModelParser(std::string_view text) : lex_(text) {}

  ModelDocument run() {
    Token h = lex_.next();
    if (h.kind != Token::Lower || h.text != "model") lex_.fail(h, "expected model header");
    lex_.expect(".");
    while (lex_.peek().kind != Token::End) {
      Token key = lex_.next();
      if (key.kind != Token::Lower) lex_.fail(key, "expected a model item");
      if (key.text == "domain") {
        lex_.expect(":");
        if (!lex_.peek().is(".")) {
          add_domain(ground_term());
          while (lex_.peek().is(",")) {
            lex_.next();
            add_domain(ground_term());
          }
        }
        lex_.expect(".");
      } else if (key.text == "class") {
        lex_.expect(":");
        Term rep = ground_term();
        lex_.expect("=");
        std::vector<Term> members{ground_term()};
        while (lex_.peek().is(",")) {
          lex_.next();
          members.push_back(ground_term());
        }
        lex_.expect(".");
        m_.classes[rep] = std::move(members);
      } else if (key.text == "fn") {
        Token sym = lex_.next();
        if (!symbol_token(sym)) lex_.fail(sym, "expected a function symbol");
        lex_.expect(":");
        auto args = tuple();
        lex_.expect("->");
        std::size_t result = element(ground_term(), sym);
        lex_.expect(".");
        auto [it, fresh] = m_.function_arity.emplace(sym.text, args.size());
        if (!fresh && it->second != args.size()) lex_.fail(sym, "inconsistent arity for " + sym.text);
        m_.functions[sym.text][args] = result;
      } else if (key.text == "pred") {
        Token sym = lex_.next();
        if (!symbol_token(sym)) lex_.fail(sym, "expected a predicate symbol");
        lex_.expect(":");
        auto args = tuple();
        lex_.expect(".");
        m_.predicates[sym.text].insert(args);
      } else {
        lex_.fail(key, "unknown model item '" + key.text + "'");
      }
    }
    return std::move(m_);
  }

  Term ground_term() {
    Token t = lex_.next();
    if (t.kind == Token::Upper) lex_.fail(t, "model terms must be ground");
    if (!symbol_token(t)) lex_.fail(t, "expected a term but found '" + Lexer::describe(t) + "'");
    std::vector<Term> args;
    if (lex_.peek().is("(")) {
      lex_.next();
      args.push_back(ground_term());
      while (lex_.peek().is(",")) {
        lex_.next();
        args.push_back(ground_term());
      }
      lex_.expect(")");
    }
    return Term::app(t.text, std::move(args));
  }

  Lexer& lexer() { return lex_; }

private:
  void add_domain(Term t) {
    if (index_.count(t)) throw Error("duplicate domain element " + to_string(t));
    index_.emplace(t, m_.domain.size());
    m_.domain.push_back(std::move(t));
  }

  std::size_t element(const Term& t, const Token& at) {
    auto it = index_.find(t);
    if (it == index_.end()) lex_.fail(at, to_string(t) + " is not a domain element");
    return it->second;
  }

  std::vector<std::size_t> tuple() {
    Token open = lex_.expect("(");
    std::vector<std::size_t> out;
    if (lex_.peek().is(")")) {
      lex_.next();
      return out;
    }
    out.push_back(element(ground_term(), open));
    while (lex_.peek().is(",")) {
      lex_.next();
      out.push_back(element(ground_term(), open));
    }
    lex_.expect(")");
    return out;
  }

  Lexer lex_;
  ModelDocument m_;
  std::map<Term, std::size_t> index_;
};

}  // namespace

ModelDocument parse_model(std::string_view text) { return ModelParser(text).run(); }

Term parse_ground_term(std::string_view text) {
  ModelParser p(text);
  Term t = p.ground_term();
  if (p.lexer().peek().kind != Token::End) p.lexer().fail(p.lexer().peek(), "trailing input after term");
  return t;
}

}  // namespace bumg
