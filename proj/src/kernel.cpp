#include "bumg/kernel.hpp"

#include <algorithm>
#include <sstream>

namespace bumg {

Term Term::var(VarId id) {
  Term t;
  t.is_var_ = true;
  t.var_ = id;
  return t;
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  Term t;
  t.symbol_ = std::move(symbol);
  t.args_ = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (is_var_) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_ground(); });
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

bool operator==(const Term& a, const Term& b) {
  if (a.is_var_ != b.is_var_) return false;
  if (a.is_var_) return a.var_ == b.var_;
  return a.symbol_ == b.symbol_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  // Variables sort before applications.
  if (a.is_var_ != b.is_var_) return a.is_var_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_var_) return a.var_ <=> b.var_;
  if (auto c = a.symbol_.compare(b.symbol_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(), b.args_.end());
}

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

namespace {

void push_unique(std::vector<Atom>& out, Atom a) {
  if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
}

}  // namespace

Clause::Clause(std::vector<Atom> head, std::vector<Atom> body, std::string label) : label_(std::move(label)) {
  head_.reserve(head.size());
  body_.reserve(body.size());
  for (auto& a : head) push_unique(head_, std::move(a));
  for (auto& a : body) push_unique(body_, std::move(a));
}

Term substitute(const Substitution& s, const Term& t) {
  if (t.is_var()) {
    auto it = s.find(t.var_id());
    return it == s.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(substitute(s, a));
  return Term::app(t.symbol(), std::move(args));
}

Atom substitute(const Substitution& s, const Atom& a) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const auto& t : a.args) args.push_back(substitute(s, t));
  return Atom(a.predicate, std::move(args));
}

Clause substitute(const Substitution& s, const Clause& c) {
  std::vector<Atom> head, body;
  for (const auto& a : c.head()) head.push_back(substitute(s, a));
  for (const auto& a : c.body()) body.push_back(substitute(s, a));
  return Clause(std::move(head), std::move(body), c.label());
}

namespace {

bool occurs(VarId v, const Term& t) {
  if (t.is_var()) return t.var_id() == v;
  return std::any_of(t.args().begin(), t.args().end(), [v](const Term& a) { return occurs(v, a); });
}

// Resolve a variable through the triangular substitution built so far.
Term walk(const Substitution& s, Term t) {
  while (t.is_var()) {
    auto it = s.find(t.var_id());
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

Term resolve_fully(const Substitution& s, const Term& t) {
  Term w = walk(s, t);
  if (w.is_var() || w.args().empty()) return w;
  std::vector<Term> args;
  for (const auto& a : w.args()) args.push_back(resolve_fully(s, a));
  return Term::app(w.symbol(), std::move(args));
}

bool unify(const Term& x, const Term& y, Substitution& s) {
  Term a = walk(s, x);
  Term b = walk(s, y);
  if (a.is_var() && b.is_var() && a.var_id() == b.var_id()) return true;
  if (a.is_var()) {
    if (occurs(a.var_id(), resolve_fully(s, b))) return false;
    s[a.var_id()] = b;
    return true;
  }
  if (b.is_var()) return unify(b, a, s);
  if (a.symbol() != b.symbol() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!unify(a.args()[i], b.args()[i], s)) return false;
  return true;
}

Substitution idempotent(const Substitution& triangular) {
  Substitution out;
  for (const auto& [v, t] : triangular) out[v] = resolve_fully(triangular, t);
  return out;
}

bool match_term(const Term& pattern, const Term& ground, Substitution& s) {
  if (pattern.is_var()) {
    auto [it, inserted] = s.emplace(pattern.var_id(), ground);
    return inserted || it->second == ground;
  }
  if (ground.is_var() || pattern.symbol() != ground.symbol() || pattern.arity() != ground.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_term(pattern.args()[i], ground.args()[i], s)) return false;
  return true;
}

}  // namespace

std::optional<Substitution> mgu(const Term& t1, const Term& t2) {
  Substitution s;
  if (!unify(t1, t2, s)) return std::nullopt;
  return idempotent(s);
}

std::optional<Substitution> mgu(const Atom& a1, const Atom& a2) {
  if (a1.predicate != a2.predicate || a1.args.size() != a2.args.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < a1.args.size(); ++i)
    if (!unify(a1.args[i], a2.args[i], s)) return std::nullopt;
  return idempotent(s);
}

std::optional<Substitution> match(const Atom& pattern, const Atom& ground) {
  if (pattern.predicate != ground.predicate || pattern.args.size() != ground.args.size()) return std::nullopt;
  Substitution s;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(pattern.args[i], ground.args[i], s)) return std::nullopt;
  return s;
}

void collect_vars(const Term& t, std::set<VarId>& out) {
  if (t.is_var()) {
    out.insert(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

std::set<VarId> vars(const Term& t) {
  std::set<VarId> out;
  collect_vars(t, out);
  return out;
}

std::set<VarId> vars(const Atom& a) {
  std::set<VarId> out;
  for (const auto& t : a.args) collect_vars(t, out);
  return out;
}

std::set<VarId> head_vars(const Clause& c) {
  std::set<VarId> out;
  for (const auto& a : c.head())
    for (const auto& t : a.args) collect_vars(t, out);
  return out;
}

std::set<VarId> body_vars(const Clause& c) {
  std::set<VarId> out;
  for (const auto& a : c.body())
    for (const auto& t : a.args) collect_vars(t, out);
  return out;
}

std::set<VarId> vars(const Clause& c) {
  auto out = head_vars(c);
  auto b = body_vars(c);
  out.insert(b.begin(), b.end());
  return out;
}

namespace {

void vars_in_order(const Term& t, std::vector<VarId>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.var_id()) == out.end()) out.push_back(t.var_id());
    return;
  }
  for (const auto& a : t.args()) vars_in_order(a, out);
}

}  // namespace

std::vector<VarId> vars_in_order(const Clause& c) {
  std::vector<VarId> out;
  for (const auto& a : c.head())
    for (const auto& t : a.args) vars_in_order(t, out);
  for (const auto& a : c.body())
    for (const auto& t : a.args) vars_in_order(t, out);
  return out;
}

VarId next_free_var(const Clause& c) {
  auto vs = vars(c);
  return vs.empty() ? 0 : *vs.rbegin() + 1;
}

bool is_ground(const Clause& c) { return vars(c).empty(); }

bool is_range_restricted(const Clause& c) {
  auto hv = head_vars(c);
  auto bv = body_vars(c);
  return std::includes(bv.begin(), bv.end(), hv.begin(), hv.end());
}

namespace {

bool only_constants(const Term& t) {
  if (t.is_var() || t.is_constant()) return true;
  return false;
}

}  // namespace

bool is_bs_clause(const Clause& c) {
  auto ok = [](const Atom& a) { return std::all_of(a.args.begin(), a.args.end(), only_constants); };
  return std::all_of(c.head().begin(), c.head().end(), ok) && std::all_of(c.body().begin(), c.body().end(), ok);
}

std::vector<Term> top_level_terms(const Atom& a) { return a.args; }

namespace {

void collect_proper(const Term& t, std::vector<Term>& out) {
  if (!t.is_proper_functional()) return;
  out.push_back(t);
  for (const auto& a : t.args()) collect_proper(a, out);
}

}  // namespace

std::vector<Term> proper_functional_subterms(const Atom& a) {
  std::vector<Term> out;
  for (const auto& t : a.args) collect_proper(t, out);
  return out;
}

bool has_proper_functional_term(const Atom& a) {
  return std::any_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.is_proper_functional(); });
}

Abstraction term_abstraction(const Atom& a, VarId& next_fresh) {
  Abstraction out;
  out.atom.predicate = a.predicate;
  for (const auto& t : a.args) {
    if (t.is_var()) {
      out.atom.args.push_back(t);
      continue;
    }
    VarId x = next_fresh++;
    out.atom.args.push_back(Term::var(x));
    out.alpha.emplace(x, t);
  }
  return out;
}

Clause canonical(const Clause& c) {
  Substitution s;
  VarId next = 0;
  for (VarId v : vars_in_order(c)) s.emplace(v, Term::var(next++));
  return substitute(s, c);
}

std::string to_string(const Term& t) {
  if (t.is_var()) return "X" + std::to_string(t.var_id());
  if (t.args().empty()) return t.symbol();
  std::string out = t.symbol() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    out += to_string(t.args()[i]);
  }
  return out + ")";
}

std::string to_string(const Atom& a) {
  if (a.is_equation()) return to_string(a.args[0]) + " = " + to_string(a.args[1]);
  if (a.is_disequation()) return to_string(a.args[0]) + " != " + to_string(a.args[1]);
  if (a.args.empty()) return a.predicate;
  std::string out = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(a.args[i]);
  }
  return out + ")";
}

std::string to_string(const Clause& c) {
  std::string out;
  if (c.head().empty()) out = "false";
  for (std::size_t i = 0; i < c.head().size(); ++i) {
    if (i) out += " | ";
    out += to_string(c.head()[i]);
  }
  out += " <- ";
  if (c.body().empty()) out += "true";
  for (std::size_t i = 0; i < c.body().size(); ++i) {
    if (i) out += " & ";
    out += to_string(c.body()[i]);
  }
  return out;
}

bool SymbolTable::add(const std::string& name, std::size_t arity) {
  auto it = index_.find(name);
  if (it != index_.end()) return entries_[it->second].second == arity;
  index_.emplace(name, entries_.size());
  entries_.emplace_back(name, arity);
  return true;
}

std::optional<std::size_t> SymbolTable::arity(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

std::optional<std::size_t> SymbolTable::position(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Signature::add(const Term& t) {
  if (t.is_var()) return;
  if (!functions.add(t.symbol(), t.arity()))
    throw Error("function symbol '" + t.symbol() + "' used with inconsistent arity");
  for (const auto& a : t.args()) add(a);
}

void Signature::add(const Atom& a) {
  if (!predicates.add(a.predicate, a.args.size()))
    throw Error("predicate symbol '" + a.predicate + "' used with inconsistent arity");
  for (const auto& t : a.args) add(t);
}

void Signature::add(const Clause& c) {
  for (const auto& a : c.head()) add(a);
  for (const auto& a : c.body()) add(a);
}

void Signature::add_special_predicate(const std::string& name, std::size_t arity, SpecialSymbol tag) {
  if (!predicates.add(name, arity)) throw Error("generated predicate '" + name + "' clashes with an existing arity");
  specials.emplace(name, std::move(tag));
}

std::vector<std::string> Signature::constants() const {
  std::vector<std::string> out;
  for (const auto& [name, arity] : functions.entries())
    if (arity == 0) out.push_back(name);
  return out;
}

std::vector<std::pair<std::string, std::size_t>> Signature::input_predicates() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& e : predicates.entries())
    if (e.first != kEquality && !is_special(e.first)) out.push_back(e);
  return out;
}

std::string Signature::fresh_constant_name(const std::string& stem) const {
  for (std::size_t i = 0;; ++i) {
    std::string name = stem + std::to_string(i);
    if (!functions.contains(name) && !predicates.contains(name)) return name;
  }
}

Signature signature_of(const std::vector<Clause>& clauses) {
  Signature sig;
  for (const auto& c : clauses) sig.add(c);
  return sig;
}

std::string shifted_name(const std::string& predicate) {
  if (predicate == kEquality) return kDisequality;
  return kShiftPrefix + predicate;
}

bool is_reserved_name(const std::string& name) {
  return name == kDomain || name == kSubterm || name == kMyEqual || name == kDisequality ||
         name.rfind(kShiftPrefix, 0) == 0;
}

}  // namespace bumg
