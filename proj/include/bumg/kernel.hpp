#pragma once

// Clause-logic kernel: terms, atoms, clauses, substitutions, signatures and
// the syntactic predicates the transformations and the engine rely on.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bumg {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

using VarId = std::uint32_t;

/// A first-order term: a variable or a function application. Constants are
/// zero-argument applications.
class Term {
public:
  Term() = default;

  static Term var(VarId id);
  static Term app(std::string symbol, std::vector<Term> args = {});

  bool is_var() const { return is_var_; }
  bool is_constant() const { return !is_var_ && args_.empty(); }
  /// Neither a variable nor a constant.
  bool is_proper_functional() const { return !is_var_ && !args_.empty(); }

  VarId var_id() const { return var_; }
  const std::string& symbol() const { return symbol_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }

  bool is_ground() const;
  std::size_t size() const;  // symbol count

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
  bool is_var_ = false;
  VarId var_ = 0;
  std::string symbol_;
  std::vector<Term> args_;
};

/// Name of the distinguished equality predicate.
inline constexpr const char* kEquality = "=";
/// Name of the shifted partner of equality (printed as `neq` in TPTP).
inline constexpr const char* kDisequality = "neq";

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> a) : predicate(std::move(pred)), args(std::move(a)) {}

  static Atom equation(Term lhs, Term rhs) { return Atom(kEquality, {std::move(lhs), std::move(rhs)}); }
  static Atom disequation(Term lhs, Term rhs) { return Atom(kDisequality, {std::move(lhs), std::move(rhs)}); }

  bool is_equation() const { return predicate == kEquality; }
  bool is_disequation() const { return predicate == kDisequality; }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// H1 | ... | Hm <- B1 & ... & Bk. An empty head is falsum, an empty body is
/// verum. Duplicate atoms are dropped on construction.
class Clause {
public:
  Clause() = default;
  Clause(std::vector<Atom> head, std::vector<Atom> body, std::string label = {});

  const std::vector<Atom>& head() const { return head_; }
  const std::vector<Atom>& body() const { return body_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool is_horn() const { return head_.size() <= 1; }
  bool is_positive() const { return body_.empty(); }
  bool is_goal() const { return head_.empty(); }

  /// Structural equality of head and body; labels are ignored.
  friend bool operator==(const Clause& a, const Clause& b) {
    return a.head_ == b.head_ && a.body_ == b.body_;
  }

private:
  std::vector<Atom> head_;
  std::vector<Atom> body_;
  std::string label_;
};

using Substitution = std::map<VarId, Term>;

Term substitute(const Substitution& s, const Term& t);
Atom substitute(const Substitution& s, const Atom& a);
Clause substitute(const Substitution& s, const Clause& c);

/// Most general unifier with occurs check.
std::optional<Substitution> mgu(const Atom& a1, const Atom& a2);
std::optional<Substitution> mgu(const Term& t1, const Term& t2);

/// One-sided unification: a substitution s with pattern*s == ground.
std::optional<Substitution> match(const Atom& pattern, const Atom& ground);

// Variable sets; std::set keeps iteration deterministic.
void collect_vars(const Term& t, std::set<VarId>& out);
std::set<VarId> vars(const Term& t);
std::set<VarId> vars(const Atom& a);
std::set<VarId> vars(const Clause& c);
std::set<VarId> head_vars(const Clause& c);
std::set<VarId> body_vars(const Clause& c);
/// Variables in order of first occurrence (head first, then body).
std::vector<VarId> vars_in_order(const Clause& c);

/// Smallest variable id not used in the clause.
VarId next_free_var(const Clause& c);

bool is_ground(const Clause& c);
/// Every head variable occurs in the body.
bool is_range_restricted(const Clause& c);
/// All functional terms are constants.
bool is_bs_clause(const Clause& c);

std::vector<Term> top_level_terms(const Atom& a);
/// Proper functional subterms in pre-order, duplicates kept.
std::vector<Term> proper_functional_subterms(const Atom& a);
bool has_proper_functional_term(const Atom& a);

struct Abstraction {
  Atom atom;
  Substitution alpha;  // reverts the abstraction
};

/// Replace each non-variable top-level argument by a fresh variable drawn from
/// `next_fresh` (advanced past the used ids).
Abstraction term_abstraction(const Atom& a, VarId& next_fresh);

/// Rename variables to 0,1,2,... in order of first occurrence.
Clause canonical(const Clause& c);

// Readable rendering: `q(X0,g(X0,X1)) | r(X1,X2) <- p(a,f(X0,X1),X0)`.
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);

enum class SpecialKind { Domain, Subterm, MyEqual, Shifted, Disequality, FreshConstant };

struct SpecialSymbol {
  SpecialKind kind;
  std::string origin;  // for Shifted: the predicate whose complement this is
};

/// An insertion-ordered name -> arity table.
class SymbolTable {
public:
  /// Adds the symbol or checks the arity; returns false on an arity clash.
  bool add(const std::string& name, std::size_t arity);
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  std::optional<std::size_t> arity(const std::string& name) const;
  /// Position in insertion order.
  std::optional<std::size_t> position(const std::string& name) const;
  const std::vector<std::pair<std::string, std::size_t>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

private:
  std::vector<std::pair<std::string, std::size_t>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Signature {
  SymbolTable functions;
  SymbolTable predicates;
  std::map<std::string, SpecialSymbol> specials;
  /// The constant added by range restriction (dom(c) <- true), if any.
  std::optional<std::string> domain_seed;

  bool is_special(const std::string& name) const { return specials.count(name) != 0; }
  /// Registers all symbols of the clause; throws Error on arity clashes.
  void add(const Clause& c);
  void add(const Atom& a);
  void add(const Term& t);
  /// Registers a generated predicate with its provenance.
  void add_special_predicate(const std::string& name, std::size_t arity, SpecialSymbol tag);

  std::vector<std::string> constants() const;
  /// Predicates from the original input: not special and not equality.
  std::vector<std::pair<std::string, std::size_t>> input_predicates() const;
  /// A constant name not used by any function or predicate symbol.
  std::string fresh_constant_name(const std::string& stem = "c") const;
};

Signature signature_of(const std::vector<Clause>& clauses);

// Names of generated symbols.
inline constexpr const char* kDomain = "dom";
inline constexpr const char* kSubterm = "sub";
inline constexpr const char* kMyEqual = "myequal";
inline constexpr const char* kShiftPrefix = "NOT_";

/// Name of the shifted partner of a predicate (`neq` for equality).
std::string shifted_name(const std::string& predicate);
/// True for dom, sub, myequal, neq and NOT_* names.
bool is_reserved_name(const std::string& name);

}  // namespace bumg
