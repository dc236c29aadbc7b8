#pragma once

// TPTP-CNF front end plus the line-oriented model format and SZS lines.
//
// Supported input: `cnf(name, role, formula[, annotations]).` where formula is
// a disjunction of literals built from `~`, `|`, `=`, `!=`, `$false` and
// parentheses; `%` line comments and `/* */` block comments. `include` is
// rejected. Positive literals go to the clause head, negative ones to the body;
// `s != t` becomes the body equation s = t.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bumg/kernel.hpp"

namespace bumg {

class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

struct Problem {
  std::vector<Clause> clauses;
  Signature signature;
  std::string name;
};

struct ParseOptions {
  std::string source_name;
  /// Accept generated symbols (dom, sub, myequal, neq, NOT_*) and tag them as
  /// specials. Off for user input, on when re-reading transformed files.
  bool allow_generated = false;
};

Problem parse(std::string_view text, const ParseOptions& options = {});
Problem parse_file(const std::string& path, ParseOptions options = {});

/// One `cnf(...)` line per clause; variables are renamed X0, X1, ... per clause.
std::string print_clauses(const Problem& p);
std::string print_clause(const Clause& c, const std::string& fallback_label);

enum class SzsStatus { Satisfiable, Unsatisfiable, Timeout, GaveUp };

std::string to_string(SzsStatus s);
std::string print_szs(SzsStatus s, const std::string& name);

/// Finite interpretation over representative ground terms.
struct ModelDocument {
  /// Representatives in order of first derivation.
  std::vector<Term> domain;
  /// Representative -> all members (sorted, representative first).
  std::map<Term, std::vector<Term>> classes;
  /// symbol -> argument tuple (domain indices) -> result index.
  std::map<std::string, std::map<std::vector<std::size_t>, std::size_t>> functions;
  std::map<std::string, std::size_t> function_arity;
  /// Visible predicate extensions (domain index tuples).
  std::map<std::string, std::set<std::vector<std::size_t>>> predicates;
  /// Extensions of generated predicates (dom, sub, neq, ...) on the branch
  /// the model came from. Informational only: never printed, and model
  /// checking reads generated predicates by their intended meaning.
  std::map<std::string, std::set<std::vector<std::size_t>>> special_predicates;

  std::size_t index_of(const Term& t) const;  // npos when absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Exact format:
///   model.
///   domain: t1, t2.
///   class: rep = m1, m2.
///   fn f: (d1,d2) -> d.
///   pred p: (d1).
std::string print_model(const ModelDocument& m);
ModelDocument parse_model(std::string_view text);

/// Ground-term reader shared with the model parser.
Term parse_ground_term(std::string_view text);

}  // namespace bumg
