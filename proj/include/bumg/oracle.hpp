#pragma once

// Brute-force finite E-model search and a ground evaluator over integer
// domains {0..k-1}. Equality is identity; everything else is a table.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bumg/kernel.hpp"

namespace bumg::oracle {

class BudgetExceeded : public Error {
public:
  BudgetExceeded(const std::string& message, double required) : Error(message), required_(required) {}
  /// Size of the full interpretation space for the requested domain size.
  double required() const { return required_; }

private:
  double required_;
};

struct FunctionTable {
  std::size_t arity = 0;
  std::vector<int> values;  // -1: not yet assigned
};

struct PredicateTable {
  std::size_t arity = 0;
  std::vector<std::int8_t> values;  // -1: not yet assigned
};

struct FiniteInterpretation {
  std::size_t size = 0;
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, PredicateTable> predicates;

  /// Row-major index of an argument tuple (first argument most significant).
  std::size_t cell(const std::vector<std::size_t>& args) const;
  void set_function(const std::string& f, const std::vector<std::size_t>& args, std::size_t value);
  void set_predicate(const std::string& p, const std::vector<std::size_t>& args, bool value);
  /// Empty tables of the right shape for every symbol of the clauses.
  static FiniteInterpretation blank(const std::vector<Clause>& clauses, std::size_t size);
};

struct Counterexample {
  std::size_t clause_index = 0;
  Clause clause;
  std::vector<std::pair<VarId, std::size_t>> valuation;
  std::string reason;

  std::string describe() const;
};

/// First clause instance falsified by the interpretation. A predicate without
/// a table is false everywhere; a function without a table is an error.
std::optional<Counterexample> evaluate(const std::vector<Clause>& clauses, const FiniteInterpretation& interp);

/// Searches all interpretations of exactly `size` elements, function cells
/// before predicate cells, values in increasing order, pruning partial
/// assignments that already falsify a clause instance. Throws BudgetExceeded
/// after visiting more than `budget` search nodes.
std::optional<FiniteInterpretation> find_model(const std::vector<Clause>& clauses, std::size_t size,
                                               std::uint64_t budget = std::uint64_t{1} << 24);

/// find_model for sizes 1..max_size; first hit wins.
std::optional<FiniteInterpretation> find_model_up_to(const std::vector<Clause>& clauses, std::size_t max_size,
                                                     std::uint64_t budget = std::uint64_t{1} << 24);

}  // namespace bumg::oracle
