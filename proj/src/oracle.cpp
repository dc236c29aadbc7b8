#include "bumg/oracle.hpp"

#include <cmath>
#include <sstream>

namespace bumg::oracle {

namespace {

constexpr int kUnknown = -1;

// Three-valued evaluation under a possibly partial valuation and possibly
// partial tables. `strict` turns a missing function table into an error and a
// missing predicate table into falsity; otherwise both are unknown.
struct Evaluator {
  const FiniteInterpretation& in;
  std::vector<int>& val;
  bool strict;
  std::string error;

  int term(const Term& t) {
    if (t.is_var()) return val[t.var_id()];
    auto it = in.functions.find(t.symbol());
    if (it == in.functions.end()) {
      if (strict && error.empty()) error = "function '" + t.symbol() + "' has no table";
      return kUnknown;
    }
    std::vector<std::size_t> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) {
      int v = term(a);
      if (v == kUnknown) return kUnknown;
      args.push_back(static_cast<std::size_t>(v));
    }
    int v = it->second.values[in.cell(args)];
    if (v == kUnknown && strict && error.empty()) error = "function '" + t.symbol() + "' is undefined on some argument";
    return v;
  }

  int atom(const Atom& a) {
    if (a.is_equation()) {
      int l = term(a.args[0]);
      int r = term(a.args[1]);
      if (l == kUnknown || r == kUnknown) return kUnknown;
      return l == r ? 1 : 0;
    }
    std::vector<std::size_t> args;
    bool known = true;
    for (const auto& t : a.args) {
      int v = term(t);
      if (v == kUnknown) known = false;
      else args.push_back(static_cast<std::size_t>(v));
    }
    auto it = in.predicates.find(a.predicate);
    if (it == in.predicates.end()) return strict ? 0 : kUnknown;
    if (!known) return kUnknown;
    return it->second.values[in.cell(args)];
  }
};

std::size_t var_slots(const Clause& c) {
  auto vs = vars(c);
  return vs.empty() ? 0 : *vs.rbegin() + 1;
}

// Searches for a valuation under which every body atom is true and every head
// atom false. Returns false as soon as some instance is definitely falsified
// (the witness is left in `val`).
class InstanceSearch {
public:
  InstanceSearch(const Clause& c, const FiniteInterpretation& in, bool strict)
      : clause_(c), order_(vars_in_order(c)), val_(var_slots(c), kUnknown), ev_{in, val_, strict, {}} {}

  bool satisfied() { return descend(0); }
  const std::vector<int>& valuation() const { return val_; }
  const std::vector<VarId>& order() const { return order_; }
  const std::string& error() const { return ev_.error; }

private:
  // True when no extension of the current valuation falsifies the clause.
  bool pruned() {
    for (const auto& h : clause_.head())
      if (ev_.atom(h) == 1) return true;
    for (const auto& b : clause_.body())
      if (ev_.atom(b) == 0) return true;
    return false;
  }

  bool falsified() {
    for (const auto& h : clause_.head())
      if (ev_.atom(h) != 0) return false;
    for (const auto& b : clause_.body())
      if (ev_.atom(b) != 1) return false;
    return true;
  }

  bool descend(std::size_t i) {
    if (pruned()) return true;
    if (!ev_.error.empty()) return false;
    if (i == order_.size()) return !falsified();
    for (std::size_t d = 0; d < ev_.in.size; ++d) {
      val_[order_[i]] = static_cast<int>(d);
      if (!descend(i + 1)) return false;
    }
    val_[order_[i]] = kUnknown;
    return true;
  }

  const Clause& clause_;
  std::vector<VarId> order_;
  std::vector<int> val_;
  Evaluator ev_;
};

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t FiniteInterpretation::cell(const std::vector<std::size_t>& args) const {
  std::size_t idx = 0;
  for (auto a : args) idx = idx * size + a;
  return idx;
}

void FiniteInterpretation::set_function(const std::string& f, const std::vector<std::size_t>& args,
                                        std::size_t value) {
  auto& t = functions[f];
  if (t.values.empty()) {
    t.arity = args.size();
    t.values.assign(power(size, t.arity), kUnknown);
  }
  t.values[cell(args)] = static_cast<int>(value);
}

void FiniteInterpretation::set_predicate(const std::string& p, const std::vector<std::size_t>& args, bool value) {
  auto& t = predicates[p];
  if (t.values.empty()) {
    t.arity = args.size();
    t.values.assign(power(size, t.arity), 0);
  }
  t.values[cell(args)] = value ? 1 : 0;
}

FiniteInterpretation FiniteInterpretation::blank(const std::vector<Clause>& clauses, std::size_t size) {
  FiniteInterpretation fi;
  fi.size = size;
  Signature sig = signature_of(clauses);
  for (const auto& [f, n] : sig.functions.entries()) fi.functions[f] = {n, std::vector<int>(power(size, n), kUnknown)};
  for (const auto& [p, n] : sig.predicates.entries()) {
    if (p == kEquality) continue;
    fi.predicates[p] = {n, std::vector<std::int8_t>(power(size, n), kUnknown)};
  }
  return fi;
}

std::string Counterexample::describe() const {
  std::ostringstream out;
  out << "clause " << clause_index + 1 << " (" << to_string(clause) << ")";
  if (!valuation.empty()) {
    out << " falsified under";
    for (const auto& [v, d] : valuation) out << " X" << v << "=" << d;
  } else {
    out << " falsified";
  }
  if (!reason.empty()) out << ": " << reason;
  return out.str();
}

std::optional<Counterexample> evaluate(const std::vector<Clause>& clauses, const FiniteInterpretation& interp) {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    InstanceSearch s(clauses[i], interp, true);
    if (s.satisfied()) continue;
    Counterexample cx{i, clauses[i], {}, s.error()};
    for (VarId v : s.order())
      if (s.valuation()[v] != kUnknown) cx.valuation.emplace_back(v, static_cast<std::size_t>(s.valuation()[v]));
    return cx;
  }
  return std::nullopt;
}

namespace {

struct Cell {
  bool function;
  std::string symbol;
  std::size_t index;
};

class ModelSearch {
public:
  ModelSearch(const std::vector<Clause>& clauses, std::size_t size, std::uint64_t budget)
      : clauses_(clauses), interp_(FiniteInterpretation::blank(clauses, size)), budget_(budget) {
    for (const auto& [f, t] : ordered_functions())
      for (std::size_t i = 0; i < t; ++i) cells_.push_back({true, f, i});
    for (const auto& [p, t] : interp_.predicates)
      for (std::size_t i = 0; i < t.values.size(); ++i) cells_.push_back({false, p, i});
    std::size_t fn_cells = 0;
    for (const auto& c : cells_) fn_cells += c.function;
    space_ = std::pow(static_cast<double>(size), static_cast<double>(fn_cells)) *
             std::pow(2.0, static_cast<double>(cells_.size() - fn_cells));
  }

  std::optional<FiniteInterpretation> run() {
    if (descend(0)) return interp_;
    return std::nullopt;
  }

private:
  // Function symbols in signature order with their table sizes.
  std::vector<std::pair<std::string, std::size_t>> ordered_functions() const {
    std::vector<std::pair<std::string, std::size_t>> out;
    Signature sig = signature_of(clauses_);
    for (const auto& [f, n] : sig.functions.entries()) out.emplace_back(f, interp_.functions.at(f).values.size());
    return out;
  }

  bool consistent() {
    for (const auto& c : clauses_) {
      InstanceSearch s(c, interp_, false);
      if (!s.satisfied()) return false;
    }
    return true;
  }

  bool descend(std::size_t i) {
    if (++visited_ > budget_) {
      std::ostringstream msg;
      msg << "oracle budget of " << budget_ << " search nodes exceeded; the full space for size " << interp_.size
          << " has " << space_ << " interpretations";
      throw BudgetExceeded(msg.str(), space_);
    }
    if (!consistent()) return false;
    if (i == cells_.size()) return true;
    const Cell& c = cells_[i];
    if (c.function) {
      auto& slot = interp_.functions[c.symbol].values[c.index];
      for (std::size_t d = 0; d < interp_.size; ++d) {
        slot = static_cast<int>(d);
        if (descend(i + 1)) return true;
      }
      slot = kUnknown;
    } else {
      auto& slot = interp_.predicates[c.symbol].values[c.index];
      for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
        slot = v;
        if (descend(i + 1)) return true;
      }
      slot = kUnknown;
    }
    return false;
  }

  const std::vector<Clause>& clauses_;
  FiniteInterpretation interp_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  std::vector<Cell> cells_;
  double space_ = 0;
};

}  // namespace

std::optional<FiniteInterpretation> find_model(const std::vector<Clause>& clauses, std::size_t size,
                                               std::uint64_t budget) {
  if (size == 0) throw Error("find_model needs a domain of at least one element");
  return ModelSearch(clauses, size, budget).run();
}

std::optional<FiniteInterpretation> find_model_up_to(const std::vector<Clause>& clauses, std::size_t max_size,
                                                     std::uint64_t budget) {
  for (std::size_t k = 1; k <= max_size; ++k)
    if (auto m = find_model(clauses, k, budget)) return m;
  return std::nullopt;
}

}  // namespace bumg::oracle
