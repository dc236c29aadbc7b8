#pragma once

// Hash-consed ground terms and a copyable ground congruence closure.
//
// The bank is append-only and shared by every branch of a search; the
// closure is per branch and is copied when the search splits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bumg/kernel.hpp"

namespace bumg {

using TermId = std::uint32_t;
using SymId = std::uint32_t;

inline constexpr TermId kNoTerm = static_cast<TermId>(-1);

class TermBank {
public:
  /// Declares a function symbol; declaration order is the symbol precedence.
  SymId declare(const std::string& name, std::size_t arity);
  std::optional<SymId> symbol(const std::string& name) const;
  const std::string& name(SymId s) const { return names_[s]; }
  std::size_t arity(SymId s) const { return arities_[s]; }
  std::size_t symbol_count() const { return names_.size(); }

  TermId app(SymId s, std::vector<TermId> args);
  /// Ground kernel term; undeclared symbols are declared on the fly.
  TermId intern(const Term& t);
  /// Returns the id if the term was interned before.
  std::optional<TermId> find(SymId s, const std::vector<TermId>& args) const;

  SymId sym(TermId t) const { return nodes_[t].sym; }
  const std::vector<TermId>& args(TermId t) const { return nodes_[t].args; }
  std::uint64_t weight(TermId t) const { return nodes_[t].weight; }
  std::size_t size() const { return nodes_.size(); }

  Term to_term(TermId t) const;
  std::string to_string(TermId t) const;

  /// Total order: weight, then symbol precedence, then arguments left to right.
  int compare(TermId a, TermId b) const;
  bool less(TermId a, TermId b) const { return compare(a, b) < 0; }

private:
  struct Node {
    SymId sym;
    std::vector<TermId> args;
    std::uint64_t weight;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };

  std::vector<std::string> names_;
  std::vector<std::size_t> arities_;
  std::unordered_map<std::string, SymId> by_name_;
  std::vector<Node> nodes_;
  std::unordered_map<std::vector<std::uint32_t>, TermId, KeyHash> index_;
};

/// Union-find with congruence propagation over registered terms. Each class
/// carries its least member under the bank's term order as representative.
class CongruenceClosure {
public:
  explicit CongruenceClosure(const TermBank* bank) : bank_(bank) {}

  /// Registers t and its subterms; may merge classes by congruence.
  void add(TermId t);
  /// Registers both terms and merges their classes.
  void merge(TermId a, TermId b);

  bool registered(TermId t) const { return t < parent_.size() && parent_[t] != kNoTerm; }
  /// Root of a registered term, or of the class a term would join by
  /// congruence; nullopt when neither applies.
  std::optional<TermId> resolve(TermId t) const;
  /// Congruence modulo the asserted equations; works for unregistered terms.
  bool congruent(TermId a, TermId b) const;

  TermId find(TermId t) const;
  /// Representative of the class of a registered term.
  TermId rep(TermId t) const { return rep_[find(t)]; }
  const std::vector<TermId>& members(TermId root) const { return members_[root]; }
  /// Registered term f(args') with args' congruent to args, if any.
  std::optional<TermId> lookup(SymId s, const std::vector<TermId>& args) const;

  /// Roots in registration order of their earliest member.
  std::vector<TermId> roots() const;
  /// Registered terms in registration order.
  const std::vector<TermId>& terms() const { return order_; }

  /// Incremented on every merge of two distinct classes.
  std::uint64_t epoch() const { return epoch_; }
  std::size_t merges() const { return merges_; }

private:
  using SigKey = std::vector<std::uint32_t>;
  struct KeyHash {
    std::size_t operator()(const SigKey& k) const;
  };

  SigKey key(TermId t) const;
  void grow(TermId t);
  void register_one(TermId t);
  void union_classes(TermId a, TermId b);
  void drain();

  const TermBank* bank_;
  std::vector<TermId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<TermId> rep_;
  std::vector<std::vector<TermId>> members_;
  std::vector<std::vector<TermId>> uses_;
  std::unordered_map<SigKey, TermId, KeyHash> table_;
  std::vector<TermId> order_;
  std::vector<std::pair<TermId, TermId>> pending_;
  std::uint64_t epoch_ = 0;
  std::size_t merges_ = 0;
};

}  // namespace bumg
