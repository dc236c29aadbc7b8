#include "bumg/congruence.hpp"

#include <algorithm>
#include <limits>

namespace bumg {

namespace {

std::size_t hash_words(const std::vector<std::uint32_t>& k) {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ k.size();
  for (auto w : k) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
  return h;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

}  // namespace

std::size_t TermBank::KeyHash::operator()(const std::vector<std::uint32_t>& k) const { return hash_words(k); }
std::size_t CongruenceClosure::KeyHash::operator()(const SigKey& k) const { return hash_words(k); }

SymId TermBank::declare(const std::string& name, std::size_t arity) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) {
    if (arities_[it->second] != arity) throw Error("function symbol '" + name + "' declared with two arities");
    return it->second;
  }
  SymId id = static_cast<SymId>(names_.size());
  names_.push_back(name);
  arities_.push_back(arity);
  by_name_.emplace(name, id);
  return id;
}

std::optional<SymId> TermBank::symbol(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

TermId TermBank::app(SymId s, std::vector<TermId> args) {
  std::vector<std::uint32_t> key;
  key.reserve(args.size() + 1);
  key.push_back(s);
  key.insert(key.end(), args.begin(), args.end());
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  std::uint64_t w = 1;
  for (auto a : args) w = saturating_add(w, nodes_[a].weight);
  TermId id = static_cast<TermId>(nodes_.size());
  nodes_.push_back({s, std::move(args), w});
  index_.emplace(std::move(key), id);
  return id;
}

TermId TermBank::intern(const Term& t) {
  if (t.is_var()) throw Error("cannot intern a non-ground term");
  std::vector<TermId> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(intern(a));
  return app(declare(t.symbol(), t.arity()), std::move(args));
}

std::optional<TermId> TermBank::find(SymId s, const std::vector<TermId>& args) const {
  std::vector<std::uint32_t> key;
  key.push_back(s);
  key.insert(key.end(), args.begin(), args.end());
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Term TermBank::to_term(TermId t) const {
  std::vector<Term> args;
  for (auto a : nodes_[t].args) args.push_back(to_term(a));
  return Term::app(names_[nodes_[t].sym], std::move(args));
}

std::string TermBank::to_string(TermId t) const {
  const Node& n = nodes_[t];
  std::string out = names_[n.sym];
  if (n.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(n.args[i]);
  }
  return out + ')';
}

int TermBank::compare(TermId a, TermId b) const {
  if (a == b) return 0;
  const Node& x = nodes_[a];
  const Node& y = nodes_[b];
  if (x.weight != y.weight) return x.weight < y.weight ? -1 : 1;
  if (x.sym != y.sym) return x.sym < y.sym ? -1 : 1;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    int c = compare(x.args[i], y.args[i]);
    if (c) return c;
  }
  return 0;
}

// ---------------------------------------------------------------------------

TermId CongruenceClosure::find(TermId t) const {
  while (parent_[t] != t) t = parent_[t];
  return t;
}

CongruenceClosure::SigKey CongruenceClosure::key(TermId t) const {
  SigKey k;
  k.push_back(bank_->sym(t));
  for (auto a : bank_->args(t)) k.push_back(find(a));
  return k;
}

void CongruenceClosure::grow(TermId t) {
  if (t < parent_.size()) return;
  std::size_t n = static_cast<std::size_t>(t) + 1;
  parent_.resize(n, kNoTerm);
  size_.resize(n, 0);
  rep_.resize(n, kNoTerm);
  members_.resize(n);
  uses_.resize(n);
}

void CongruenceClosure::register_one(TermId t) {
  grow(t);
  parent_[t] = t;
  size_[t] = 1;
  rep_[t] = t;
  members_[t] = {t};
  order_.push_back(t);
  const auto& args = bank_->args(t);
  if (args.empty()) return;
  auto k = key(t);
  auto [it, inserted] = table_.emplace(k, t);
  if (!inserted) pending_.emplace_back(t, it->second);
  std::vector<TermId> seen;
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (std::find(seen.begin(), seen.end(), k[i]) != seen.end()) continue;
    seen.push_back(k[i]);
    uses_[k[i]].push_back(t);
  }
}

void CongruenceClosure::add(TermId t) {
  if (registered(t)) return;
  // Iterative post-order so deeply nested terms do not exhaust the stack.
  std::vector<std::pair<TermId, bool>> stack{{t, false}};
  while (!stack.empty()) {
    auto [u, expanded] = stack.back();
    stack.pop_back();
    if (registered(u)) continue;
    if (expanded) {
      register_one(u);
      continue;
    }
    stack.emplace_back(u, true);
    for (auto a : bank_->args(u))
      if (!registered(a)) stack.emplace_back(a, false);
  }
  drain();
}

void CongruenceClosure::merge(TermId a, TermId b) {
  add(a);
  add(b);
  pending_.emplace_back(a, b);
  drain();
}

void CongruenceClosure::drain() {
  while (!pending_.empty()) {
    auto [a, b] = pending_.back();
    pending_.pop_back();
    union_classes(a, b);
  }
}

void CongruenceClosure::union_classes(TermId a, TermId b) {
  TermId ra = find(a);
  TermId rb = find(b);
  if (ra == rb) return;
  if (size_[ra] < size_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  if (bank_->less(rep_[rb], rep_[ra])) rep_[ra] = rep_[rb];
  auto& into = members_[ra];
  into.insert(into.end(), members_[rb].begin(), members_[rb].end());
  members_[rb].clear();
  ++epoch_;
  ++merges_;

  auto moved = std::move(uses_[rb]);
  uses_[rb].clear();
  for (TermId u : moved) {
    auto k = key(u);
    auto it = table_.find(k);
    if (it == table_.end()) {
      table_.emplace(std::move(k), u);
    } else if (find(it->second) != find(u)) {
      pending_.emplace_back(u, it->second);
    }
    uses_[ra].push_back(u);
  }
}

std::optional<TermId> CongruenceClosure::resolve(TermId t) const {
  if (registered(t)) return find(t);
  const auto& args = bank_->args(t);
  if (args.empty()) return std::nullopt;
  SigKey k;
  k.push_back(bank_->sym(t));
  for (auto a : args) {
    auto r = resolve(a);
    if (!r) return std::nullopt;
    k.push_back(*r);
  }
  auto it = table_.find(k);
  if (it == table_.end()) return std::nullopt;
  return find(it->second);
}

std::optional<TermId> CongruenceClosure::lookup(SymId s, const std::vector<TermId>& args) const {
  SigKey k;
  k.push_back(s);
  for (auto a : args) {
    auto r = resolve(a);
    if (!r) return std::nullopt;
    k.push_back(*r);
  }
  if (args.empty()) {
    // Constants are not in the signature table; fall back to the bank.
    auto c = bank_->find(s, {});
    if (c && registered(*c)) return *c;
    return std::nullopt;
  }
  auto it = table_.find(k);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

bool CongruenceClosure::congruent(TermId a, TermId b) const {
  if (a == b) return true;
  auto ra = resolve(a);
  auto rb = resolve(b);
  if (ra && rb) return *ra == *rb;
  if (ra || rb) return false;
  if (bank_->sym(a) != bank_->sym(b)) return false;
  const auto& xa = bank_->args(a);
  const auto& xb = bank_->args(b);
  for (std::size_t i = 0; i < xa.size(); ++i)
    if (!congruent(xa[i], xb[i])) return false;
  return true;
}

std::vector<TermId> CongruenceClosure::roots() const {
  std::vector<TermId> out;
  for (auto t : order_)
    if (parent_[t] == t) out.push_back(t);
  return out;
}

}  // namespace bumg
