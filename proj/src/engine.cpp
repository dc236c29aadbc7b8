#include "bumg/engine.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <unordered_set>

#include "bumg/oracle.hpp"

namespace bumg {

namespace {

using PredId = std::uint32_t;
using Clock = std::chrono::steady_clock;

constexpr PredId kEqPred = 0;  // equality always gets id 0
constexpr std::uint32_t kUnregistered = 0x80000000u;

// Non-owning callable reference; the matchers nest continuations deeply and
// std::function would allocate on every level.
class Cont {
public:
  template <class F>
  Cont(F& f) : obj_(&f), call_([](void* o) { (*static_cast<F*>(o))(); }) {}  // NOLINT
  void operator()() const { call_(obj_); }

private:
  void* obj_;
  void (*call_)(void*);
};

struct Key {
  std::vector<std::uint32_t> words;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = 0xcbf29ce484222325ULL ^ k.words.size();
    for (auto w : k.words) h = (h ^ w) * 0x100000001b3ULL + (h >> 31);
    return h;
  }
};

// Compiled term pattern. Ground subpatterns carry their interned id.
struct PTerm {
  bool is_var = false;
  VarId var = 0;
  SymId sym = 0;
  std::vector<PTerm> args;
  bool ground = false;
  TermId id = kNoTerm;
};

struct PAtom {
  PredId pred = 0;
  std::vector<PTerm> args;
  bool equation() const { return pred == kEqPred; }
};

struct CClause {
  std::size_t index = 0;
  std::vector<PAtom> head;
  std::vector<PAtom> body;  // fact atoms first, equations last
  std::size_t slots = 0;
  // Has an equation whose sides both still contain unbound variables once
  // the fact atoms are matched; such bodies range over all classes.
  bool term_sensitive = false;
};

struct Literal {
  PredId pred = 0;
  std::vector<TermId> args;
};

struct Instance {
  std::vector<Literal> lits;
  std::uint64_t seq = 0;
};

struct FactTable {
  std::vector<std::vector<TermId>> tuples;
  std::unordered_set<Key, KeyHash> keys;
};

// Priority classes of queued instances, highest first.
enum Priority { kEqDisjunction = 0, kDisjunction = 1, kHorn = 2, kPriorities = 3 };

struct Branch {
  explicit Branch(const TermBank* bank) : cc(bank) {}

  CongruenceClosure cc;
  std::vector<FactTable> facts;
  std::deque<Instance> agenda[kPriorities];
  std::unordered_set<Key, KeyHash> agenda_keys;
  std::size_t depth = 0;
  std::uint64_t picks = 0;  // drives the fairness tick; per branch so replays repeat it
  bool closed = false;
  std::uint64_t settled_epoch = 0;
  std::size_t settled_terms = 0;
};

class Engine {
public:
  Engine(const Problem& p, const Strategy& s) : problem_(p), strategy_(s) {}

  SolveResult run();

private:
  // -- setup
  void compile();
  PTerm compile_term(const Term& t);
  PAtom compile_atom(const Atom& a);
  PredId pred_id(const std::string& name) const { return pred_ids_.at(name); }

  // -- terms
  TermId inst(const PTerm& p, const std::vector<TermId>& b);
  bool bound(const PTerm& p, const std::vector<TermId>& b) const;
  std::uint32_t term_key(const Branch& br, TermId t) const;
  Key literal_key(const Branch& br, const Literal& l) const;
  Key fact_key(const Branch& br, const std::vector<TermId>& args) const;

  // -- matching
  void match_term(Branch& br, const PTerm& p, TermId t, std::vector<TermId>& b, Cont k);
  void match_args(Branch& br, const std::vector<PTerm>& ps, std::vector<TermId> ts, std::size_t i,
                  std::vector<TermId>& b, Cont k);
  void match_fact(Branch& br, const PAtom& a, const std::vector<TermId>& tuple, std::vector<TermId>& b, Cont k);
  void match_atom(Branch& br, const PAtom& a, std::vector<TermId>& b, Cont k);
  void join(Branch& br, const CClause& c, std::size_t i, std::size_t skip, std::vector<TermId>& b);
  void evaluate(Branch& br, const CClause& c);
  void trigger(Branch& br, PredId pred, const std::vector<TermId>& tuple);

  // -- branch state
  bool satisfied(const Branch& br, const Literal& l) const;
  bool falsified(const Branch& br, const Literal& l) const;
  void offer(Branch& br, std::vector<Literal> lits);
  void assert_literal(Branch& br, const Literal& l);
  void add_fact(Branch& br, PredId pred, std::vector<TermId> args);
  void settle(Branch& br, bool force);
  void renormalize(Branch& br);
  void close(Branch& br);
  std::optional<Instance> pick(Branch& br);

  // -- output
  std::string show(const Literal& l) const;
  void trace(const std::string& line) const;
  ModelDocument extract(const Branch& br) const;

  const Problem& problem_;
  const Strategy& strategy_;
  TermBank bank_;
  std::vector<std::string> pred_names_;
  std::unordered_map<std::string, PredId> pred_ids_;
  std::optional<PredId> neq_;
  std::optional<PredId> dom_;
  std::vector<CClause> clauses_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> positions_;  // pred -> (clause, body index)
  std::vector<TermId> constants_;
  std::uint64_t seq_ = 0;
  bool replaying_ = false;
  Statistics stats_;
};

// ---------------------------------------------------------------------------
// Setup

PTerm Engine::compile_term(const Term& t) {
  PTerm p;
  if (t.is_var()) {
    p.is_var = true;
    p.var = t.var_id();
    return p;
  }
  p.sym = bank_.declare(t.symbol(), t.arity());
  p.ground = true;
  for (const auto& a : t.args()) {
    p.args.push_back(compile_term(a));
    p.ground = p.ground && p.args.back().ground;
  }
  if (p.ground) p.id = bank_.intern(t);
  return p;
}

PAtom Engine::compile_atom(const Atom& a) {
  PAtom out;
  out.pred = pred_id(a.predicate);
  for (const auto& t : a.args) out.args.push_back(compile_term(t));
  return out;
}

void Engine::compile() {
  const Signature& sig = problem_.signature;
  // Symbol precedence: input order, generated constants last.
  for (const auto& [f, n] : sig.functions.entries()) {
    auto it = sig.specials.find(f);
    if (it == sig.specials.end() || it->second.kind != SpecialKind::FreshConstant) bank_.declare(f, n);
  }
  for (const auto& [f, n] : sig.functions.entries()) bank_.declare(f, n);

  pred_names_.push_back(kEquality);
  pred_ids_.emplace(kEquality, kEqPred);
  auto add_pred = [&](const std::string& name) {
    if (pred_ids_.count(name)) return;
    pred_ids_.emplace(name, static_cast<PredId>(pred_names_.size()));
    pred_names_.push_back(name);
  };
  for (const auto& [p, n] : sig.predicates.entries()) add_pred(p);
  for (const auto& c : problem_.clauses) {
    for (const auto& a : c.head()) add_pred(a.predicate);
    for (const auto& a : c.body()) add_pred(a.predicate);
  }
  if (pred_ids_.count(kDisequality)) neq_ = pred_id(kDisequality);
  if (pred_ids_.count(kDomain)) dom_ = pred_id(kDomain);
  positions_.resize(pred_names_.size());

  for (std::size_t i = 0; i < problem_.clauses.size(); ++i) {
    const Clause& c = problem_.clauses[i];
    if (!is_range_restricted(c))
      throw NotRangeRestricted("clause " + std::to_string(i + 1) + " is not range-restricted: " + to_string(c));
    CClause cc;
    cc.index = i;
    cc.slots = next_free_var(c);
    for (const auto& a : c.head()) cc.head.push_back(compile_atom(a));
    std::vector<Atom> eqs;
    std::set<VarId> seen;
    for (const auto& a : c.body()) {
      if (a.is_equation()) {
        eqs.push_back(a);
        continue;
      }
      cc.body.push_back(compile_atom(a));
      for (auto v : vars(a)) seen.insert(v);
    }
    for (const auto& a : eqs) {
      auto unbound = [&](const Term& t) {
        for (auto v : vars(t))
          if (!seen.count(v)) return true;
        return false;
      };
      if (unbound(a.args[0]) && unbound(a.args[1])) cc.term_sensitive = true;
      for (auto v : vars(a)) seen.insert(v);
      cc.body.push_back(compile_atom(a));
    }
    for (std::size_t j = 0; j < cc.body.size(); ++j)
      if (!cc.body[j].equation()) positions_[cc.body[j].pred].emplace_back(clauses_.size(), j);
    clauses_.push_back(std::move(cc));
  }

  for (const auto& [f, n] : sig.functions.entries())
    if (n == 0) constants_.push_back(bank_.app(*bank_.symbol(f), {}));
}

// ---------------------------------------------------------------------------
// Terms and keys

bool Engine::bound(const PTerm& p, const std::vector<TermId>& b) const {
  if (p.ground) return true;
  if (p.is_var) return b[p.var] != kNoTerm;
  for (const auto& a : p.args)
    if (!bound(a, b)) return false;
  return true;
}

TermId Engine::inst(const PTerm& p, const std::vector<TermId>& b) {
  if (p.ground) return p.id;
  if (p.is_var) return b[p.var];
  std::vector<TermId> args;
  args.reserve(p.args.size());
  for (const auto& a : p.args) args.push_back(inst(a, b));
  return bank_.app(p.sym, std::move(args));
}

std::uint32_t Engine::term_key(const Branch& br, TermId t) const {
  auto r = br.cc.resolve(t);
  return r ? *r : (t | kUnregistered);
}

Key Engine::fact_key(const Branch& br, const std::vector<TermId>& args) const {
  Key k;
  k.words.reserve(args.size());
  for (auto t : args) k.words.push_back(term_key(br, t));
  return k;
}

Key Engine::literal_key(const Branch& br, const Literal& l) const {
  Key k;
  k.words.push_back(l.pred);
  for (auto t : l.args) k.words.push_back(term_key(br, t));
  if (l.pred == kEqPred && k.words[1] > k.words[2]) std::swap(k.words[1], k.words[2]);
  return k;
}

// ---------------------------------------------------------------------------
// Matching modulo the congruence closure

void Engine::match_args(Branch& br, const std::vector<PTerm>& ps, std::vector<TermId> ts, std::size_t i,
                        std::vector<TermId>& b, Cont k) {
  if (br.closed) return;
  if (i == ps.size()) {
    k();
    return;
  }
  auto next = [&] { match_args(br, ps, ts, i + 1, b, k); };
  match_term(br, ps[i], ts[i], b, Cont(next));
}

void Engine::match_term(Branch& br, const PTerm& p, TermId t, std::vector<TermId>& b, Cont k) {
  if (br.closed) return;
  if (p.is_var) {
    TermId& slot = b[p.var];
    if (slot != kNoTerm) {
      if (br.cc.congruent(slot, t)) k();
      return;
    }
    slot = t;
    k();
    b[p.var] = kNoTerm;
    return;
  }
  if (bound(p, b)) {
    if (br.cc.congruent(inst(p, b), t)) k();
    return;
  }
  auto root = br.cc.resolve(t);
  if (!root) {
    // Not known to the closure: only its own structure can match.
    if (bank_.sym(t) == p.sym) match_args(br, p.args, bank_.args(t), 0, b, k);
    return;
  }
  // E-matching: every member with the right symbol, once per argument classes.
  std::vector<TermId> members = br.cc.members(*root);
  std::unordered_set<Key, KeyHash> tried;
  for (TermId m : members) {
    if (br.closed) return;
    if (bank_.sym(m) != p.sym) continue;
    std::vector<TermId> args = bank_.args(m);
    if (!tried.insert(fact_key(br, args)).second) continue;
    match_args(br, p.args, std::move(args), 0, b, k);
  }
}

void Engine::match_fact(Branch& br, const PAtom& a, const std::vector<TermId>& tuple, std::vector<TermId>& b,
                        Cont k) {
  match_args(br, a.args, tuple, 0, b, k);
}

void Engine::match_atom(Branch& br, const PAtom& a, std::vector<TermId>& b, Cont k) {
  if (br.closed) return;
  if (a.equation()) {
    const PTerm& s = a.args[0];
    const PTerm& t = a.args[1];
    bool sb = bound(s, b);
    bool tb = bound(t, b);
    if (sb && tb) {
      if (br.cc.congruent(inst(s, b), inst(t, b))) k();
    } else if (sb) {
      match_term(br, t, inst(s, b), b, k);
    } else if (tb) {
      match_term(br, s, inst(t, b), b, k);
    } else {
      for (TermId r : br.cc.roots()) {
        auto second = [&] { match_term(br, t, r, b, k); };
        match_term(br, s, r, b, Cont(second));
        if (br.closed) return;
      }
    }
    return;
  }
  const FactTable& table = br.facts[a.pred];
  if (table.tuples.empty()) return;
  bool all_bound = std::all_of(a.args.begin(), a.args.end(), [&](const PTerm& p) { return bound(p, b); });
  if (all_bound) {
    std::vector<TermId> args;
    for (const auto& p : a.args) args.push_back(inst(p, b));
    if (table.keys.count(fact_key(br, args))) {
      k();
      return;
    }
    // Keys may lag behind a merge that has not been settled yet.
    if (br.settled_epoch == br.cc.epoch()) return;
  }
  for (std::size_t i = 0; i < table.tuples.size(); ++i) {
    if (br.closed) return;
    std::vector<TermId> tuple = table.tuples[i];
    match_fact(br, a, tuple, b, k);
  }
}

void Engine::join(Branch& br, const CClause& c, std::size_t i, std::size_t skip, std::vector<TermId>& b) {
  if (br.closed) return;
  if (i == skip) ++i;
  if (i >= c.body.size()) {
    std::vector<Literal> lits;
    for (const auto& h : c.head) {
      Literal l{h.pred, {}};
      for (const auto& t : h.args) l.args.push_back(inst(t, b));
      lits.push_back(std::move(l));
    }
    offer(br, std::move(lits));
    return;
  }
  auto next = [&] { join(br, c, i + 1, skip, b); };
  match_atom(br, c.body[i], b, Cont(next));
}

void Engine::evaluate(Branch& br, const CClause& c) {
  std::vector<TermId> b(c.slots, kNoTerm);
  join(br, c, 0, static_cast<std::size_t>(-1), b);
}

void Engine::trigger(Branch& br, PredId pred, const std::vector<TermId>& tuple) {
  for (const auto& [ci, pos] : positions_[pred]) {
    if (br.closed) return;
    const CClause& c = clauses_[ci];
    std::vector<TermId> b(c.slots, kNoTerm);
    auto rest = [&] { join(br, c, 0, pos, b); };
    match_fact(br, c.body[pos], tuple, b, Cont(rest));
  }
}

// ---------------------------------------------------------------------------
// Branch state

bool Engine::satisfied(const Branch& br, const Literal& l) const {
  if (l.pred == kEqPred) return br.cc.congruent(l.args[0], l.args[1]);
  Key k = fact_key(br, l.args);
  for (auto w : k.words)
    if (w & kUnregistered) return false;
  return br.facts[l.pred].keys.count(k) != 0;
}

bool Engine::falsified(const Branch& br, const Literal& l) const {
  if (l.pred == kEqPred) return neq_ && satisfied(br, Literal{*neq_, l.args});
  if (neq_ && l.pred == *neq_) return br.cc.congruent(l.args[0], l.args[1]);
  return false;
}

void Engine::offer(Branch& br, std::vector<Literal> lits) {
  std::vector<Literal> open;
  for (auto& l : lits) {
    if (satisfied(br, l)) return;
    if (!falsified(br, l)) open.push_back(std::move(l));
  }
  if (open.empty()) {
    close(br);
    return;
  }
  std::vector<Key> keys;
  for (const auto& l : open) keys.push_back(literal_key(br, l));
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.words < b.words; });
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  Key key;
  for (const auto& k : keys) {
    key.words.insert(key.words.end(), k.words.begin(), k.words.end());
    key.words.push_back(0xffffffffu);
  }
  if (!br.agenda_keys.insert(std::move(key)).second) return;
  Priority prio = kHorn;
  if (keys.size() > 1) {
    prio = kDisjunction;
    for (const auto& l : open)
      if (l.pred == kEqPred) prio = kEqDisjunction;
  }
  br.agenda[prio].push_back({std::move(open), seq_++});
}

void Engine::close(Branch& br) {
  if (br.closed) return;
  br.closed = true;
  if (strategy_.trace) trace("EVENT kind=close depth=" + std::to_string(br.depth));
}

void Engine::add_fact(Branch& br, PredId pred, std::vector<TermId> args) {
  for (auto t : args) br.cc.add(t);
  for (auto& t : args) t = br.cc.rep(t);
  FactTable& table = br.facts[pred];
  if (!table.keys.insert(fact_key(br, args)).second) return;
  table.tuples.push_back(args);
  if (neq_ && pred == *neq_) {
    if (br.cc.congruent(args[0], args[1])) {
      close(br);
      return;
    }
    std::vector<TermId> flipped{args[1], args[0]};
    if (table.keys.insert(fact_key(br, flipped)).second) {
      table.tuples.push_back(flipped);
      trigger(br, pred, args);
      trigger(br, pred, flipped);
      return;
    }
  }
  trigger(br, pred, args);
}

void Engine::assert_literal(Branch& br, const Literal& l) {
  std::size_t before = br.cc.merges();
  if (strategy_.trace) {
    std::string d = std::to_string(br.depth);
    if (l.pred == kEqPred || (neq_ && l.pred == *neq_)) {
      trace(std::string("EVENT kind=") + (l.pred == kEqPred ? "assert-eq" : "assert-neq") + " depth=" + d +
            " lhs=" + bank_.to_string(l.args[0]) + " rhs=" + bank_.to_string(l.args[1]));
    } else {
      trace("EVENT kind=derive depth=" + d + " fact=" + show(l));
    }
  }
  if (l.pred == kEqPred) br.cc.merge(l.args[0], l.args[1]);
  else add_fact(br, l.pred, l.args);
  stats_.merges += br.cc.merges() - before;
}

void Engine::renormalize(Branch& br) {
  for (PredId p = 0; p < br.facts.size(); ++p) {
    FactTable& table = br.facts[p];
    if (table.tuples.empty()) continue;
    FactTable fresh;
    for (auto& tuple : table.tuples) {
      for (auto& t : tuple) t = br.cc.rep(t);
      if (!fresh.keys.insert(fact_key(br, tuple)).second) continue;
      fresh.tuples.push_back(std::move(tuple));
    }
    table = std::move(fresh);
    if (neq_ && p == *neq_) {
      for (const auto& tuple : table.tuples)
        if (br.cc.congruent(tuple[0], tuple[1])) {
          close(br);
          return;
        }
    }
  }
  // Drop queued instances that became satisfied or duplicate.
  br.agenda_keys.clear();
  for (auto& q : br.agenda) {
    std::deque<Instance> kept;
    for (auto& inst : q) {
      std::vector<Key> keys;
      bool done = false;
      for (const auto& l : inst.lits) {
        if (satisfied(br, l)) done = true;
        keys.push_back(literal_key(br, l));
      }
      if (done) continue;
      std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.words < b.words; });
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      Key key;
      for (const auto& k : keys) {
        key.words.insert(key.words.end(), k.words.begin(), k.words.end());
        key.words.push_back(0xffffffffu);
      }
      if (!br.agenda_keys.insert(std::move(key)).second) continue;
      kept.push_back(std::move(inst));
    }
    q = std::move(kept);
  }
}

// Brings the branch back to a consistent state after the closure changed:
// facts renormalized, and every clause re-evaluated if classes merged or the
// term-sensitive ones if only new terms appeared.
void Engine::settle(Branch& br, bool force) {
  while (!br.closed) {
    bool merged = br.cc.epoch() != br.settled_epoch;
    bool grown = br.cc.terms().size() != br.settled_terms;
    if (!force && !merged && !grown) return;
    if (merged) renormalize(br);
    br.settled_epoch = br.cc.epoch();
    br.settled_terms = br.cc.terms().size();
    if (br.closed) return;
    for (const auto& c : clauses_) {
      if (force || merged || c.term_sensitive) evaluate(br, c);
      if (br.closed) return;
    }
    force = false;
  }
}

std::optional<Instance> Engine::pick(Branch& br) {
  ++br.picks;
  int from = -1;
  if (strategy_.fairness_period && br.picks % strategy_.fairness_period == 0) {
    std::uint64_t best = ~std::uint64_t{0};
    for (int i = 0; i < kPriorities; ++i)
      if (!br.agenda[i].empty() && br.agenda[i].front().seq < best) {
        best = br.agenda[i].front().seq;
        from = i;
      }
  } else {
    for (int i = 0; i < kPriorities && from < 0; ++i)
      if (!br.agenda[i].empty()) from = i;
  }
  if (from < 0) return std::nullopt;
  Instance inst = std::move(br.agenda[from].front());
  br.agenda[from].pop_front();
  return inst;
}

// ---------------------------------------------------------------------------
// Output

std::string Engine::show(const Literal& l) const {
  std::vector<Term> args;
  for (auto t : l.args) args.push_back(bank_.to_term(t));
  return to_string(Atom(pred_names_[l.pred], std::move(args)));
}

void Engine::trace(const std::string& line) const {
  if (strategy_.trace && !replaying_) *strategy_.trace << line << '\n';
}

ModelDocument Engine::extract(const Branch& br) const {
  ModelDocument doc;
  const CongruenceClosure& cc = br.cc;
  std::vector<TermId> roots;
  if (dom_) {
    std::unordered_set<TermId> seen;
    for (const auto& tuple : br.facts[*dom_].tuples) {
      TermId r = cc.find(tuple[0]);
      if (seen.insert(r).second) roots.push_back(r);
    }
  } else {
    roots = cc.roots();
  }
  std::unordered_map<TermId, std::size_t> index;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    index.emplace(roots[i], i);
    doc.domain.push_back(bank_.to_term(cc.rep(roots[i])));
    std::vector<TermId> members = cc.members(roots[i]);
    std::sort(members.begin(), members.end(), [&](TermId a, TermId b) { return bank_.less(a, b); });
    std::vector<Term> terms;
    for (auto m : members) terms.push_back(bank_.to_term(m));
    doc.classes.emplace(doc.domain.back(), std::move(terms));
  }
  if (roots.empty()) return doc;

  std::size_t fallback = 0;
  if (const auto& seed = problem_.signature.domain_seed) {
    if (auto s = bank_.symbol(*seed))
      if (auto c = cc.lookup(*s, {}))
        if (auto it = index.find(cc.find(*c)); it != index.end()) fallback = it->second;
  }

  const std::size_t k = roots.size();
  for (const auto& [f, n] : problem_.signature.functions.entries()) {
    SymId s = *bank_.symbol(f);
    auto& table = doc.functions[f];
    doc.function_arity[f] = n;
    std::vector<std::size_t> tuple(n, 0);
    while (true) {
      std::vector<TermId> args;
      for (auto i : tuple) args.push_back(roots[i]);
      std::size_t value = fallback;
      if (auto t = cc.lookup(s, args))
        if (auto it = index.find(cc.find(*t)); it != index.end()) value = it->second;
      table[tuple] = value;
      std::size_t pos = n;
      while (pos > 0 && ++tuple[pos - 1] == k) tuple[--pos] = 0;
      if (pos == 0) break;
    }
  }

  const Signature& sig = problem_.signature;
  for (PredId p = 1; p < pred_names_.size(); ++p) {
    const std::string& name = pred_names_[p];
    bool special = sig.is_special(name) || is_reserved_name(name);
    auto& target = special ? doc.special_predicates[name] : doc.predicates[name];
    for (const auto& tuple : br.facts[p].tuples) {
      std::vector<std::size_t> idx;
      for (auto t : tuple) {
        auto it = index.find(cc.find(t));
        if (it == index.end()) break;
        idx.push_back(it->second);
      }
      if (idx.size() == tuple.size()) target.insert(std::move(idx));
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Search

SolveResult Engine::run() {
  const auto start = Clock::now();
  SolveResult res;
  auto finish = [&](SzsStatus st, std::string reason) {
    res.status = st;
    res.reason = std::move(reason);
    stats_.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    res.stats = stats_;
    return res;
  };

  compile();

  // One entry per split on the current branch. A level keeps the branch as
  // it was just before the split when the snapshot budget allows; otherwise
  // it is rebuilt by replaying the recorded choices from an earlier level.
  struct Level {
    std::shared_ptr<const Branch> before;
    std::size_t units = 0;
    std::vector<Literal> open;
    std::size_t active = 0;
  };
  std::vector<Level> levels;
  std::size_t snapshot_units = 0;
  auto units_of = [](const Branch& b) {
    std::size_t n = b.cc.terms().size();
    for (const auto& f : b.facts) n += f.tuples.size();
    return n;
  };
  auto descend = [&](Branch& b, const Level& lv) {
    ++b.depth;
    assert_literal(b, lv.open[lv.active]);
    settle(b, false);
  };

  Branch br(&bank_);
  br.facts.resize(pred_names_.size());
  for (auto c : constants_) br.cc.add(c);
  stats_.branches = 1;
  settle(br, true);

  while (true) {
    replaying_ = br.depth < levels.size();
    if (br.closed) {
      while (!levels.empty() && levels.back().active + 1 >= levels.back().open.size()) {
        snapshot_units -= levels.back().units;
        levels.pop_back();
      }
      if (levels.empty()) return finish(SzsStatus::Unsatisfiable, {});
      ++levels.back().active;
      std::size_t from = levels.size() - 1;
      while (!levels[from].before) --from;  // level 0 always has a snapshot
      br = *levels[from].before;
      ++stats_.branches;
      replaying_ = from + 1 < levels.size();
      descend(br, levels[from]);
      continue;
    }
    if (Clock::now() - start > strategy_.timeout) return finish(SzsStatus::Timeout, "time limit reached");

    auto next = pick(br);
    if (!next) {
      if (strategy_.trace)
        trace("EVENT kind=complete depth=" + std::to_string(br.depth) +
              " domain=" + std::to_string(dom_ ? br.facts[*dom_].tuples.size() : br.cc.roots().size()));
      ModelDocument model = extract(br);
      if (strategy_.verify_model) {
        if (auto bad = check_model(model, problem_.clauses))
          return finish(SzsStatus::GaveUp, "extracted model fails verification: " + *bad);
      }
      res.model = std::move(model);
      return finish(SzsStatus::Satisfiable, {});
    }

    std::vector<Literal> open;
    bool done = false;
    for (auto& l : next->lits) {
      if (satisfied(br, l)) {
        done = true;
        break;
      }
      if (!falsified(br, l)) open.push_back(std::move(l));
    }
    if (done) continue;
    if (replaying_) {
      ++stats_.replays;
    } else {
      if (stats_.rules >= strategy_.max_rules)
        return finish(SzsStatus::GaveUp, "rule limit of " + std::to_string(strategy_.max_rules) + " reached");
      ++stats_.rules;
    }
    if (open.empty()) {
      close(br);
      continue;
    }
    if (open.size() == 1) {
      assert_literal(br, open.front());
      settle(br, false);
      continue;
    }

    if (replaying_) {
      // The branch is deterministic, so this is the split recorded at this
      // depth; follow the choice made there.
      if (open.size() != levels[br.depth].open.size()) throw Error("replay diverged from the recorded split");
      descend(br, levels[br.depth]);
      continue;
    }
    if (br.depth + 1 > strategy_.max_depth)
      return finish(SzsStatus::GaveUp, "depth limit of " + std::to_string(strategy_.max_depth) + " reached");
    auto eq = std::find_if(open.begin(), open.end(), [](const Literal& l) { return l.pred == kEqPred; });
    if (eq != open.end()) std::rotate(open.begin(), eq, eq + 1);
    if (strategy_.trace) {
      std::string line = "EVENT kind=split depth=" + std::to_string(br.depth) + " disjunction=";
      for (std::size_t i = 0; i < open.size(); ++i) line += (i ? " | " : "") + show(open[i]);
      trace(line);
    }
    ++stats_.splits;
    Level lv;
    lv.open = std::move(open);
    std::size_t units = units_of(br);
    if (levels.empty() || snapshot_units + units <= strategy_.snapshot_budget) {
      lv.before = std::make_shared<const Branch>(br);
      lv.units = units;
      snapshot_units += units;
    }
    levels.push_back(std::move(lv));
    descend(br, levels.back());
  }
}

}  // namespace

SolveResult saturate(const Problem& p, const Strategy& strategy) {
  Engine engine(p, strategy);
  return engine.run();
}

std::optional<std::string> check_model(const ModelDocument& m, const std::vector<Clause>& clauses) {
  oracle::FiniteInterpretation fi;
  const std::size_t k = m.domain.size();
  fi.size = k;
  for (const auto& [f, table] : m.functions) {
    auto& ft = fi.functions[f];
    ft.arity = m.function_arity.count(f) ? m.function_arity.at(f) : (table.empty() ? 0 : table.begin()->first.size());
    std::size_t cells = 1;
    for (std::size_t i = 0; i < ft.arity; ++i) cells *= k;
    ft.values.assign(cells, -1);
    for (const auto& [args, v] : table) ft.values[fi.cell(args)] = static_cast<int>(v);
  }
  for (const auto& [p, tuples] : m.predicates)
    for (const auto& t : tuples) fi.set_predicate(p, t, true);

  // Generated predicates get their intended reading over the model rather
  // than the extensions derived on the branch: dom is the whole domain, sub
  // is unconstrained, myequal is identity, neq is distinctness and NOT_P the
  // complement of P. This extends a model of the input to the transformed set.
  Signature sig = signature_of(clauses);
  for (const auto& [p, n] : sig.predicates.entries()) {
    if (!is_reserved_name(p)) continue;
    auto& table = fi.predicates[p];
    table.arity = n;
    std::size_t cells = 1;
    for (std::size_t i = 0; i < n; ++i) cells *= k;
    table.values.assign(cells, 0);
    const oracle::PredicateTable* base = nullptr;
    if (p.rfind(kShiftPrefix, 0) == 0) {
      auto it = fi.predicates.find(p.substr(std::string(kShiftPrefix).size()));
      if (it != fi.predicates.end()) base = &it->second;
    }
    for (std::size_t c = 0; c < cells; ++c) {
      bool v = true;
      if (p == kMyEqual || p == kDisequality) {
        bool same = n == 2 && c / k == c % k;
        v = p == kMyEqual ? same : !same;
      } else if (p.rfind(kShiftPrefix, 0) == 0) {
        v = !(base && base->values[c] == 1);
      }
      table.values[c] = v ? 1 : 0;
    }
  }
  if (auto cx = oracle::evaluate(clauses, fi)) return cx->describe();
  return std::nullopt;
}

}  // namespace bumg
