#include "bumg/transform.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace bumg {

namespace {

Term var(VarId v) { return Term::var(v); }

std::vector<Term> var_args(std::size_t n, VarId first = 0) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(var(first + static_cast<VarId>(i)));
  return out;
}

Atom dom(Term t) { return Atom(kDomain, {std::move(t)}); }

void record(TransformReport* report, const std::string& step, std::size_t added, std::size_t rewritten = 0) {
  if (!report) return;
  for (auto& s : report->steps) {
    if (s.step == step) {
      s.added += added;
      s.rewritten += rewritten;
      return;
    }
  }
  report->steps.push_back({step, added, rewritten});
}

// Accumulates an output clause set. Generated clauses are dropped when a
// variant (modulo renaming) is already present; rewritten input clauses are
// always kept so clause counts stay aligned with the input.
class Output {
public:
  explicit Output(const Problem& base) : problem_{{}, base.signature, base.name} {}

  void keep(Clause c) {
    seen_.insert(to_string(canonical(c)));
    problem_.signature.add(c);
    problem_.clauses.push_back(std::move(c));
  }

  bool generate(Clause c) {
    auto key = to_string(canonical(c));
    if (!seen_.insert(key).second) return false;
    problem_.signature.add(c);
    problem_.clauses.push_back(std::move(c));
    return true;
  }

  Signature& signature() { return problem_.signature; }
  Problem take() { return std::move(problem_); }

private:
  Problem problem_;
  std::unordered_set<std::string> seen_;
};

void ensure_special(Signature& sig, const std::string& name, std::size_t arity, SpecialSymbol tag) {
  if (sig.is_special(name)) return;
  sig.add_special_predicate(name, arity, std::move(tag));
}

void ensure_equality(Signature& sig) {
  if (!sig.predicates.add(kEquality, 2)) throw Error("equality used with arity other than 2");
}

void ensure_disequality(Signature& sig) {
  ensure_equality(sig);
  ensure_special(sig, kDisequality, 2, {SpecialKind::Disequality, kEquality});
}

// Step 1 of both range restrictions. Returns the seed constant.
std::string seed_constant(Signature& sig, ConstantPolicy policy, TransformReport* report) {
  auto consts = sig.constants();
  if (policy == ConstantPolicy::ReuseFirst && !consts.empty()) return consts.front();
  std::string c = sig.fresh_constant_name("c");
  sig.functions.add(c, 0);
  sig.specials.emplace(c, SpecialSymbol{SpecialKind::FreshConstant, {}});
  if (report) report->fresh_symbols.push_back(c);
  return c;
}

std::size_t text_size(const Problem& p) { return print_clauses(p).size(); }

}  // namespace

// ---------------------------------------------------------------------------
// PipelineConfig

void PipelineConfig::validate() const {
  if (blocking != Blocking::None && rr == RangeRestriction::None)
    throw ConfigError("blocking requires a range-restricting transformation");
}

std::string PipelineConfig::label() const {
  std::vector<std::string> parts;
  if (shift) parts.push_back("sh");
  if (rr == RangeRestriction::Classical) parts.push_back("crr");
  if (rr == RangeRestriction::New) parts.push_back("rr");
  switch (blocking) {
    case Blocking::None: break;
    case Blocking::SubtermDomain: parts.push_back("blsd"); break;
    case Blocking::SubtermPredicate: parts.push_back("blsp"); break;
    case Blocking::UnrestrictedDomain: parts.push_back("blud"); break;
    case Blocking::UnrestrictedPredicate: parts.push_back("blup"); break;
  }
  if (parts.empty()) return "none";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += "." + parts[i];
  return out;
}

PipelineConfig PipelineConfig::from_label(const std::string& label) {
  PipelineConfig cfg;
  cfg.rr = RangeRestriction::None;
  if (label == "none") return cfg;
  std::stringstream in(label);
  std::string part;
  while (std::getline(in, part, '.')) {
    if (part == "sh") cfg.shift = true;
    else if (part == "rr") cfg.rr = RangeRestriction::New;
    else if (part == "crr") cfg.rr = RangeRestriction::Classical;
    else if (part == "blsd") cfg.blocking = Blocking::SubtermDomain;
    else if (part == "blsp") cfg.blocking = Blocking::SubtermPredicate;
    else if (part == "blud") cfg.blocking = Blocking::UnrestrictedDomain;
    else if (part == "blup") cfg.blocking = Blocking::UnrestrictedPredicate;
    else throw ConfigError("unknown pipeline component '" + part + "' in '" + label + "'");
  }
  cfg.validate();
  return cfg;
}

std::vector<PipelineConfig> PipelineConfig::all() {
  std::vector<PipelineConfig> out;
  for (auto r : {RangeRestriction::Classical, RangeRestriction::New})
    for (bool s : {false, true})
      for (auto b : {Blocking::None, Blocking::SubtermDomain, Blocking::SubtermPredicate,
                     Blocking::UnrestrictedDomain, Blocking::UnrestrictedPredicate}) {
        PipelineConfig cfg;
        cfg.rr = r;
        cfg.shift = s;
        cfg.blocking = b;
        out.push_back(cfg);
      }
  return out;
}

// ---------------------------------------------------------------------------
// TransformReport

std::size_t TransformReport::added(const std::string& step) const {
  for (const auto& s : steps)
    if (s.step == step) return s.added;
  return 0;
}

std::size_t TransformReport::rewritten(const std::string& step) const {
  for (const auto& s : steps)
    if (s.step == step) return s.rewritten;
  return 0;
}

std::size_t TransformReport::total_added() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.added;
  return n;
}

std::string TransformReport::csv_header() {
  return "input_clauses,output_clauses,input_bytes,output_bytes,pf_rewritten,bs_rewritten,bs_added,"
         "rr_step1,rr_step2,rr_myequal,rr_restricted,rr_step4,rr_step5,crr_step3,blocking_added";
}

std::string TransformReport::csv_row() const {
  std::ostringstream out;
  out << input_clauses << ',' << output_clauses << ',' << input_bytes << ',' << output_bytes << ','
      << rewritten("pf") << ',' << rewritten("bs") << ',' << added("bs") << ',' << added("step1") << ','
      << added("step2") << ',' << added("myequal") << ',' << rewritten("restrict") << ',' << added("step4")
      << ',' << added("step5") << ',' << added("crr_step3") << ',' << added("blocking");
  return out.str();
}

// ---------------------------------------------------------------------------
// Range restriction

Clause range_restrict(const Clause& c) {
  auto bv = body_vars(c);
  std::vector<Atom> body = c.body();
  std::vector<VarId> seen;
  for (VarId v : vars_in_order(c)) {
    if (bv.count(v) || std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
    seen.push_back(v);
    body.push_back(dom(var(v)));
  }
  return Clause(c.head(), std::move(body), c.label());
}

namespace {

Clause restrict_counted(const Clause& c, std::size_t& restricted) {
  if (is_range_restricted(c)) return c;
  ++restricted;
  return range_restrict(c);
}

}  // namespace

Problem crr(const Problem& m, ConstantPolicy policy, TransformReport* report) {
  Output out(m);
  Signature& sig = out.signature();
  ensure_special(sig, kDomain, 1, {SpecialKind::Domain, {}});
  std::string c = seed_constant(sig, policy, report);
  sig.domain_seed = c;

  std::size_t restricted = 0;
  std::size_t step1 = out.generate(Clause({dom(Term::app(c))}, {})) ? 1 : 0;
  for (const auto& cl : m.clauses) out.keep(restrict_counted(cl, restricted));

  std::size_t step3 = 0;
  for (const auto& [f, n] : m.signature.functions.entries()) {
    std::vector<Atom> body;
    for (std::size_t i = 0; i < n; ++i) body.push_back(dom(var(static_cast<VarId>(i))));
    if (out.generate(Clause({dom(Term::app(f, var_args(n)))}, std::move(body)))) ++step3;
  }
  record(report, "step1", step1);
  record(report, "restrict", 0, restricted);
  record(report, "crr_step3", step3);
  return out.take();
}

Problem myequal_rewrite(const Problem& m, TransformReport* report) {
  Output out(m);
  std::size_t rewritten = 0;
  for (const auto& cl : m.clauses) {
    bool changed = false;
    std::vector<Atom> head;
    for (const auto& a : cl.head()) {
      if (a.is_equation()) {
        head.emplace_back(kMyEqual, a.args);
        changed = true;
      } else {
        head.push_back(a);
      }
    }
    if (changed) ++rewritten;
    out.keep(changed ? Clause(std::move(head), cl.body(), cl.label()) : cl);
  }
  std::size_t added = 0;
  if (rewritten > 0) {
    Signature& sig = out.signature();
    ensure_special(sig, kDomain, 1, {SpecialKind::Domain, {}});
    ensure_special(sig, kMyEqual, 2, {SpecialKind::MyEqual, kEquality});
    ensure_equality(sig);
    Atom me(kMyEqual, {var(0), var(1)});
    added += out.generate(Clause({Atom::equation(var(0), var(1))}, {me}));
    added += out.generate(Clause({dom(var(0))}, {me}));
    added += out.generate(Clause({dom(var(1))}, {me}));
  }
  record(report, "myequal", added, rewritten);
  return out.take();
}

Problem rr(const Problem& m, ConstantPolicy policy, TransformReport* report) {
  Output out(m);
  Signature& sig = out.signature();
  ensure_special(sig, kDomain, 1, {SpecialKind::Domain, {}});
  std::string c = seed_constant(sig, policy, report);
  sig.domain_seed = c;

  std::size_t restricted = 0;
  std::size_t step1 = out.generate(Clause({dom(Term::app(c))}, {})) ? 1 : 0;

  // Positive equations become myequal atoms before anything else sees them.
  TransformReport me_report;
  Problem rewritten = myequal_rewrite(m, &me_report);
  std::size_t n_input = m.clauses.size();
  for (std::size_t i = 0; i < n_input; ++i) out.keep(restrict_counted(rewritten.clauses[i], restricted));

  // Step 2: one dom clause per non-variable top-level body term.
  std::size_t step2 = 0;
  for (const auto& cl : m.clauses) {
    for (const auto& b : cl.body()) {
      VarId fresh = next_free_var(cl);
      Abstraction abs = term_abstraction(b, fresh);
      for (const auto& [x, t] : abs.alpha) {
        Clause gen({dom(t)}, {abs.atom});
        if (!is_range_restricted(gen)) {
          ++restricted;
          gen = range_restrict(gen);
        }
        if (out.generate(std::move(gen))) ++step2;
      }
    }
  }

  // myequal definitions, as produced by the rewrite.
  std::size_t me_added = 0;
  for (std::size_t i = n_input; i < rewritten.clauses.size(); ++i) me_added += out.generate(rewritten.clauses[i]);
  if (me_report.rewritten("myequal") > 0) ensure_special(sig, kMyEqual, 2, {SpecialKind::MyEqual, kEquality});

  // Step 4: every predicate of the input except equality and the generated
  // dom/sub/myequal (whose dom clauses came with the rewrite). Shifted
  // predicates count as input here: they carry deep terms into the domain.
  std::size_t step4 = 0;
  for (const auto& [p, n] : m.signature.predicates.entries()) {
    if (p == kEquality || p == kDomain || p == kSubterm || p == kMyEqual) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.generate(Clause({dom(var(static_cast<VarId>(i)))}, {Atom(p, var_args(n))}))) ++step4;
    }
  }

  // Step 5: subterm closure of the domain.
  std::size_t step5 = 0;
  for (const auto& [f, n] : m.signature.functions.entries()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (out.generate(Clause({dom(var(static_cast<VarId>(i)))}, {dom(Term::app(f, var_args(n)))}))) ++step5;
    }
  }

  record(report, "step1", step1);
  record(report, "myequal", me_added, me_report.rewritten("myequal"));
  record(report, "step2", step2);
  record(report, "restrict", 0, restricted);
  record(report, "step4", step4);
  record(report, "step5", step5);
  return out.take();
}

std::size_t rr_clause_bound(const Problem& m) {
  std::size_t bound = m.clauses.size() + 4;
  for (const auto& cl : m.clauses)
    for (const auto& b : cl.body())
      for (const auto& t : b.args) bound += !t.is_var();
  for (const auto& [p, n] : m.signature.predicates.entries())
    if (p != kEquality) bound += n;
  for (const auto& [f, n] : m.signature.functions.entries()) bound += n;
  return bound;
}

// ---------------------------------------------------------------------------
// Shifting

Problem bs(const Problem& m, TransformReport* report) {
  Output out(m);
  std::vector<std::pair<std::string, std::size_t>> shifted;
  std::size_t rewritten = 0;
  for (const auto& cl : m.clauses) {
    std::vector<Atom> head = cl.head();
    std::vector<Atom> body;
    bool changed = false;
    for (const auto& b : cl.body()) {
      if (!has_proper_functional_term(b)) {
        body.push_back(b);
        continue;
      }
      changed = true;
      head.emplace_back(shifted_name(b.predicate), b.args);
      std::pair<std::string, std::size_t> key{b.predicate, b.args.size()};
      if (std::find(shifted.begin(), shifted.end(), key) == shifted.end()) shifted.push_back(key);
    }
    if (changed) ++rewritten;
    out.keep(changed ? Clause(std::move(head), std::move(body), cl.label()) : cl);
  }

  Signature& sig = out.signature();
  std::size_t added = 0;
  for (const auto& [p, n] : shifted) {
    if (p == kEquality) ensure_disequality(sig);
    else ensure_special(sig, shifted_name(p), n, {SpecialKind::Shifted, p});
    auto args = var_args(n);
    added += out.generate(Clause({}, {Atom(p, args), Atom(shifted_name(p), args)}));
  }
  record(report, "bs", added, rewritten);
  return out.take();
}

Problem pf(const Problem& m, TransformReport* report) {
  Output out(m);
  std::size_t rewritten = 0;
  for (const auto& cl : m.clauses) {
    VarId fresh = next_free_var(cl);
    std::vector<std::pair<Term, VarId>> extracted;
    std::vector<Atom> body;
    for (const auto& b : cl.body()) {
      if (b.is_equation() || b.is_disequation()) {
        body.push_back(b);
        continue;
      }
      Atom flat = b;
      for (auto& t : flat.args) {
        if (!t.is_proper_functional()) continue;
        auto it = std::find_if(extracted.begin(), extracted.end(), [&](const auto& e) { return e.first == t; });
        VarId x = it != extracted.end() ? it->second : fresh++;
        if (it == extracted.end()) extracted.emplace_back(t, x);
        t = var(x);
      }
      body.push_back(std::move(flat));
    }
    if (extracted.empty()) {
      out.keep(cl);
      continue;
    }
    for (const auto& [t, x] : extracted) body.push_back(Atom::equation(t, var(x)));
    ++rewritten;
    out.keep(Clause(cl.head(), std::move(body), cl.label()));
  }
  record(report, "pf", 0, rewritten);
  return out.take();
}

Problem sh(const Problem& m, TransformReport* report) { return bs(pf(m, report), report); }

// ---------------------------------------------------------------------------
// Blocking

std::vector<std::string> blocking_predicates(const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& [p, n] : sig.input_predicates())
    if (n == 1) out.push_back(p);
  return out;
}

namespace {

Atom eq_xy() { return Atom::equation(var(0), var(1)); }
Atom neq_xy() { return Atom::disequation(var(0), var(1)); }
Clause case_split(std::vector<Atom> guard) { return Clause({eq_xy(), neq_xy()}, std::move(guard)); }
Clause consistency() { return Clause({}, {eq_xy(), neq_xy()}); }

void require_dom(const Signature& sig, const char* which) {
  if (!sig.predicates.contains(kDomain))
    throw ConfigError(std::string(which) + " blocking needs a range-restricted input with a dom predicate");
}

// sub(x,x) <- dom(x) and, per f and argument position i,
// sub(x, f(x1..xn)) <- sub(x, xi) & dom(x) & dom(f(x1..xn)).
std::size_t add_sub_axioms(Output& out, const Signature& sig) {
  ensure_special(out.signature(), kSubterm, 2, {SpecialKind::Subterm, {}});
  std::size_t added = out.generate(Clause({Atom(kSubterm, {var(0), var(0)})}, {dom(var(0))}));
  for (const auto& [f, n] : sig.functions.entries()) {
    if (n == 0) continue;
    Term ft = Term::app(f, var_args(n, 1));
    for (std::size_t i = 0; i < n; ++i) {
      Atom head(kSubterm, {var(0), ft});
      std::vector<Atom> body{Atom(kSubterm, {var(0), var(static_cast<VarId>(i + 1))}), dom(var(0)), dom(ft)};
      added += out.generate(Clause({head}, std::move(body)));
    }
  }
  return added;
}

Problem block(const Problem& m, Blocking kind, TransformReport* report) {
  Output out(m);
  for (const auto& c : m.clauses) out.keep(c);
  ensure_disequality(out.signature());
  std::size_t added = 0;
  switch (kind) {
    case Blocking::None: return m;
    case Blocking::SubtermDomain:
      require_dom(m.signature, "subterm domain");
      added += add_sub_axioms(out, m.signature);
      added += out.generate(case_split({Atom(kSubterm, {var(0), var(1)})}));
      break;
    case Blocking::SubtermPredicate:
      require_dom(m.signature, "subterm predicate");
      added += add_sub_axioms(out, m.signature);
      for (const auto& p : blocking_predicates(m.signature))
        added += out.generate(case_split({Atom(kSubterm, {var(0), var(1)}), Atom(p, {var(0)}), Atom(p, {var(1)})}));
      break;
    case Blocking::UnrestrictedDomain:
      require_dom(m.signature, "unrestricted domain");
      added += out.generate(case_split({dom(var(0)), dom(var(1))}));
      break;
    case Blocking::UnrestrictedPredicate:
      for (const auto& p : blocking_predicates(m.signature))
        added += out.generate(case_split({Atom(p, {var(0)}), Atom(p, {var(1)})}));
      break;
  }
  added += out.generate(consistency());
  record(report, "blocking", added);
  return out.take();
}

}  // namespace

Problem apply_blocking(const Problem& m, Blocking kind, TransformReport* report) {
  if (kind == Blocking::None) return m;
  return block(m, kind, report);
}

Problem bl_sd(const Problem& m, TransformReport* report) { return apply_blocking(m, Blocking::SubtermDomain, report); }
Problem bl_sp(const Problem& m, TransformReport* report) { return apply_blocking(m, Blocking::SubtermPredicate, report); }
Problem bl_ud(const Problem& m, TransformReport* report) { return apply_blocking(m, Blocking::UnrestrictedDomain, report); }
Problem bl_up(const Problem& m, TransformReport* report) { return apply_blocking(m, Blocking::UnrestrictedPredicate, report); }

// ---------------------------------------------------------------------------
// Pipelines

PipelineResult apply_pipeline(const Problem& m, const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult res{m, {}};
  TransformReport& rep = res.report;
  rep.input_clauses = m.clauses.size();
  rep.input_bytes = text_size(m);

  if (cfg.shift) res.problem = sh(res.problem, &rep);
  switch (cfg.rr) {
    case RangeRestriction::None: break;
    case RangeRestriction::Classical: res.problem = crr(res.problem, cfg.constant_policy, &rep); break;
    case RangeRestriction::New: res.problem = rr(res.problem, cfg.constant_policy, &rep); break;
  }
  res.problem = apply_blocking(res.problem, cfg.blocking, &rep);

  if (cfg.rr != RangeRestriction::None) {
    for (const auto& c : res.problem.clauses)
      if (!is_range_restricted(c))
        throw Error("internal: pipeline " + cfg.label() + " produced a clause that is not range-restricted: " +
                    to_string(c));
  }
  rep.output_clauses = res.problem.clauses.size();
  rep.output_bytes = text_size(res.problem);
  return res;
}

}  // namespace bumg
