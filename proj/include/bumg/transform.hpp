#pragma once

// Clause-set transformations for bottom-up model generation:
//   crr, rr          range restriction (classical / by-need domain terms)
//   pf, bs, sh       partial flattening, basic shifting, sh = bs(pf(M))
//   bl_sd ... bl_up  blocking (subterm/unrestricted x domain/predicate)
// Pipelines apply left to right: sh, then the rr variant, then blocking.

#include <cstddef>
#include <string>
#include <vector>

#include "bumg/tptp.hpp"

namespace bumg {

enum class RangeRestriction { None, Classical, New };
enum class Blocking { None, SubtermDomain, SubtermPredicate, UnrestrictedDomain, UnrestrictedPredicate };
enum class ConstantPolicy { ReuseFirst, AlwaysFresh };

struct PipelineConfig {
  RangeRestriction rr = RangeRestriction::New;
  bool shift = false;
  Blocking blocking = Blocking::None;
  ConstantPolicy constant_policy = ConstantPolicy::ReuseFirst;

  /// Throws ConfigError when blocking is requested without range restriction.
  void validate() const;
  /// Dotted label such as `sh.rr.blud`, `crr`, or `none`.
  std::string label() const;
  /// Inverse of label(); throws ConfigError on unknown parts.
  static PipelineConfig from_label(const std::string& label);
  /// All 20 combinations of {crr, rr} x {shift, no shift} x blocking.
  static std::vector<PipelineConfig> all();
};

struct StepCount {
  std::string step;
  std::size_t added = 0;
  std::size_t rewritten = 0;  // clauses replaced in place
};

struct TransformReport {
  std::size_t input_clauses = 0;
  std::size_t output_clauses = 0;
  std::size_t input_bytes = 0;
  std::size_t output_bytes = 0;
  std::vector<StepCount> steps;
  std::vector<std::string> fresh_symbols;

  std::size_t added(const std::string& step) const;
  std::size_t rewritten(const std::string& step) const;
  std::size_t total_added() const;

  static std::string csv_header();
  std::string csv_row() const;
};

// Each transformation optionally records its step counts into a report.
Problem crr(const Problem& m, ConstantPolicy policy = ConstantPolicy::ReuseFirst, TransformReport* report = nullptr);
Problem rr(const Problem& m, ConstantPolicy policy = ConstantPolicy::ReuseFirst, TransformReport* report = nullptr);
/// Linear upper bound on the clause count of rr(m): |m| + non-variable
/// top-level body terms + predicate arities (equality excluded) + function
/// arities + 4 (the seed dom fact and the three myequal clauses).
std::size_t rr_clause_bound(const Problem& m);
/// Positive equations in heads become myequal atoms plus the defining clauses
/// x = y <- myequal(x,y), dom(x) <- myequal(x,y), dom(y) <- myequal(x,y).
/// Used inside rr; exposed for testing.
Problem myequal_rewrite(const Problem& m, TransformReport* report = nullptr);
Problem bs(const Problem& m, TransformReport* report = nullptr);
Problem pf(const Problem& m, TransformReport* report = nullptr);
Problem sh(const Problem& m, TransformReport* report = nullptr);

Problem bl_sd(const Problem& m, TransformReport* report = nullptr);
Problem bl_sp(const Problem& m, TransformReport* report = nullptr);
Problem bl_ud(const Problem& m, TransformReport* report = nullptr);
Problem bl_up(const Problem& m, TransformReport* report = nullptr);
Problem apply_blocking(const Problem& m, Blocking kind, TransformReport* report = nullptr);

struct PipelineResult {
  Problem problem;
  TransformReport report;
};

PipelineResult apply_pipeline(const Problem& m, const PipelineConfig& cfg);

/// Range restriction of a single clause: dom(x) body atoms for head-only
/// variables, in order of first occurrence.
Clause range_restrict(const Clause& c);

/// Unary predicates eligible for predicate blocking: input predicates only.
std::vector<std::string> blocking_predicates(const Signature& sig);

}  // namespace bumg
