#pragma once

// Bottom-up model generation over range-restricted clause sets.
//
// A branch holds ground facts and a congruence closure. Rule instances are
// found by matching clause bodies against the facts modulo the closure and
// queued by priority: closing instances first, then disjunctions with an
// equation, then other disjunctions, then Horn instances. Disjunctions are
// split depth first with the first equation literal tried first. An open
// branch with nothing left to apply is a completion and yields a model.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bumg/congruence.hpp"
#include "bumg/tptp.hpp"

namespace bumg {

class NotRangeRestricted : public Error {
public:
  using Error::Error;
};

struct Strategy {
  std::size_t max_rules = 100000;
  std::size_t max_depth = 10000;
  std::chrono::milliseconds timeout{60000};
  /// Every n-th selection takes the oldest pending instance regardless of
  /// priority, so low-priority instances are not starved. 0 disables it.
  std::size_t fairness_period = 16;
  /// Size budget (terms plus facts) for branch snapshots kept at split
  /// points. Split levels beyond it store no snapshot and are rebuilt on
  /// backtracking by replaying their decisions from the nearest snapshot.
  std::size_t snapshot_budget = 2000000;
  /// Check the extracted model against the input clauses before answering.
  bool verify_model = true;
  /// Receives one `EVENT kind=...` line per derivation event when set.
  std::ostream* trace = nullptr;
};

struct Statistics {
  std::size_t rules = 0;     // rule instances applied
  std::size_t splits = 0;
  std::size_t branches = 0;  // branches entered, including the first
  std::size_t merges = 0;    // class merges over all branches
  std::size_t replays = 0;   // rule instances re-applied while rebuilding a branch
  double ms = 0;
};

struct SolveResult {
  SzsStatus status = SzsStatus::GaveUp;
  std::optional<ModelDocument> model;
  Statistics stats;
  /// Why the search stopped when the status is Timeout or GaveUp.
  std::string reason;
};

SolveResult saturate(const Problem& p, const Strategy& strategy = {});

/// Every clause evaluated under every valuation into the model's domain.
/// Returns a description of the first falsified instance, or nullopt.
std::optional<std::string> check_model(const ModelDocument& m, const std::vector<Clause>& clauses);

}  // namespace bumg
