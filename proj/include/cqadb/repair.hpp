#pragma once

// Repair checking and construction: a three-condition test deciding whether
// a candidate fixes an instance, a greedy builder for denial constraints, a
// discard-and-ban builder for single-consequent dependencies whose
// order/choice knobs can reach every repair, and a guided mode that replays
// a given target repair.

#include "cqadb/consequence.hpp"
#include "cqadb/core.hpp"
#include "cqadb/grounding.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cqadb {

enum class RepairViolation {
  None,
  CondI,    // the candidate violates the constraints
  CondII,   // the candidate differs from the closure of its instance part
  CondIII,  // some discarded fact could be re-added free of charge
};

std::string to_string(RepairViolation v);

struct RepairReport {
  bool verdict = false;
  RepairViolation violated = RepairViolation::None;
  // The first re-addable discarded fact, in canonical order.
  std::optional<Fact> witness_fact;   // CondIII
  // The mismatch between the candidate and the closure of its instance part.
  std::optional<Instance> witness_facts;  // CondII
};

// Decides whether candidate is a repair of i: it must (i) satisfy the
// constraints, (ii) equal the closure of candidate ∩ i, and (iii) admit no
// discarded instance fact whose re-addition closes into a consistent set
// adding nothing beyond i and the candidate.  Constraints must be denial
// constraints or single-consequent dependencies (UnsupportedClassError);
// the candidate must lie inside the positive hull (ValidationError).
RepairReport check_repair(const Schema& s, const Instance& i,
                          const Instance& candidate,
                          const std::vector<Constraint>& f);

// Fast path over a precomputed grounding and its rule index; the candidate
// is a hull-sized fact set.
RepairReport check_repair(const Grounding& g, const TgdIndex& idx,
                          const FactSet& candidate);

// How construct_repair and denial_repair draw facts and choose the
// keep-or-ban flag.
enum class BChoice { AlwaysFalse, AlwaysTrue, Scripted, Seeded };

struct RepairStrategy {
  // Processing order; must be a permutation of the instance when given
  // (defaults to canonical order).
  std::optional<std::vector<Fact>> order;
  // Deterministic shuffle applied on top of the order when set.
  std::optional<std::uint64_t> shuffle_seed;

  BChoice b = BChoice::AlwaysFalse;
  // Scripted: one flag consumed per drawn fact; length must equal the
  // instance size.
  std::vector<bool> b_script;
  // Seeded: deterministic per-draw coin flips.
  std::uint64_t b_seed = 0;
};

// Greedy maximal consistent subset: facts are drawn in strategy order and
// kept whenever doing so stays consistent.  Denial constraints only
// (UnsupportedClassError).  Listing a target repair's facts first
// reproduces that repair.
Instance denial_repair(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f,
                       const RepairStrategy& strategy = {});

// Discard-and-ban construction for denial constraints plus single-consequent
// dependencies.  Facts are drawn in strategy order; each draw closes the
// kept set with the drawn fact and discards it when the closure violates a
// constraint, when the flag is set and the closure adds facts beyond the
// instance and the kept set, or when the closure covers a banned set; every
// discard of a consistent closure bans its set of newly added facts.  The
// result always passes check_repair, and suitable strategies reach every
// repair.
Instance construct_repair(const Schema& s, const Instance& i,
                          const std::vector<Constraint>& f,
                          const RepairStrategy& strategy = {});

// Replays construct_repair with the target's facts first (flag off), then
// the discarded ones (flag on); returns an instance equal to target.
// Throws ValidationError when target is not a repair of i.
Instance guided_repair(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f,
                       const Instance& target);

}  // namespace cqadb
