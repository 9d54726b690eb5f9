#pragma once

// Forced-fact closure: the immediate-consequence operator of the single-rhs
// ground rules and its least fixpoint, plus an incremental variant with undo
// for search engines.

#include "cqadb/grounding.hpp"

namespace cqadb {

// Worklist index over the ground rules with exactly one rhs fact.
class TgdIndex {
 public:
  explicit TgdIndex(const Grounding& g);

  int fact_count() const { return nfacts_; }
  int rule_count() const { return static_cast<int>(rules_.size()); }

  // Least fixpoint of the rules above start.
  FactSet closure(const FactSet& start) const;
  // Closes io in place.
  void closure_into(FactSet& io) const;

 private:
  friend class IncrementalClosure;
  struct Rule {
    std::vector<int> lhs;  // sorted distinct fact ids
    int rhs = -1;
  };
  std::vector<Rule> rules_;
  std::vector<std::vector<int>> by_lhs_;  // fact id -> rules listing it
  int nfacts_ = 0;
};

// One application of the immediate-consequence operator:
//   j plus every single-rhs rule consequence whose premises lie in j.
// Facts outside the hull pass through untouched.
Instance t_f_step(const Grounding& g, const Instance& j);

// Least fixpoint of t_f_step above j.
Instance t_f_closure(const Grounding& g, const Instance& j);

// Closure that supports adding one fact at a time and undoing back to a mark.
class IncrementalClosure {
 public:
  explicit IncrementalClosure(const TgdIndex& idx);

  // Re-seeds the closure with the closure of start; clears the undo trail.
  void reset(const FactSet& start);
  // Adds f and all its consequences; returns a mark for undo.
  int add(int f);
  void undo(int mark);
  const FactSet& facts() const { return facts_; }
  bool contains(int f) const { return facts_.test(f); }

 private:
  void saturate(std::vector<int>& worklist, bool record);

  const TgdIndex* idx_;
  FactSet facts_;
  std::vector<int> missing_;  // per rule: premises not yet in facts_
  // Trail entry: fact id set (>= 0), or ~rule whose missing_ was decremented.
  std::vector<int> trail_;
};

}  // namespace cqadb
