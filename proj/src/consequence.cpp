#include "cqadb/consequence.hpp"

namespace cqadb {

TgdIndex::TgdIndex(const Grounding& g) : nfacts_(g.table.size()) {
  by_lhs_.resize(nfacts_);
  for (const GroundRule& r : g.rules) {
    if (r.rhs.size() != 1) continue;
    Rule rule;
    rule.lhs = r.lhs;
    rule.rhs = r.rhs[0];
    int idx = static_cast<int>(rules_.size());
    for (int f : rule.lhs) by_lhs_[f].push_back(idx);
    rules_.push_back(std::move(rule));
  }
}

FactSet TgdIndex::closure(const FactSet& start) const {
  FactSet out = start;
  closure_into(out);
  return out;
}

void TgdIndex::closure_into(FactSet& io) const {
  // Every fact passes through the worklist exactly once, so each rule's
  // missing-premise counter reaches zero exactly when its whole lhs is in.
  std::vector<int> missing(rules_.size());
  for (std::size_t r = 0; r < rules_.size(); ++r)
    missing[r] = static_cast<int>(rules_[r].lhs.size());
  std::vector<int> worklist;
  for (std::size_t f = io.find_first(); f != FactSet::npos;
       f = io.find_next(f))
    worklist.push_back(static_cast<int>(f));
  while (!worklist.empty()) {
    int f = worklist.back();
    worklist.pop_back();
    for (int r : by_lhs_[f]) {
      if (--missing[r] == 0 && !io.test(rules_[r].rhs)) {
        io.set(rules_[r].rhs);
        worklist.push_back(rules_[r].rhs);
      }
    }
  }
}

Instance t_f_step(const Grounding& g, const Instance& j) {
  Instance out = j;
  FactSet in_hull = g.table.empty_set();
  for (const Fact& f : j) {
    int id = g.table.find(f);
    if (id >= 0) in_hull.set(id);
  }
  for (const GroundRule& r : g.rules) {
    if (r.rhs.size() != 1) continue;
    bool all = true;
    for (int f : r.lhs)
      if (!in_hull.test(f)) {
        all = false;
        break;
      }
    if (all) out.insert(g.table.fact(r.rhs[0]));
  }
  return out;
}

Instance t_f_closure(const Grounding& g, const Instance& j) {
  TgdIndex idx(g);
  FactSet in_hull = g.table.empty_set();
  Instance outside;
  for (const Fact& f : j) {
    int id = g.table.find(f);
    if (id >= 0)
      in_hull.set(id);
    else
      outside.insert(f);
  }
  idx.closure_into(in_hull);
  Instance out = g.table.to_instance(in_hull);
  out.insert(outside.begin(), outside.end());
  return out;
}

IncrementalClosure::IncrementalClosure(const TgdIndex& idx)
    : idx_(&idx), facts_(idx.fact_count()), missing_(idx.rule_count(), 0) {}

void IncrementalClosure::reset(const FactSet& start) {
  facts_.reset();
  trail_.clear();
  for (std::size_t r = 0; r < idx_->rules_.size(); ++r)
    missing_[r] = static_cast<int>(idx_->rules_[r].lhs.size());
  std::vector<int> worklist;
  for (std::size_t f = start.find_first(); f != FactSet::npos;
       f = start.find_next(f))
    worklist.push_back(static_cast<int>(f));
  saturate(worklist, /*record=*/false);
}

int IncrementalClosure::add(int f) {
  int mark = static_cast<int>(trail_.size());
  if (facts_.test(f)) return mark;
  std::vector<int> worklist = {f};
  saturate(worklist, /*record=*/true);
  return mark;
}

void IncrementalClosure::undo(int mark) {
  while (static_cast<int>(trail_.size()) > mark) {
    int e = trail_.back();
    trail_.pop_back();
    if (e >= 0)
      facts_.reset(e);
    else
      ++missing_[~e];
  }
}

void IncrementalClosure::saturate(std::vector<int>& worklist, bool record) {
  while (!worklist.empty()) {
    int f = worklist.back();
    worklist.pop_back();
    if (facts_.test(f)) continue;
    facts_.set(f);
    if (record) trail_.push_back(f);
    for (int r : idx_->by_lhs_[f]) {
      --missing_[r];
      if (record) trail_.push_back(~r);
      if (missing_[r] == 0) {
        int rhs = idx_->rules_[r].rhs;
        if (!facts_.test(rhs)) worklist.push_back(rhs);
      }
    }
  }
}

}  // namespace cqadb
