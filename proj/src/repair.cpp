#include "cqadb/repair.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

namespace cqadb {

namespace {

void require_single_consequent(const std::vector<Constraint>& f) {
  for (const auto& c : f) {
    if (c.cls() == ConstraintClass::GeneralUniversal) {
      throw UnsupportedClassError(
          "repair operations require denial constraints or single-consequent "
          "dependencies");
    }
  }
}

// Resolves the strategy's processing order to instance fact ids.
std::vector<int> resolve_order(const Grounding& g, const RepairStrategy& st) {
  std::vector<int> order;
  if (st.order) {
    if (st.order->size() != g.inst.count()) {
      throw ValidationError(
          "processing order must be a permutation of the instance");
    }
    FactSet seen = g.table.empty_set();
    for (const Fact& fa : *st.order) {
      const int id = g.table.find(fa);
      if (id < 0 || !g.inst.test(static_cast<std::size_t>(id))) {
        throw ValidationError("processing order contains " + to_string(fa) +
                              ", which is not an instance fact");
      }
      if (seen.test(static_cast<std::size_t>(id))) {
        throw ValidationError("processing order repeats " + to_string(fa));
      }
      seen.set(static_cast<std::size_t>(id));
      order.push_back(id);
    }
  } else {
    for (auto t = g.inst.find_first(); t != FactSet::npos;
         t = g.inst.find_next(t)) {
      order.push_back(static_cast<int>(t));
    }
  }
  if (st.shuffle_seed) {
    // Fisher-Yates with a fixed draw sequence, stable across platforms.
    std::mt19937_64 rng(*st.shuffle_seed);
    for (std::size_t k = order.size(); k > 1; --k) {
      const std::size_t j = static_cast<std::size_t>(rng() % k);
      std::swap(order[k - 1], order[j]);
    }
  }
  return order;
}

// Produces one keep-or-ban flag per drawn fact.
class FlagDrawer {
 public:
  FlagDrawer(const RepairStrategy& st, std::size_t draws) : st_(&st) {
    if (st.b == BChoice::Scripted && st.b_script.size() != draws) {
      throw ValidationError("flag script has " +
                            std::to_string(st.b_script.size()) +
                            " entries but the instance has " +
                            std::to_string(draws) + " facts");
    }
    if (st.b == BChoice::Seeded) rng_.seed(st.b_seed);
  }

  bool next() {
    switch (st_->b) {
      case BChoice::AlwaysFalse:
        return false;
      case BChoice::AlwaysTrue:
        return true;
      case BChoice::Scripted:
        return st_->b_script[pos_++];
      case BChoice::Seeded:
        return (rng_() % 2) == 1;
    }
    return false;
  }

 private:
  const RepairStrategy* st_;
  std::size_t pos_ = 0;
  std::mt19937_64 rng_;
};

FactSet candidate_to_set(const Grounding& g, const Instance& candidate) {
  FactSet out = g.table.empty_set();
  for (const Fact& fa : candidate) {
    const int id = g.table.find(fa);
    if (id < 0) {
      throw ValidationError("candidate fact " + to_string(fa) +
                            " lies outside the positive hull");
    }
    out.set(static_cast<std::size_t>(id));
  }
  return out;
}

}  // namespace

std::string to_string(RepairViolation v) {
  switch (v) {
    case RepairViolation::None:
      return "none";
    case RepairViolation::CondI:
      return "constraint-violation";
    case RepairViolation::CondII:
      return "closure-mismatch";
    case RepairViolation::CondIII:
      return "re-addable-fact";
  }
  return "unknown";
}

RepairReport check_repair(const Grounding& g, const TgdIndex& idx,
                          const FactSet& candidate) {
  require_single_consequent(g.constraints);
  RepairReport rep;

  // (i) The candidate satisfies every ground rule.
  if (g.violated_rule(candidate) >= 0) {
    rep.violated = RepairViolation::CondI;
    return rep;
  }

  // (ii) The candidate equals the closure of its instance part.
  FactSet closed = candidate & g.inst;
  idx.closure_into(closed);
  if (closed != candidate) {
    rep.violated = RepairViolation::CondII;
    rep.witness_facts = g.table.to_instance(closed ^ candidate);
    return rep;
  }

  // (iii) No dropped instance fact closes back into a consistent set that
  // stays inside the instance and the candidate.
  const FactSet dropped = g.inst - candidate;
  for (auto t = dropped.find_first(); t != FactSet::npos;
       t = dropped.find_next(t)) {
    FactSet j2 = candidate;
    j2.set(t);
    idx.closure_into(j2);
    if (!g.consistent(j2)) continue;
    if ((j2 - g.inst - candidate).none()) {
      rep.violated = RepairViolation::CondIII;
      rep.witness_fact = g.table.fact(static_cast<int>(t));
      return rep;
    }
  }

  rep.verdict = true;
  return rep;
}

RepairReport check_repair(const Schema& s, const Instance& i,
                          const Instance& candidate,
                          const std::vector<Constraint>& f) {
  require_single_consequent(f);
  validate_instance(s, candidate);
  const Grounding g = compute_hull(s, i, f);
  const FactSet cand = candidate_to_set(g, candidate);
  const TgdIndex idx(g);
  return check_repair(g, idx, cand);
}

Instance denial_repair(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f,
                       const RepairStrategy& strategy) {
  for (const auto& c : f) {
    if (c.cls() != ConstraintClass::Denial) {
      throw UnsupportedClassError(
          "the greedy subset builder requires denial constraints only");
    }
  }
  const Grounding g = compute_hull(s, i, f);
  const std::vector<int> order = resolve_order(g, strategy);
  FactSet j = g.table.empty_set();
  for (const int t : order) {
    j.set(static_cast<std::size_t>(t));
    if (g.violated_rule(j) >= 0) j.reset(static_cast<std::size_t>(t));
  }
  return g.table.to_instance(j);
}

Instance construct_repair(const Schema& s, const Instance& i,
                          const std::vector<Constraint>& f,
                          const RepairStrategy& strategy) {
  require_single_consequent(f);
  const Grounding g = compute_hull(s, i, f);
  const TgdIndex idx(g);
  const std::vector<int> order = resolve_order(g, strategy);
  FlagDrawer draw(strategy, order.size());

  FactSet j = g.table.empty_set();
  std::vector<FactSet> banned;
  for (const int t : order) {
    const bool b = draw.next();
    FactSet j2 = j;
    j2.set(static_cast<std::size_t>(t));
    idx.closure_into(j2);

    bool discard = false;
    if (g.violated_rule(j2) >= 0) {
      discard = true;  // an inconsistent closure is dropped without a ban
    } else {
      FactSet fresh = j2 - g.inst - j;
      if (b && fresh.any()) discard = true;
      if (!discard) {
        for (const FactSet& bs : banned) {
          if (bs.is_subset_of(j2)) {
            discard = true;
            break;
          }
        }
      }
      if (discard) {
        if (fresh.none()) {
          throw std::logic_error(
              "discarded a consistent closure that adds no fresh facts");
        }
        banned.push_back(std::move(fresh));
      }
    }
    if (!discard) j = std::move(j2);

    for (const FactSet& bs : banned) {
      if (bs.is_subset_of(j)) {
        throw std::logic_error("a banned set ended up inside the kept set");
      }
    }
  }
  return g.table.to_instance(j);
}

Instance guided_repair(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f,
                       const Instance& target) {
  const RepairReport rep = check_repair(s, i, target, f);
  if (!rep.verdict) {
    throw ValidationError("target is not a repair (" + to_string(rep.violated) +
                          ")");
  }
  RepairStrategy st;
  st.b = BChoice::Scripted;
  std::vector<Fact> order;
  for (const Fact& fa : i) {
    if (target.count(fa) != 0) {
      order.push_back(fa);
      st.b_script.push_back(false);
    }
  }
  for (const Fact& fa : i) {
    if (target.count(fa) == 0) {
      order.push_back(fa);
      st.b_script.push_back(true);
    }
  }
  st.order = std::move(order);
  Instance out = construct_repair(s, i, f, st);
  if (out != target) {
    throw std::logic_error(
        "guided construction failed to reproduce the target repair");
  }
  return out;
}

}  // namespace cqadb
