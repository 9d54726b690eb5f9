#pragma once

// Consistent query answering for denial constraints, join dependencies, and
// acyclic single-consequent dependencies: dependency-graph analysis, merging
// of join dependencies, support/block tables over the hull, a polynomial
// exists-repair test, and the CNF-driven top level.

#include "cqadb/consequence.hpp"
#include "cqadb/core.hpp"
#include "cqadb/grounding.hpp"

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cqadb {

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

// Directed graph over relation names with an edge from every consequent
// relation to every premise relation of each constraint.  Depth and height
// are longest simple directed path lengths ending/originating at the node
// (self-loops never extend a simple path); h is the maximum height.
struct DependencyGraph {
  std::vector<std::string> nodes;        // sorted relation names
  std::vector<std::vector<bool>> edge;   // edge[from][to]
  std::vector<int> depth;
  std::vector<int> height;
  int h = 0;

  int index_of(const std::string& rel) const;
  bool has_edge(const std::string& from, const std::string& to) const;
};

DependencyGraph dependency_graph(const std::vector<Constraint>& f,
                                 const Schema& s);

// True iff the graph has no directed cycle (self-loops count as cycles).
bool is_acyclic(const DependencyGraph& g);

// ---------------------------------------------------------------------------
// Join dependency merging
// ---------------------------------------------------------------------------

// Folds all join dependencies of one relation into a single equivalent one
// via pairwise component intersections; empty intersections are dropped and
// duplicates collapsed.  An empty list yields the trivial dependency with
// one component covering every attribute.  All specs must name `rel`
// (ValidationError otherwise).
JdSpec merge_jds(const Schema& s, const std::string& rel,
                 const std::vector<JdSpec>& jds);

// ---------------------------------------------------------------------------
// Support/block context
// ---------------------------------------------------------------------------

// Precomputed state for consistent-query answering over one instance.
//
// The constraint set is first normalized so that every relation carries
// exactly one join dependency (merging declared ones, adding trivial ones);
// the hull, ground rules, and all tables below live over that normalized
// set.  Construction refuses multi-consequent constraints and constraint
// sets whose non-join-dependency part has a cyclic dependency graph
// (UnsupportedClassError).
//
// A support of a hull fact is a subset of the instance whose presence in a
// repair forces the fact to be present; a block is a pair (require, forbid)
// with require a subset of the instance and forbid at most one fact outside
// it, whose satisfaction forces the fact absent.  Both are built by a
// levelled fixpoint (levels -1..h) in which join-dependency rules rewrite
// premise facts; supports are completed before blocks.  The final tables
// keep subset-minimal supports and undominated blocks; the per-level sets
// remain unpruned and are cumulative.
class CqaContext {
 public:
  CqaContext(const Schema& s, const Instance& i,
             const std::vector<Constraint>& f);

  const Schema& schema() const { return schema_; }
  const Instance& instance() const { return inst_facts_; }
  const std::vector<Constraint>& original_constraints() const { return f_; }
  // The normalized constraints: every relation has exactly one join
  // dependency.
  const std::vector<Constraint>& working_constraints() const { return fp_; }
  const Grounding& grounding() const { return g_; }
  const TgdIndex& rule_index() const { return idx_; }
  const DependencyGraph& graph() const { return dg_; }
  int height() const { return dg_.h; }

  // Final tables (pruned, canonically ordered).  The fact must lie in the
  // hull (ValidationError otherwise).
  std::vector<Instance> supports_of(const Fact& fact) const;
  std::vector<std::pair<Instance, Instance>> blocks_of(const Fact& fact) const;
  // Cumulative unpruned sets after level `level` (-1..h).
  std::vector<Instance> supports_of(const Fact& fact, int level) const;
  std::vector<std::pair<Instance, Instance>> blocks_of(const Fact& fact,
                                                       int level) const;

 private:
  struct BlockRep {
    std::vector<int> require;  // sorted instance fact ids
    int forbid = -1;           // hull fact id outside the instance, or -1

    friend bool operator==(const BlockRep&, const BlockRep&) = default;
    friend auto operator<=>(const BlockRep& a, const BlockRep& b) {
      if (auto c = a.require <=> b.require; c != 0) return c;
      return a.forbid <=> b.forbid;
    }
  };

  void build_supports();
  void build_blocks();
  int hull_id(const Fact& fact) const;

  Schema schema_;
  Instance inst_facts_;
  std::vector<Constraint> f_;   // as given
  std::vector<Constraint> fp_;  // normalized
  Grounding g_;
  TgdIndex idx_;
  DependencyGraph dg_;

  // [level + 1][fact id] -> cumulative sets; final tables are pruned.
  std::vector<std::vector<std::vector<std::vector<int>>>> supp_levels_;
  std::vector<std::vector<std::vector<BlockRep>>> block_levels_;
  std::vector<std::vector<std::vector<int>>> supp_;
  std::vector<std::vector<BlockRep>> block_;

  friend struct ExistsRepairSearch;
};

// ---------------------------------------------------------------------------
// Exists-repair test
// ---------------------------------------------------------------------------

// The combination certifying that a repair with the requested shape exists.
struct RepairWitness {
  // One chosen support per required fact.
  std::vector<std::pair<Fact, Instance>> supports;
  // One chosen block per forbidden fact: (fact, require, forbid).
  std::vector<std::tuple<Fact, Instance, Instance>> blocks;
  // The closure of the union of the chosen supports and block requirements.
  Instance closure;
  // A concrete repair containing every required fact and no forbidden one.
  Instance repair;
};

struct ExistsRepairResult {
  bool exists = false;
  std::optional<RepairWitness> witness;
};

// Decides whether some repair contains every `required` fact and no
// `forbidden` fact.  Required facts outside the hull make this false;
// forbidden facts outside the hull are ignored.  Combinations are scanned
// in canonical order and the first realizable one is reported.
ExistsRepairResult exists_repair(const Instance& required,
                                 const Instance& forbidden,
                                 const CqaContext& ctx);

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

// One CNF clause: the disjunction of the facts in `plus` and the negations
// of the facts in `minus`.
struct CnfClause {
  std::vector<Fact> plus;
  std::vector<Fact> minus;
};

// Conjunctive normal form of a closed query.  Tautological clauses are
// dropped and duplicate clauses collapsed; clause order follows the first
// occurrence during distribution.  Throws CapExceededError when the clause
// count would exceed `clause_cap`.
std::vector<CnfClause> to_cnf(const Query& q, std::size_t clause_cap = 4096);

struct CqaOutcome {
  bool consistently_true = false;
  // When false: the CNF clause whose negation some repair realizes, and the
  // witness produced by exists_repair.
  int failing_clause = -1;
  std::optional<RepairWitness> witness;
};

// True iff the query holds in every repair: each CNF clause's negation is
// checked for realizability with exists_repair.
CqaOutcome cqa_explain(const Query& q, const CqaContext& ctx,
                       std::size_t clause_cap = 4096);

bool cqa(const Query& q, const Schema& s, const Instance& i,
         const std::vector<Constraint>& f, std::size_t clause_cap = 4096);

}  // namespace cqadb
