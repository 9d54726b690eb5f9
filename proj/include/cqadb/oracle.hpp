#pragma once

// Ground-truth reference engines: exhaustive repair enumeration over the
// positive hull, brute-force consistent-answer evaluation, an exact
// branch-and-prune search for repairs avoiding given facts, hard-instance
// encodings (graph 3-coloring, quantified Boolean formulas) together with
// their small-scale solvers, and seeded random test-case generators.

#include "cqadb/core.hpp"

#include <array>
#include <cstdint>

namespace cqadb {

// All repairs, canonically ordered, pairwise incomparable under the
// closeness order, every member consistent.  Never empty: the empty
// instance satisfies every constraint set.
using RepairSet = std::vector<Instance>;

// Every repair of i under f, found by checking all subsets of the positive
// hull against the ground rules and keeping the closest-to-i ones.  Requires
// at most `cap` positive hull facts (throws CapExceededError otherwise).
RepairSet enumerate_repairs(const Schema& s, const Instance& i,
                            const std::vector<Constraint>& f,
                            std::size_t cap = 18);

// True iff q holds in every repair.  Same cap as enumerate_repairs.
bool brute_cqa(const Query& q, const Schema& s, const Instance& i,
               const std::vector<Constraint>& f, std::size_t cap = 18);

// True iff some repair of i under f contains no fact of `avoid`.  Exact
// branch-and-prune search over subsets of i; scales past the enumeration cap
// but supports only denial and single-consequent constraints (throws
// UnsupportedClassError on multi-consequent ones).
bool exists_repair_avoiding(const Schema& s, const Instance& i,
                            const std::vector<Constraint>& f,
                            const Instance& avoid);

// ---------------------------------------------------------------------------
// Graph 3-coloring encoding
// ---------------------------------------------------------------------------

// Simple undirected graph on vertices 1..n.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

// An encoded instance with its constraints and distinguished query.
struct Reduction {
  Schema schema;
  std::vector<Constraint> constraints;
  Instance instance;
  Query query;
};

// Encodes 3-colorability with one functional dependency and one cyclic
// single-consequent dependency: the graph is 3-colorable iff some repair of
// the encoded instance omits the query fact.  Requires 1 <= u,v <= n with
// u != v, no duplicate edges, and no isolated vertices (ValidationError).
Reduction reduce_3col(const Graph& g);

// Brute-force 3-coloring test over all color assignments.
bool three_colorable(const Graph& g);

// ---------------------------------------------------------------------------
// Quantified Boolean formula encoding
// ---------------------------------------------------------------------------

struct QbfLiteral {
  int var = 0;  // 1-based; universally quantified variables come first
  bool positive = true;
};

// Exactly three literals; repeats inside a clause are allowed.
using QbfClause = std::array<QbfLiteral, 3>;

// forall x_1..x_u exists x_{u+1}..x_{u+e} (conjunction of 3-literal clauses).
// Clauses must be pairwise distinct up to literal order.
struct Qbf {
  int n_universal = 0;
  int n_existential = 0;
  std::vector<QbfClause> clauses;
};

// Encodes validity with two functional dependencies and one four-way
// disjunctive constraint: the formula is valid iff the query fact is
// consistently true in the encoded instance.  Throws ValidationError on a
// malformed formula (variable out of range, duplicate clause).
Reduction reduce_qbf(const Qbf& psi);

// Truth-table evaluation; at most 20 variables (CapExceededError).
bool qbf_valid(const Qbf& psi);

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

enum class GenProfile {
  DenialOnly,        // functional dependencies and denial constraints only
  AcyclicTgd,        // denials plus acyclic single-consequent dependencies
  AcyclicTgdJd,      // additionally one join dependency
  CyclicTgd,         // single-consequent dependencies forming a cycle
  GeneralUniversal,  // contains a multi-consequent constraint
};

struct GeneratedCase {
  Schema schema;
  std::vector<Constraint> constraints;
  Instance instance;
};

// Deterministic in (seed, profile, hull_cap); retries internally until the
// positive hull has at most hull_cap facts.
GeneratedCase gen_random(std::uint64_t seed, GenProfile profile,
                         std::size_t hull_cap = 14);

// Deterministic closed query over the case's schema: a conjunction of at
// most three disjunctions of at most three possibly negated fact atoms,
// biased toward facts of the generated instance.
Query gen_random_query(std::uint64_t seed, const GeneratedCase& c);

}  // namespace cqadb
