#pragma once

// Hull computation: saturate an instance with every fact an applicable
// constraint could force into existence, collect the resulting ground rules,
// and expose the extended conflict hypergraph over hull literals.

#include "cqadb/core.hpp"

#include <boost/dynamic_bitset.hpp>

namespace cqadb {

// Dense bitmask over interned fact ids.
using FactSet = boost::dynamic_bitset<>;

// Interns facts into dense ids.  After finalize() the ids coincide with the
// canonical ranks of the facts, so ascending id order is canonical order.
class FactTable {
 public:
  // Returns the id, interning the fact if new.  Only before finalize().
  int intern(const Fact& f);
  // Id of a known fact, or -1.
  int find(const Fact& f) const;
  const Fact& fact(int id) const { return facts_[id]; }
  int size() const { return static_cast<int>(facts_.size()); }

  // Remaps ids into canonical rank order; returns old-id -> new-id.
  std::vector<int> finalize();
  bool finalized() const { return finalized_; }

  FactSet empty_set() const { return FactSet(facts_.size()); }
  FactSet full_set() const { return FactSet(facts_.size()).set(); }
  Instance to_instance(const FactSet& s) const;
  // Every fact must be interned; throws ValidationError otherwise.
  FactSet to_set(const Instance& i) const;

 private:
  std::map<Fact, int> ids_;
  std::vector<Fact> facts_;
  bool finalized_ = false;
};

// A grounded constraint over hull facts: satisfied by J iff lhs is not
// contained in J or some rhs fact is in J.  Fact ids are sorted sets.
struct GroundRule {
  std::vector<int> lhs;
  std::vector<int> rhs;   // empty for denial groundings
  int origin = -1;        // index into the constraint list
  bool from_jd = false;   // origin is a join dependency
  // The raw per-atom match that first produced this rule, aligned with the
  // origin constraint's lhs atoms (atoms may repeat facts).
  std::vector<int> matched;
};

// Saturated instance: hull facts, the original instance, the negative hull
// (facts some rule can force), and the deduplicated ground rules.
struct Grounding {
  Schema schema;
  std::vector<Constraint> constraints;
  FactTable table;    // all hull facts, canonical ids
  FactSet inst;       // the original instance
  FactSet hull_neg;   // facts occurring in some rule's rhs
  std::vector<GroundRule> rules;

  Instance instance() const { return table.to_instance(inst); }
  Instance hull() const { return table.to_instance(table.full_set()); }
  Instance negative_hull() const { return table.to_instance(hull_neg); }

  // Index of the first rule J violates, or -1.  J must be hull-sized.
  int violated_rule(const FactSet& j) const;
  bool consistent(const FactSet& j) const { return violated_rule(j) < 0; }
};

// Least saturation of i under f together with all ground rules whose lhs
// lies inside it.
Grounding compute_hull(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f);

const std::vector<GroundRule>& ground_rules(const Grounding& g);

// Extended conflict hypergraph.  Vertices are the hull literals in canonical
// order (by fact, positive before negative; a negative literal exists exactly
// for the negative hull).  Conflict edges collect each rule's lhs facts
// positively and rhs facts negatively; stabilizing edges tie the two literals
// of every negative-hull fact together.
struct Hypergraph {
  std::vector<Literal> vertices;
  std::vector<std::vector<int>> conflict_edges;     // sorted vertex indices
  std::vector<std::vector<int>> stabilizing_edges;  // sorted vertex indices

  int vertex_index(const Literal& l) const;  // -1 if absent
};

Hypergraph build_hypergraph(const Grounding& g);

// True iff no edge is fully contained in the literal set and every vertex
// outside it completes some edge when added.
bool is_maximal_independent(const Hypergraph& h,
                            const std::vector<Literal>& lits);

// I' together with the negative literals of all negative-hull facts outside
// I'; for a repair this is a maximal independent set.
std::vector<Literal> complement(const Grounding& g, const Instance& iprime);

// The facts occurring positively in a literal set.
Instance positive_projection(const std::vector<Literal>& lits);

std::string to_dot(const Hypergraph& h);
std::string to_json(const Hypergraph& h);

}  // namespace cqadb
