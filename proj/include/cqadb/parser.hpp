#pragma once

// Text formats for schemas, constraints, instances, and queries, with
// deterministic round-tripping serialization.  `#` starts a line comment in
// every format.

#include "cqadb/core.hpp"

namespace cqadb {

// `relation R(a: rat, b: sym); ...`
Schema parse_schema(const std::string& text);

// Comma-separated lhs atoms and guard conjuncts, `->`, then `false` or a
// `|`-separated atom disjunction.  Surface sugar:
//   `fd R: 1 -> 2`        functional dependency over 1-based positions
//   `jd R: [1,2][2,3]`    join dependency over 1-based position components
// Bare identifiers in constraint atoms are variables; symbols are quoted.
std::vector<Constraint> parse_constraints(const std::string& text,
                                          const Schema& s);

// `R(1,2). P('a').` — duplicates are collapsed; when `warnings` is non-null a
// note is appended for every collapsed duplicate.
Instance parse_instance(const std::string& text, const Schema& s,
                        std::vector<std::string>* warnings = nullptr);

// Closed Boolean combination of ground fact atoms via and/or/not; ground
// built-in comparisons are folded to true/false.  Bare identifiers denote
// symbols (queries are closed, so there are no variables).
Query parse_query(const std::string& text, const Schema& s);

// Facts in written order, same grammar as an instance file; duplicates are
// rejected (ParseError).  Backs order-sensitive inputs such as repair
// processing orders.
std::vector<Fact> parse_fact_sequence(const std::string& text,
                                      const Schema& s);

std::string serialize(const Schema& s);
std::string serialize(const std::vector<Constraint>& f);
std::string serialize(const Instance& i);
std::string serialize(const Query& q);

}  // namespace cqadb
