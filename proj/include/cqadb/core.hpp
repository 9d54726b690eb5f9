#pragma once

// Typed relational model: schemas, constants, facts, instances, universal
// constraints with built-in guards, closed queries, and the relative-proximity
// order used to compare candidate fixes of an inconsistent database.

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cqadb {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax error with 1-based source position.
struct ParseError : Error {
  int line;
  int col;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

// Well-formedness violation: bad arity, unknown relation, unsafe variable,
// ill-typed comparison, and similar.
struct ValidationError : Error {
  using Error::Error;
};

// The requested operation does not support the class of the given constraints.
struct UnsupportedClassError : Error {
  using Error::Error;
};

// A configured size limit (enumeration cap, CNF clause cap) was exceeded.
struct CapExceededError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Values and facts
// ---------------------------------------------------------------------------

enum class AttrKind { Rational, Symbol };

// A constant from one of the two disjoint domains: exact rationals or interned
// symbols.  The canonical total order places all rationals (by value) before
// all symbols (by name); it underlies every deterministic iteration.
class Value {
 public:
  Value() : v_(Rational(0)) {}
  static Value rational(Rational r) { return Value(std::move(r)); }
  static Value rational(long long n, long long d = 1) {
    return Value(Rational(n, d));
  }
  static Value symbol(std::string name) {
    Value v;
    v.v_ = std::move(name);
    return v;
  }

  bool is_rational() const { return v_.index() == 0; }
  bool is_symbol() const { return v_.index() == 1; }
  AttrKind kind() const {
    return is_rational() ? AttrKind::Rational : AttrKind::Symbol;
  }
  const Rational& as_rational() const { return std::get<0>(v_); }
  const std::string& as_symbol() const { return std::get<1>(v_); }

  friend bool operator==(const Value& a, const Value& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b) {
    if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
    if (a.is_rational()) return a.as_rational() < b.as_rational();
    return a.as_symbol() < b.as_symbol();
  }

 private:
  explicit Value(Rational r) : v_(std::move(r)) {}
  std::variant<Rational, std::string> v_;
};

std::string to_string(const Value& v);

struct Attribute {
  std::string name;
  AttrKind kind = AttrKind::Rational;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Relation names with fixed positive arity and typed attribute lists.
struct Schema {
  std::map<std::string, std::vector<Attribute>> relations;

  bool has(const std::string& rel) const { return relations.count(rel) != 0; }
  const std::vector<Attribute>& attrs(const std::string& rel) const;
  int arity(const std::string& rel) const {
    return static_cast<int>(attrs(rel).size());
  }
  // Validates: relation not yet declared, arity > 0, attribute names unique.
  void add_relation(const std::string& rel, std::vector<Attribute> attributes);
  friend bool operator==(const Schema&, const Schema&) = default;
};

struct Fact {
  std::string relation;
  std::vector<Value> tuple;

  friend bool operator==(const Fact& a, const Fact& b) {
    return a.relation == b.relation && a.tuple == b.tuple;
  }
  friend bool operator!=(const Fact& a, const Fact& b) { return !(a == b); }
  friend bool operator<(const Fact& a, const Fact& b) {
    if (a.relation != b.relation) return a.relation < b.relation;
    return std::lexicographical_compare(a.tuple.begin(), a.tuple.end(),
                                        b.tuple.begin(), b.tuple.end());
  }
};

std::string to_string(const Fact& f);

// An instance is a finite set of facts; std::set iterates in canonical order.
using Instance = std::set<Fact>;

std::string to_string(const Instance& i);  // "P(1), R(1,2)" in canonical order

struct Literal {
  Fact fact;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.fact != b.fact) return a.fact < b.fact;
    return a.positive && !b.positive;  // positive literal first
  }
};

std::string to_string(const Literal& l);  // "P(2)" or "!P(2)"

// ---------------------------------------------------------------------------
// Terms, atoms, guards
// ---------------------------------------------------------------------------

// A term in a constraint atom or guard: a variable or a constant.
struct Term {
  bool is_var = false;
  std::string var;  // when is_var
  Value val;        // when !is_var

  static Term variable(std::string name) {
    Term t;
    t.is_var = true;
    t.var = std::move(name);
    return t;
  }
  static Term constant(Value v) {
    Term t;
    t.val = std::move(v);
    return t;
  }
  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string relation;
  std::vector<Term> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

// Quantifier-free Boolean formula over comparison atoms; constraint guards.
struct Guard {
  enum class Kind { True, False, Cmp, And, Or, Not };
  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;  // Cmp
  Term lhs, rhs;         // Cmp
  std::vector<Guard> kids;

  static Guard truth() { return Guard{}; }
  static Guard falsity() {
    Guard g;
    g.kind = Kind::False;
    return g;
  }
  static Guard cmp(CmpOp op, Term a, Term b) {
    Guard g;
    g.kind = Kind::Cmp;
    g.op = op;
    g.lhs = std::move(a);
    g.rhs = std::move(b);
    return g;
  }
  static Guard conj(std::vector<Guard> ks) {
    Guard g;
    g.kind = Kind::And;
    g.kids = std::move(ks);
    return g;
  }
  static Guard disj(std::vector<Guard> ks) {
    Guard g;
    g.kind = Kind::Or;
    g.kids = std::move(ks);
    return g;
  }
  static Guard negation(Guard k) {
    Guard g;
    g.kind = Kind::Not;
    g.kids.push_back(std::move(k));
    return g;
  }
  friend bool operator==(const Guard&, const Guard&) = default;
};

using Binding = std::map<std::string, Value>;

// Standard Boolean/relational semantics with exact rational comparison.
// Throws ValidationError on an unbound variable, an ordered comparison with a
// symbol operand, or a mixed-domain comparison.
bool eval_builtin(const Guard& g, const Binding& binding);

// ---------------------------------------------------------------------------
// Universal constraints
// ---------------------------------------------------------------------------

enum class ConstraintClass { Denial, FullTgd, JoinDependency, GeneralUniversal };

std::string to_string(ConstraintClass c);

// Functional dependency surface form, kept for round-trip serialization.
// Positions are 0-based attribute indices.
struct FdSpec {
  std::string relation;
  std::vector<int> lhs_positions;
  std::vector<int> rhs_positions;
  friend bool operator==(const FdSpec&, const FdSpec&) = default;
};

// Join dependency surface form; components are sorted 0-based position sets
// whose union covers all attributes of the relation.
struct JdSpec {
  std::string relation;
  std::vector<std::vector<int>> components;
  friend bool operator==(const JdSpec&, const JdSpec&) = default;
};

// Implication-form universal constraint:
//   lhs atoms AND guard  ->  disjunction of rhs atoms.
// Safety: every variable of the rhs and the guard occurs in some lhs atom.
// At least one lhs atom is required, so the empty instance satisfies every
// constraint set.
struct Constraint {
  std::vector<Atom> lhs;
  Guard guard;  // defaults to true
  std::vector<Atom> rhs;
  std::optional<FdSpec> fd;  // set when this is a desugared FD
  std::optional<JdSpec> jd;  // set when this is a desugared JD

  ConstraintClass cls() const {
    if (jd) return ConstraintClass::JoinDependency;
    if (rhs.empty()) return ConstraintClass::Denial;
    if (rhs.size() == 1) return ConstraintClass::FullTgd;
    return ConstraintClass::GeneralUniversal;
  }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// FD R: X -> Y desugars to a denial with two R atoms sharing variables on X
// and a guard requiring some Y position to differ.
Constraint make_fd(const Schema& s, const std::string& rel,
                   std::vector<int> lhs_positions,
                   std::vector<int> rhs_positions);

// JD R join [X1,...,Xk] desugars to a full tuple-generating dependency with k
// lhs atoms that share one variable per covered position and an rhs atom over
// the shared variables.
Constraint make_jd(const Schema& s, const std::string& rel,
                   std::vector<std::vector<int>> components);

void validate_fact(const Schema& s, const Fact& f);
void validate_instance(const Schema& s, const Instance& i);
// Checks relation names, arities, term types, the safety requirement, and
// that there is at least one lhs atom.
void validate_constraint(const Schema& s, const Constraint& c);

// ---------------------------------------------------------------------------
// Instance operations
// ---------------------------------------------------------------------------

// (a \ b) union (b \ a)
Instance symmetric_difference(const Instance& a, const Instance& b);

enum class DeltaOrder { Less, Equal, Greater, Incomparable };

// Compares the symmetric differences of a and b from base under set
// inclusion: a is closer when its difference is a subset of b's.
DeltaOrder closer_than(const Instance& base, const Instance& a,
                       const Instance& b);

// A grounded violated constraint: the matched lhs facts and the (absent)
// grounded rhs facts of constraint `constraint_index`.
struct ViolationWitness {
  int constraint_index = -1;
  std::vector<Fact> lhs_facts;
  std::vector<Fact> rhs_facts;
};

std::string to_string(const ViolationWitness& w);  // "R(2,3), P(2) -> P(3)"

// First violation in deterministic order, if any: a grounding of some
// constraint's lhs by facts of i that satisfies the guard while no rhs atom
// (under the induced binding) is in i.
std::optional<ViolationWitness> find_violation(
    const Instance& i, const std::vector<Constraint>& f);

bool satisfies(const Instance& i, const std::vector<Constraint>& f);

// Enumerates every grounding of c's lhs over i whose guard holds, invoking
// cb(lhs_facts, rhs_facts).  Returning false from cb stops the enumeration.
void for_each_grounding(
    const Instance& i, const Constraint& c,
    const std::function<bool(const std::vector<Fact>&, const std::vector<Fact>&)>&
        cb);

// ---------------------------------------------------------------------------
// Closed queries
// ---------------------------------------------------------------------------

// Closed quantifier-free Boolean combination of ground fact atoms.  Ground
// built-in atoms are folded to True/False at parse time.
struct Query {
  enum class Kind { True, False, Atom, Not, And, Or };
  Kind kind = Kind::True;
  Fact fact;  // Atom
  std::vector<Query> kids;

  static Query truth() { return Query{}; }
  static Query falsity() {
    Query q;
    q.kind = Kind::False;
    return q;
  }
  static Query atom(Fact f) {
    Query q;
    q.kind = Kind::Atom;
    q.fact = std::move(f);
    return q;
  }
  static Query negation(Query k) {
    Query q;
    q.kind = Kind::Not;
    q.kids.push_back(std::move(k));
    return q;
  }
  static Query conj(std::vector<Query> ks) {
    Query q;
    q.kind = Kind::And;
    q.kids = std::move(ks);
    return q;
  }
  static Query disj(std::vector<Query> ks) {
    Query q;
    q.kind = Kind::Or;
    q.kids = std::move(ks);
    return q;
  }
  friend bool operator==(const Query&, const Query&) = default;
};

bool eval_query(const Query& q, const Instance& i);

}  // namespace cqadb
