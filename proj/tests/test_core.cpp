#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cqadb/core.hpp"

using namespace cqadb;

namespace {

Schema rp_schema() {
  Schema s;
  s.add_relation("R", {{"a", AttrKind::Rational}, {"b", AttrKind::Rational}});
  s.add_relation("P", {{"a", AttrKind::Rational}});
  return s;
}

Fact fact(std::string rel, std::vector<long long> vals) {
  Fact f;
  f.relation = std::move(rel);
  for (long long v : vals) f.tuple.push_back(Value::rational(v));
  return f;
}

// R(x,y), P(x) -> P(y)
Constraint tgd_rp() {
  Constraint c;
  c.lhs = {Atom{"R", {Term::variable("x"), Term::variable("y")}},
           Atom{"P", {Term::variable("x")}}};
  c.rhs = {Atom{"P", {Term::variable("y")}}};
  return c;
}

const Instance kI = {fact("R", {1, 2}), fact("R", {2, 3}), fact("P", {1})};

}  // namespace

TEST_CASE("values: rationals sort before symbols, both exactly") {
  CHECK(Value::rational(1, 2) < Value::rational(2, 3));
  CHECK(Value::rational(-5) < Value::rational(0));
  CHECK(Value::rational(2, 4) == Value::rational(1, 2));
  CHECK(Value::symbol("a") < Value::symbol("b"));
  CHECK(Value::rational(1000000) < Value::symbol("a"));
  CHECK_FALSE(Value::symbol("a") < Value::rational(1000000));
}

TEST_CASE("values: printing") {
  CHECK(to_string(Value::rational(3)) == "3");
  CHECK(to_string(Value::rational(-1, 2)) == "-1/2");
  CHECK(to_string(Value::rational(4, 2)) == "2");
  CHECK(to_string(Value::symbol("yes")) == "yes");
  CHECK(to_string(Value::symbol("two words")) == "'two words'");
  CHECK(to_string(Value::symbol("true")) == "'true'");
}

TEST_CASE("instances iterate and print in canonical order") {
  CHECK(to_string(kI) == "P(1), R(1,2), R(2,3)");
  Literal neg{fact("P", {2}), false};
  CHECK(to_string(neg) == "!P(2)");
  Literal pos{fact("P", {2}), true};
  CHECK(pos < neg);  // positive literal first
}

TEST_CASE("schema validation") {
  Schema s = rp_schema();
  CHECK(s.arity("R") == 2);
  CHECK_THROWS_AS(s.attrs("Z"), ValidationError);
  CHECK_THROWS_AS(s.add_relation("R", {{"a", AttrKind::Rational}}),
                  ValidationError);
  CHECK_THROWS_AS(s.add_relation("Z", {}), ValidationError);
  CHECK_THROWS_AS(
      s.add_relation("Z", {{"a", AttrKind::Rational}, {"a", AttrKind::Symbol}}),
      ValidationError);
}

TEST_CASE("fact validation checks arity and attribute kinds") {
  Schema s = rp_schema();
  CHECK_NOTHROW(validate_fact(s, fact("R", {1, 2})));
  CHECK_THROWS_AS(validate_fact(s, fact("R", {1})), ValidationError);
  Fact bad;
  bad.relation = "P";
  bad.tuple = {Value::symbol("x")};
  CHECK_THROWS_AS(validate_fact(s, bad), ValidationError);
  CHECK_THROWS_AS(validate_fact(s, fact("Z", {1})), ValidationError);
}

TEST_CASE("symmetric difference and relative proximity") {
  Instance i1 = kI;
  Instance closer = kI;
  closer.erase(fact("P", {1}));  // delta = {P(1)}
  Instance farther = kI;
  farther.insert(fact("P", {2}));
  farther.insert(fact("P", {3}));  // delta = {P(2), P(3)}

  CHECK(symmetric_difference(kI, closer) == Instance{fact("P", {1})});
  CHECK(symmetric_difference(closer, kI) == Instance{fact("P", {1})});
  CHECK(closer_than(kI, kI, farther) == DeltaOrder::Less);
  CHECK(closer_than(kI, farther, kI) == DeltaOrder::Greater);
  CHECK(closer_than(kI, farther, farther) == DeltaOrder::Equal);
  // Disjoint nonempty differences are incomparable in either direction.
  CHECK(closer_than(kI, closer, farther) == DeltaOrder::Incomparable);
  CHECK(closer_than(kI, farther, closer) == DeltaOrder::Incomparable);
}

TEST_CASE("built-in comparisons evaluate exactly and reject bad operands") {
  Binding b;
  b.emplace("x", Value::rational(1, 2));
  b.emplace("y", Value::rational(2, 4));
  b.emplace("s", Value::symbol("a"));
  b.emplace("t", Value::symbol("b"));
  auto v = [](const char* n) { return Term::variable(n); };

  CHECK(eval_builtin(Guard::cmp(CmpOp::Eq, v("x"), v("y")), b));
  CHECK_FALSE(eval_builtin(Guard::cmp(CmpOp::Lt, v("x"), v("y")), b));
  CHECK(eval_builtin(Guard::cmp(CmpOp::Le, v("x"), v("y")), b));
  CHECK(eval_builtin(Guard::cmp(CmpOp::Ne, v("s"), v("t")), b));
  CHECK_THROWS_AS(eval_builtin(Guard::cmp(CmpOp::Lt, v("s"), v("t")), b),
                  ValidationError);
  CHECK_THROWS_AS(eval_builtin(Guard::cmp(CmpOp::Eq, v("x"), v("s")), b),
                  ValidationError);
  CHECK_THROWS_AS(eval_builtin(Guard::cmp(CmpOp::Eq, v("x"), v("zz")), b),
                  ValidationError);

  Guard nested = Guard::conj(
      {Guard::cmp(CmpOp::Ne, v("s"), v("t")),
       Guard::negation(Guard::disj({Guard::falsity(),
                                    Guard::cmp(CmpOp::Gt, v("x"), v("y"))}))});
  CHECK(eval_builtin(nested, b));
}

TEST_CASE("functional dependencies desugar to guarded denials") {
  Schema s = rp_schema();
  Constraint c = make_fd(s, "R", {0}, {1});
  CHECK(c.cls() == ConstraintClass::Denial);
  CHECK(c.lhs.size() == 2);
  CHECK(c.rhs.empty());
  REQUIRE(c.fd.has_value());

  Instance bad = {fact("R", {1, 2}), fact("R", {1, 3})};
  CHECK_FALSE(satisfies(bad, {c}));
  auto w = find_violation(bad, {c});
  REQUIRE(w.has_value());
  CHECK(w->constraint_index == 0);
  CHECK(w->rhs_facts.empty());
  CHECK(to_string(*w) == "R(1,2), R(1,3) -> false");

  Instance ok = {fact("R", {1, 2}), fact("R", {2, 2})};
  CHECK(satisfies(ok, {c}));
}

TEST_CASE("functional dependency with rhs inside lhs never fires") {
  Schema s = rp_schema();
  Constraint c = make_fd(s, "R", {0, 1}, {1});
  CHECK(c.guard.kind == Guard::Kind::False);
  Instance any = {fact("R", {1, 2}), fact("R", {1, 3})};
  CHECK(satisfies(any, {c}));
}

TEST_CASE("functional dependency over several dependent positions") {
  Schema s;
  s.add_relation("T", {{"a", AttrKind::Rational},
                       {"b", AttrKind::Rational},
                       {"c", AttrKind::Rational}});
  Constraint c = make_fd(s, "T", {0}, {1, 2});
  Instance bad = {fact("T", {1, 2, 3}), fact("T", {1, 2, 4})};
  CHECK_FALSE(satisfies(bad, {c}));
  Instance ok = {fact("T", {1, 2, 3}), fact("T", {2, 2, 4})};
  CHECK(satisfies(ok, {c}));
}

TEST_CASE("join dependencies desugar to shared-variable rules") {
  Schema s;
  s.add_relation("T", {{"a", AttrKind::Rational},
                       {"b", AttrKind::Rational},
                       {"c", AttrKind::Rational}});
  Constraint c = make_jd(s, "T", {{0, 1}, {1, 2}});
  CHECK(c.cls() == ConstraintClass::JoinDependency);
  CHECK(c.lhs.size() == 2);
  REQUIRE(c.rhs.size() == 1);
  CHECK(c.rhs[0].args.size() == 3);

  Instance bad = {fact("T", {1, 1, 2}), fact("T", {2, 1, 1})};
  auto w = find_violation(bad, {c});
  REQUIRE(w.has_value());
  CHECK(w->rhs_facts == std::vector<Fact>{fact("T", {1, 1, 1})});

  // One component covering every attribute gives the trivial reflexive rule.
  Constraint triv = make_jd(s, "T", {{0, 1, 2}});
  CHECK(triv.lhs.size() == 1);
  CHECK(triv.lhs == triv.rhs);
  CHECK(satisfies(bad, {triv}));

  CHECK_THROWS_AS(make_jd(s, "T", {{0, 1}}), ValidationError);
  Constraint dedup = make_jd(s, "T", {{0, 1}, {0, 1}, {1, 2}});
  CHECK(dedup.jd->components.size() == 2);
}

TEST_CASE("constraint validation") {
  Schema s = rp_schema();
  Constraint empty_lhs;
  empty_lhs.rhs = {Atom{"P", {Term::constant(Value::rational(1))}}};
  CHECK_THROWS_AS(validate_constraint(s, empty_lhs), ValidationError);

  Constraint unsafe;
  unsafe.lhs = {Atom{"P", {Term::variable("x")}}};
  unsafe.rhs = {Atom{"R", {Term::variable("x"), Term::variable("y")}}};
  CHECK_THROWS_WITH_AS(validate_constraint(s, unsafe),
                       doctest::Contains("unsafe variable 'y'"),
                       ValidationError);

  Constraint guard_unsafe;
  guard_unsafe.lhs = {Atom{"P", {Term::variable("x")}}};
  guard_unsafe.guard = Guard::cmp(CmpOp::Lt, Term::variable("z"),
                                  Term::constant(Value::rational(1)));
  CHECK_THROWS_WITH_AS(validate_constraint(s, guard_unsafe),
                       doctest::Contains("unsafe variable 'z'"),
                       ValidationError);

  Schema sym;
  sym.add_relation("S", {{"n", AttrKind::Symbol}});
  Constraint mixed;
  mixed.lhs = {Atom{"S", {Term::variable("x")}}};
  mixed.guard = Guard::cmp(CmpOp::Eq, Term::variable("x"),
                           Term::constant(Value::rational(1)));
  CHECK_THROWS_AS(validate_constraint(sym, mixed), ValidationError);

  Constraint ordered_sym;
  ordered_sym.lhs = {Atom{"S", {Term::variable("x")}}};
  ordered_sym.guard = Guard::cmp(CmpOp::Lt, Term::variable("x"),
                                 Term::constant(Value::symbol("a")));
  CHECK_THROWS_AS(validate_constraint(sym, ordered_sym), ValidationError);

  Constraint bad_arity;
  bad_arity.lhs = {Atom{"R", {Term::variable("x")}}};
  CHECK_THROWS_AS(validate_constraint(s, bad_arity), ValidationError);

  CHECK_NOTHROW(validate_constraint(s, tgd_rp()));
}

TEST_CASE("the empty instance satisfies every constraint set") {
  Schema s = rp_schema();
  std::vector<Constraint> f = {tgd_rp(), make_fd(s, "R", {0}, {1})};
  CHECK(satisfies({}, f));
  CHECK_FALSE(find_violation({}, f).has_value());
}

TEST_CASE("first violation is reported in canonical order") {
  std::vector<Constraint> f = {tgd_rp()};
  CHECK_FALSE(satisfies(kI, f));
  auto w = find_violation(kI, f);
  REQUIRE(w.has_value());
  CHECK(w->lhs_facts == std::vector<Fact>{fact("R", {1, 2}), fact("P", {1})});
  CHECK(w->rhs_facts == std::vector<Fact>{fact("P", {2})});
  CHECK(to_string(*w) == "R(1,2), P(1) -> P(2)");

  Instance fixed = kI;
  fixed.insert(fact("P", {2}));
  fixed.insert(fact("P", {3}));
  CHECK(satisfies(fixed, f));
}

TEST_CASE("grounding enumeration respects guards and supports early stop") {
  Schema s = rp_schema();
  Constraint c = make_fd(s, "R", {0}, {1});
  Instance i = {fact("R", {1, 2}), fact("R", {1, 3}), fact("R", {2, 2})};
  int count = 0;
  for_each_grounding(i, c, [&](const std::vector<Fact>&,
                               const std::vector<Fact>&) {
    ++count;
    return true;
  });
  CHECK(count == 2);  // (R(1,2),R(1,3)) and (R(1,3),R(1,2))
  count = 0;
  for_each_grounding(i, c, [&](const std::vector<Fact>&,
                               const std::vector<Fact>&) {
    ++count;
    return false;
  });
  CHECK(count == 1);
}

TEST_CASE("closed queries evaluate classically") {
  Query q = Query::conj(
      {Query::atom(fact("R", {1, 2})),
       Query::negation(Query::atom(fact("P", {2}))),
       Query::disj({Query::atom(fact("P", {1})), Query::falsity()})});
  CHECK(eval_query(q, kI));
  Instance other = {fact("R", {1, 2}), fact("P", {2})};
  CHECK_FALSE(eval_query(q, other));
  CHECK(eval_query(Query::truth(), {}));
  CHECK_FALSE(eval_query(Query::falsity(), kI));
}
