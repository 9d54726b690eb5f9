#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cqadb/cqa.hpp"
#include "cqadb/oracle.hpp"
#include "cqadb/parser.hpp"
#include "cqadb/repair.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

using namespace cqadb;

namespace {

struct Fixture {
  Schema s;
  std::vector<Constraint> f;
  Instance i;
};

Fixture make(const std::string& schema_text, const std::string& constraint_text,
             const std::string& instance_text) {
  Fixture fx;
  fx.s = parse_schema(schema_text);
  fx.f = parse_constraints(constraint_text, fx.s);
  fx.i = parse_instance(instance_text, fx.s);
  return fx;
}

Instance inst(const Fixture& fx, const std::string& text) {
  return parse_instance(text, fx.s);
}

Fact fact(const Fixture& fx, const std::string& text) {
  return *parse_instance(text + ".", fx.s).begin();
}

// Two-step propagation chain with a key on the middle relation.
Fixture rpq() {
  return make(
      "relation R(a: rat, b: rat, c: rat);\n"
      "relation P(a: rat, b: rat);\n"
      "relation Q(a: rat);\n",
      "R(x,y,z) -> P(x,y);\nP(x,y) -> Q(x);\nfd P: 1 -> 2;\n",
      "R(1,1,1). R(1,2,1). P(1,2). Q(2).");
}

// Chain/location/beverage relation under a two-component join dependency.
Fixture coffee() {
  return make(
      "relation CoffeeShop(chain: sym, location: sym, beverage: sym);\n",
      "jd CoffeeShop: [1,2][1,3];\n",
      "CoffeeShop(Starbucks, 'Delaware Ave.', Latte).\n"
      "CoffeeShop(Starbucks, 'Delaware Ave.', Espresso).\n"
      "CoffeeShop(Starbucks, 'Main Str.', Latte).\n"
      "CoffeeShop(Spot, 'Elmwood Ave.', Latte).\n");
}

// Projection plus a key on the projected relation, two conflicting sources.
Fixture proj_key() {
  return make(
      "relation R(a: rat, b: rat, c: rat);\nrelation P(a: rat, b: rat);\n",
      "R(x,y,z) -> P(x,y);\nfd P: 1 -> 2;\n", "R(1,2,1). R(1,2,2).");
}

// Cascading propagation: the consequent relation feeds its own premises.
Fixture cascade() {
  return make("relation R(a: rat, b: rat);\nrelation P(a: rat);\n",
              "R(x,y), P(x) -> P(y);\n", "R(1,2). R(2,3). P(1).");
}

// Disjunctive (multi-consequent) rule.
Fixture family() {
  return make(
      "relation NF(name: sym, diag: sym);\n"
      "relation Parent(parent: sym, child: sym);\n",
      "fd NF: 1 -> 2;\n"
      "NF(x,'yes'), Parent(y1,x), Parent(y2,x), y1 != y2"
      " -> NF(y1,'yes') | NF(y2,'yes');\n",
      "NF(Steve,no). NF(Mary,no). NF(Donald,yes).\n"
      "Parent(Steve,Donald). Parent(Mary,Donald).\n");
}

using BlockPair = std::pair<Instance, Instance>;

std::vector<Instance> supports(const CqaContext& ctx, const Fixture& fx,
                               const std::string& text) {
  return ctx.supports_of(fact(fx, text));
}

std::vector<BlockPair> blocks(const CqaContext& ctx, const Fixture& fx,
                              const std::string& text) {
  return ctx.blocks_of(fact(fx, text));
}

bool subset(const Instance& small, const Instance& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool disjoint(const Instance& a, const Instance& b) {
  for (const Fact& f : a)
    if (b.count(f)) return false;
  return true;
}

// Checks, against the exhaustively enumerated repairs, that a hull fact is
// in a repair exactly when one of its supports is contained in it, and out
// exactly when some block applies.
void check_tables_characterize_membership(const Fixture& fx) {
  const CqaContext ctx(fx.s, fx.i, fx.f);
  const RepairSet repairs = enumerate_repairs(fx.s, fx.i, fx.f);
  REQUIRE(!repairs.empty());
  for (const Instance& rep : repairs) {
    for (const Fact& t : ctx.grounding().hull()) {
      const bool in = rep.count(t) != 0;
      bool has_support = false;
      for (const Instance& s : ctx.supports_of(t))
        if (subset(s, rep)) {
          has_support = true;
          break;
        }
      bool has_block = false;
      for (const auto& [req, forb] : ctx.blocks_of(t))
        if (subset(req, rep) && disjoint(forb, rep)) {
          has_block = true;
          break;
        }
      CHECK_MESSAGE(in == has_support,
                    to_string(t) << " in " << to_string(rep));
      CHECK_MESSAGE(!in == has_block, to_string(t) << " in " << to_string(rep));
      for (const Instance& s : ctx.supports_of(t))
        CHECK(subset(s, ctx.instance()));
      for (const auto& [req, forb] : ctx.blocks_of(t)) {
        CHECK(subset(req, ctx.instance()));
        CHECK(forb.size() <= 1);
        for (const Fact& nf : forb) CHECK(ctx.instance().count(nf) == 0);
      }
    }
  }
}

// Compares exists_repair against a direct scan of the enumerated repairs for
// every (required, forbidden) pair of single hull facts.
void check_exists_repair_against_enumeration(const Fixture& fx) {
  const CqaContext ctx(fx.s, fx.i, fx.f);
  const RepairSet repairs = enumerate_repairs(fx.s, fx.i, fx.f);
  const Instance hull = ctx.grounding().hull();
  std::vector<Instance> picks{{}};
  for (const Fact& t : hull) picks.push_back({t});
  for (const Instance& req : picks)
    for (const Instance& forb : picks) {
      bool expected = false;
      for (const Instance& rep : repairs)
        if (subset(req, rep) && disjoint(forb, rep)) {
          expected = true;
          break;
        }
      const ExistsRepairResult got = exists_repair(req, forb, ctx);
      CHECK_MESSAGE(got.exists == expected,
                    "required " << to_string(req) << ", forbidden "
                                << to_string(forb));
      if (got.exists) {
        REQUIRE(got.witness.has_value());
        const Instance& rep = got.witness->repair;
        CHECK(std::find(repairs.begin(), repairs.end(), rep) != repairs.end());
        CHECK(subset(req, rep));
        CHECK(disjoint(forb, rep));
        CHECK(subset(got.witness->closure, rep));
      }
    }
}

}  // namespace

TEST_CASE("dependency graph records consequent-to-premise edges") {
  // Four relations with a dependency cycle through S, T, and P.
  const Schema s = parse_schema(
      "relation R(a: rat, b: rat);\nrelation P(a: rat, b: rat);\n"
      "relation T(a: rat, b: rat, c: rat);\nrelation S(a: rat, b: rat, c: rat);\n");
  const std::vector<Constraint> f = parse_constraints(
      "R(x,y), P(y,z) -> S(x,y,z);\n"
      "S(x,y,z) -> T(x,y,z);\n"
      "T(x,y,z) -> P(x,y) | P(y,z);\n",
      s);
  const DependencyGraph g = dependency_graph(f, s);
  REQUIRE(g.nodes == std::vector<std::string>{"P", "R", "S", "T"});
  CHECK(g.has_edge("S", "R"));
  CHECK(g.has_edge("S", "P"));
  CHECK(g.has_edge("T", "S"));
  CHECK(g.has_edge("P", "T"));
  int edge_count = 0;
  for (const auto& row : g.edge)
    for (bool e : row) edge_count += e ? 1 : 0;
  CHECK(edge_count == 4);

  auto at = [&](const std::string& rel) { return g.index_of(rel); };
  CHECK(g.depth[at("R")] == 3);
  CHECK(g.depth[at("P")] == 2);
  CHECK(g.depth[at("S")] == 2);
  CHECK(g.depth[at("T")] == 2);
  CHECK(g.height[at("R")] == 0);
  CHECK(g.height[at("P")] == 3);
  CHECK(g.height[at("S")] == 2);
  CHECK(g.height[at("T")] == 2);
  CHECK(g.h == 3);
  CHECK_FALSE(is_acyclic(g));
}

TEST_CASE("dependency graph handles self-loops, chains, and denial sets") {
  const Fixture cas = cascade();
  const DependencyGraph g1 = dependency_graph(cas.f, cas.s);
  CHECK(g1.has_edge("P", "R"));
  CHECK(g1.has_edge("P", "P"));
  CHECK_FALSE(is_acyclic(g1));
  // The self-loop never extends a simple path.
  CHECK(g1.h == 1);

  const Fixture chain = rpq();
  const DependencyGraph g2 = dependency_graph(chain.f, chain.s);
  CHECK(g2.has_edge("P", "R"));
  CHECK(g2.has_edge("Q", "P"));
  CHECK_FALSE(g2.has_edge("R", "P"));
  CHECK(is_acyclic(g2));
  CHECK(g2.h == 2);
  CHECK(g2.height[g2.index_of("Q")] == 2);
  CHECK(g2.depth[g2.index_of("R")] == 2);

  const Schema s = parse_schema("relation P(a: rat, b: rat);\n");
  const DependencyGraph g3 =
      dependency_graph(parse_constraints("fd P: 1 -> 2;\n", s), s);
  CHECK(g3.h == 0);
  CHECK(is_acyclic(g3));
}

TEST_CASE("join dependency merging folds components pairwise") {
  const Schema s = parse_schema("relation R(a: rat, b: rat, c: rat);\n");

  CHECK(merge_jds(s, "R", {}) ==
        JdSpec{"R", {{0, 1, 2}}});
  const JdSpec ab_bc{"R", {{0, 1}, {1, 2}}};
  CHECK(merge_jds(s, "R", {ab_bc}) == ab_bc);

  const JdSpec ac_bc{"R", {{0, 2}, {1, 2}}};
  const JdSpec merged = merge_jds(s, "R", {ab_bc, ac_bc});
  CHECK(merged == JdSpec{"R", {{0}, {1}, {1, 2}, {2}}});
  // Folding the result in again changes nothing.
  CHECK(merge_jds(s, "R", {merged, ab_bc, ac_bc}) == merged);

  const Schema s2 = parse_schema(
      "relation R(a: rat, b: rat, c: rat);\nrelation P(a: rat, b: rat);\n");
  CHECK_THROWS_AS(merge_jds(s2, "R", {JdSpec{"P", {{0}, {1}}}}),
                  ValidationError);
  CHECK_THROWS_AS(merge_jds(s, "Missing", {}), ValidationError);
}

TEST_CASE("merged join dependencies strengthen, and the context gates losses") {
  const Schema s = parse_schema("relation R(a: rat, b: rat, c: rat);\n");
  // All relations with at most four tuples over a two-value domain.
  std::vector<Fact> tuples;
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      for (int c = 1; c <= 2; ++c)
        tuples.push_back(fact(Fixture{s, {}, {}}, "R(" + std::to_string(a) +
                                                      "," + std::to_string(b) +
                                                      "," + std::to_string(c) +
                                                      ")"));
  auto each_small = [&](const std::function<void(const Instance&)>& cb) {
    int checked = 0;
    for (std::uint32_t m = 0; m < (1u << tuples.size()); ++m) {
      if (std::popcount(m) > 4) continue;
      Instance i;
      for (std::size_t b = 0; b < tuples.size(); ++b)
        if ((m >> b) & 1) i.insert(tuples[b]);
      ++checked;
      cb(i);
    }
    CHECK(checked == 163);
  };
  auto merged_of = [&](const JdSpec& jd1, const JdSpec& jd2) {
    return std::vector<Constraint>{
        make_jd(s, "R", merge_jds(s, "R", {jd1, jd2}).components)};
  };

  // The merged dependency always implies each original: satisfying it keeps
  // the originals satisfied, on every small relation, for both sample pairs.
  const JdSpec ab_bc{"R", {{0, 1}, {1, 2}}};
  const JdSpec ac_bc{"R", {{0, 2}, {1, 2}}};
  const JdSpec a_bc{"R", {{0}, {1, 2}}};
  const JdSpec ab_c{"R", {{0, 1}, {2}}};
  const std::vector<Constraint> sep1 = {make_jd(s, "R", ab_bc.components),
                                        make_jd(s, "R", ac_bc.components)};
  const std::vector<Constraint> mer1 = merged_of(ab_bc, ac_bc);
  each_small([&](const Instance& i) {
    if (satisfies(i, mer1)) CHECK(satisfies(i, sep1));
  });

  // The converse can fail: this relation decomposes over both {ab, bc} and
  // {ac, bc}, yet the combined components {a}{b}{bc}{c} force the product of
  // the a column with the bc pairs, which holds extra tuples.
  Instance witness;
  witness.insert(fact(Fixture{s, {}, {}}, "R(1,2,2)"));
  witness.insert(fact(Fixture{s, {}, {}}, "R(2,1,1)"));
  CHECK(satisfies(witness, sep1));
  CHECK_FALSE(satisfies(witness, mer1));

  // So a context over two such dependencies refuses to combine them.
  CHECK_THROWS_WITH_AS(CqaContext(s, witness, sep1),
                       doctest::Contains("join dependencies"),
                       UnsupportedClassError);

  // When the originals entail their combination, satisfaction is preserved
  // exactly, and the context accepts the pair.
  const std::vector<Constraint> sep2 = {make_jd(s, "R", a_bc.components),
                                        make_jd(s, "R", ab_c.components)};
  const std::vector<Constraint> mer2 = merged_of(a_bc, ab_c);
  each_small([&](const Instance& i) {
    CHECK(satisfies(i, sep2) == satisfies(i, mer2));
  });
  Instance tiny;
  tiny.insert(fact(Fixture{s, {}, {}}, "R(1,1,1)"));
  const CqaContext ctx2(s, tiny, sep2);
  REQUIRE(ctx2.working_constraints().size() == 1);
  CHECK(ctx2.working_constraints()[0].jd->components ==
        std::vector<std::vector<int>>{{0}, {1}, {2}});
}

TEST_CASE("context normalizes constraints and gates unsupported classes") {
  const Fixture fx = rpq();
  const CqaContext ctx(fx.s, fx.i, fx.f);
  CHECK(ctx.height() == 2);
  // Original constraints plus one join dependency per relation.
  const std::vector<Constraint>& fp = ctx.working_constraints();
  REQUIRE(fp.size() == 6);
  int jd_count = 0;
  std::set<std::string> jd_rels;
  for (const Constraint& c : fp)
    if (c.cls() == ConstraintClass::JoinDependency) {
      ++jd_count;
      jd_rels.insert(c.jd->relation);
      // No join dependency was declared, so each relation gets the trivial
      // single-component one.
      REQUIRE(c.jd->components.size() == 1);
      CHECK(static_cast<int>(c.jd->components[0].size()) ==
            fx.s.arity(c.jd->relation));
    }
  CHECK(jd_count == 3);
  CHECK(jd_rels == std::set<std::string>{"P", "Q", "R"});
  CHECK(ctx.original_constraints() == fx.f);
  // The working hull coincides with the plain hull here.
  CHECK(ctx.grounding().hull() == compute_hull(fx.s, fx.i, fx.f).hull());

  const Fixture cyc = cascade();
  CHECK_THROWS_WITH_AS(CqaContext(cyc.s, cyc.i, cyc.f),
                       doctest::Contains("acyclic"), UnsupportedClassError);
  const Fixture fam = family();
  CHECK_THROWS_AS(CqaContext(fam.s, fam.i, fam.f), UnsupportedClassError);
  const GeneratedCase gen = gen_random(3, GenProfile::CyclicTgd);
  CHECK_THROWS_AS(CqaContext(gen.schema, gen.instance, gen.constraints),
                  UnsupportedClassError);

  const Fixture cof = coffee();
  const CqaContext cctx(cof.s, cof.i, cof.f);
  CHECK(cctx.height() == 0);
}

TEST_CASE("support tables match the worked propagation example") {
  const Fixture fx = rpq();
  const CqaContext ctx(fx.s, fx.i, fx.f);

  for (const char* t : {"R(1,1,1)", "R(1,2,1)", "P(1,2)", "Q(2)"})
    CHECK(supports(ctx, fx, t) == std::vector<Instance>{inst(fx, t + std::string("."))});
  CHECK(supports(ctx, fx, "P(1,1)") ==
        std::vector<Instance>{inst(fx, "R(1,1,1).")});
  CHECK(supports(ctx, fx, "Q(1)") ==
        std::vector<Instance>{inst(fx, "P(1,2)."), inst(fx, "R(1,1,1).")});

  // Levelled construction: each round applies one more rule layer.
  CHECK(ctx.supports_of(fact(fx, "Q(1)"), -1).empty());
  CHECK(ctx.supports_of(fact(fx, "Q(1)"), 0) ==
        std::vector<Instance>{inst(fx, "P(1,2).")});
  CHECK(ctx.supports_of(fact(fx, "Q(1)"), 1) ==
        std::vector<Instance>{inst(fx, "P(1,2)."), inst(fx, "R(1,1,1).")});
  CHECK(ctx.supports_of(fact(fx, "Q(1)"), 2) ==
        ctx.supports_of(fact(fx, "Q(1)"), 1));
  CHECK(ctx.supports_of(fact(fx, "P(1,1)"), -1).empty());
  CHECK(ctx.supports_of(fact(fx, "P(1,1)"), 0) ==
        std::vector<Instance>{inst(fx, "R(1,1,1).")});
  CHECK(ctx.supports_of(fact(fx, "Q(2)"), -1) ==
        std::vector<Instance>{inst(fx, "Q(2).")});
}

TEST_CASE("block tables match the worked propagation example") {
  const Fixture fx = rpq();
  const CqaContext ctx(fx.s, fx.i, fx.f);
  const Instance none;

  CHECK(blocks(ctx, fx, "Q(1)") ==
        std::vector<BlockPair>{{none, inst(fx, "Q(1).")}});
  CHECK(blocks(ctx, fx, "P(1,1)") ==
        std::vector<BlockPair>{{none, inst(fx, "P(1,1).")}});
  CHECK(blocks(ctx, fx, "R(1,1,1)") ==
        std::vector<BlockPair>{{none, inst(fx, "P(1,1).")}});
  CHECK(blocks(ctx, fx, "Q(2)").empty());
  const std::vector<BlockPair> keyed = {{none, inst(fx, "Q(1).")},
                                        {inst(fx, "R(1,1,1)."), none}};
  CHECK(blocks(ctx, fx, "P(1,2)") == keyed);
  CHECK(blocks(ctx, fx, "R(1,2,1)") == keyed);

  // Levelled construction: the block of the stored source fact arrives by
  // pushing the projected fact's blocks back through the rule chain.
  const Fact r121 = fact(fx, "R(1,2,1)");
  CHECK(ctx.blocks_of(r121, -1).empty());
  CHECK(ctx.blocks_of(r121, 0) ==
        std::vector<BlockPair>{{inst(fx, "R(1,1,1)."), none}});
  CHECK(ctx.blocks_of(r121, 1) == keyed);
  CHECK(ctx.blocks_of(r121, 2) == keyed);
  CHECK(ctx.blocks_of(fact(fx, "P(1,2)"), -1) ==
        std::vector<BlockPair>{{inst(fx, "R(1,1,1)."), none}});
  CHECK(ctx.blocks_of(fact(fx, "P(1,2)"), 0) == keyed);
}

TEST_CASE("support and block levels grow monotonically") {
  for (const Fixture& fx : {rpq(), coffee(), proj_key()}) {
    const CqaContext ctx(fx.s, fx.i, fx.f);
    for (const Fact& t : ctx.grounding().hull()) {
      for (int level = 0; level <= ctx.height(); ++level) {
        const auto prev_s = ctx.supports_of(t, level - 1);
        const auto cur_s = ctx.supports_of(t, level);
        CHECK(std::includes(cur_s.begin(), cur_s.end(), prev_s.begin(),
                            prev_s.end()));
        const auto prev_b = ctx.blocks_of(t, level - 1);
        const auto cur_b = ctx.blocks_of(t, level);
        for (const auto& b : prev_b)
          CHECK(std::find(cur_b.begin(), cur_b.end(), b) != cur_b.end());
      }
      CHECK_THROWS_AS(ctx.supports_of(t, ctx.height() + 1), ValidationError);
      CHECK_THROWS_AS(ctx.blocks_of(t, -2), ValidationError);
    }
  }
}

TEST_CASE("supports and blocks characterize repair membership") {
  check_tables_characterize_membership(rpq());
  check_tables_characterize_membership(coffee());
  check_tables_characterize_membership(proj_key());
  for (const GenProfile profile :
       {GenProfile::DenialOnly, GenProfile::AcyclicTgd,
        GenProfile::AcyclicTgdJd})
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const GeneratedCase c = gen_random(seed, profile, 12);
      check_tables_characterize_membership(
          Fixture{c.schema, c.constraints, c.instance});
    }
}

TEST_CASE("exists-repair decides the worked combinations") {
  const Fixture fx = rpq();
  const CqaContext ctx(fx.s, fx.i, fx.f);

  // Keeping R(1,1,1) forces Q(1) into the closure.
  CHECK_FALSE(
      exists_repair(inst(fx, "R(1,1,1)."), inst(fx, "Q(1)."), ctx).exists);
  // Q(2) has no block at all.
  CHECK_FALSE(
      exists_repair(inst(fx, "P(1,2)."), inst(fx, "Q(2)."), ctx).exists);
  // Every way of blocking R(1,2,1) clashes with keeping P(1,2).
  CHECK_FALSE(
      exists_repair(inst(fx, "P(1,2)."), inst(fx, "R(1,2,1)."), ctx).exists);

  const ExistsRepairResult hit =
      exists_repair(inst(fx, "P(1,1)."), inst(fx, "R(1,2,1)."), ctx);
  REQUIRE(hit.exists);
  REQUIRE(hit.witness.has_value());
  const RepairWitness& w = *hit.witness;
  REQUIRE(w.supports.size() == 1);
  CHECK(w.supports[0].first == fact(fx, "P(1,1)"));
  CHECK(w.supports[0].second == inst(fx, "R(1,1,1)."));
  REQUIRE(w.blocks.size() == 1);
  CHECK(std::get<0>(w.blocks[0]) == fact(fx, "R(1,2,1)"));
  CHECK(std::get<1>(w.blocks[0]) == inst(fx, "R(1,1,1)."));
  CHECK(std::get<2>(w.blocks[0]).empty());
  CHECK(w.closure == inst(fx, "R(1,1,1). P(1,1). Q(1)."));
  CHECK(w.repair == inst(fx, "R(1,1,1). P(1,1). Q(1). Q(2)."));

  // No wishes at all: some repair always exists.
  const ExistsRepairResult any = exists_repair({}, {}, ctx);
  REQUIRE(any.exists);
  REQUIRE(any.witness.has_value());
  CHECK(check_repair(fx.s, fx.i, any.witness->repair, fx.f).verdict);
  // Required facts outside the hull are unreachable; forbidden ones are
  // absent from every repair anyway.
  CHECK_FALSE(exists_repair(inst(fx, "P(3,3)."), {}, ctx).exists);
  CHECK(exists_repair(inst(fx, "Q(2)."), inst(fx, "P(3,3)."), ctx).exists);
}

TEST_CASE("exists-repair agrees with enumeration and yields real repairs") {
  check_exists_repair_against_enumeration(rpq());
  check_exists_repair_against_enumeration(coffee());
  check_exists_repair_against_enumeration(proj_key());
  for (const GenProfile profile :
       {GenProfile::DenialOnly, GenProfile::AcyclicTgdJd})
    for (std::uint64_t seed = 5; seed <= 7; ++seed) {
      const GeneratedCase c = gen_random(seed, profile, 10);
      check_exists_repair_against_enumeration(
          Fixture{c.schema, c.constraints, c.instance});
    }
}

TEST_CASE("query normal form distributes, dedups, and caps") {
  const Fixture fx = rpq();
  auto q = [&](const std::string& text) { return parse_query(text, fx.s); };

  std::vector<CnfClause> one = to_cnf(q("Q(1)"));
  REQUIRE(one.size() == 1);
  CHECK(one[0].plus == std::vector<Fact>{fact(fx, "Q(1)")});
  CHECK(one[0].minus.empty());

  std::vector<CnfClause> neg = to_cnf(q("not (Q(1) and Q(2))"));
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].plus.empty());
  CHECK(neg[0].minus ==
        std::vector<Fact>{fact(fx, "Q(1)"), fact(fx, "Q(2)")});

  std::vector<CnfClause> four =
      to_cnf(q("Q(1) and P(1,1) or Q(2) and P(1,2)"));
  REQUIRE(four.size() == 4);
  CHECK(four[0].plus ==
        std::vector<Fact>{fact(fx, "Q(1)"), fact(fx, "Q(2)")});
  CHECK(four[3].plus ==
        std::vector<Fact>{fact(fx, "P(1,1)"), fact(fx, "P(1,2)")});

  CHECK(to_cnf(q("Q(1) or not Q(1)")).empty());
  CHECK(to_cnf(q("true")).empty());
  REQUIRE(to_cnf(q("false")).size() == 1);
  CHECK(to_cnf(q("false"))[0].plus.empty());
  CHECK(to_cnf(q("(Q(1) or Q(2)) and (Q(1) or Q(2))")).size() == 1);

  CHECK_THROWS_AS(to_cnf(q("Q(1) and P(1,1) or Q(2) and P(1,2)"), 3),
                  CapExceededError);
  // Thirteen two-fact conjunctions under a disjunction distribute into 2^13
  // clauses, beyond the default cap.
  const Schema ts = parse_schema("relation T(a: rat);\n");
  std::vector<Query> kids;
  for (int k = 0; k < 13; ++k)
    kids.push_back(Query::conj(
        {Query::atom({"T", {Value::rational(2 * k)}}),
         Query::atom({"T", {Value::rational(2 * k + 1)}})}));
  CHECK_THROWS_AS(to_cnf(Query::disj(kids)), CapExceededError);
  CHECK(to_cnf(Query::disj(kids), 10000).size() == 8192);
}

TEST_CASE("consistent answers match the exhaustive oracle") {
  const Fixture fx = rpq();
  const CqaContext ctx(fx.s, fx.i, fx.f);

  // Conjunction of per-repair obligations; the third conjunct fails in the
  // repair that keeps R(1,1,1).
  const Query mixed = parse_query(
      "(Q(1) or not R(1,1,1)) and (Q(2) or not P(1,2)) and "
      "(R(1,2,1) or not P(1,1))",
      fx.s);
  CHECK_FALSE(brute_cqa(mixed, fx.s, fx.i, fx.f));
  const CqaOutcome out = cqa_explain(mixed, ctx);
  CHECK_FALSE(out.consistently_true);
  CHECK(out.failing_clause == 2);
  REQUIRE(out.witness.has_value());
  CHECK(out.witness->repair == inst(fx, "R(1,1,1). P(1,1). Q(1). Q(2)."));
  CHECK_FALSE(eval_query(mixed, out.witness->repair));

  // Swapping the last conjunct's negated fact makes every conjunct hold in
  // every repair.
  const Query variant = parse_query(
      "(Q(1) or not R(1,1,1)) and (Q(2) or not P(1,2)) and "
      "(R(1,2,1) or not P(1,2))",
      fx.s);
  CHECK(brute_cqa(variant, fx.s, fx.i, fx.f));
  CHECK(cqa_explain(variant, ctx).consistently_true);

  CHECK(cqa(parse_query("true", fx.s), fx.s, fx.i, fx.f));
  CHECK_FALSE(cqa(parse_query("false", fx.s), fx.s, fx.i, fx.f));
  CHECK(cqa(parse_query("Q(2)", fx.s), fx.s, fx.i, fx.f));
  CHECK_FALSE(cqa(parse_query("Q(1)", fx.s), fx.s, fx.i, fx.f));

  // A fact pair conflicting under a key: neither survives everywhere, their
  // disjunction does.
  const Fixture two = make("relation T(a: rat, b: rat);\n", "fd T: 1 -> 2;\n",
                           "T(1,1). T(1,2).");
  CHECK_FALSE(cqa(parse_query("T(1,1)", two.s), two.s, two.i, two.f));
  CHECK(cqa(parse_query("T(1,1) or T(1,2)", two.s), two.s, two.i, two.f));
  CHECK(brute_cqa(parse_query("T(1,1) or T(1,2)", two.s), two.s, two.i, two.f));

  // Every hull fact of the join-dependency fixture, as an atomic query.
  const Fixture cof = coffee();
  for (const Fact& t : CqaContext(cof.s, cof.i, cof.f).grounding().hull()) {
    const Query atom = Query::atom(t);
    CHECK(cqa(atom, cof.s, cof.i, cof.f) ==
          brute_cqa(atom, cof.s, cof.i, cof.f));
  }

  for (const GenProfile profile :
       {GenProfile::DenialOnly, GenProfile::AcyclicTgd,
        GenProfile::AcyclicTgdJd})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GeneratedCase c = gen_random(seed, profile, 12);
      for (std::uint64_t qseed = 1; qseed <= 3; ++qseed) {
        const Query rq = gen_random_query(seed * 100 + qseed, c);
        CHECK_MESSAGE(cqa(rq, c.schema, c.instance, c.constraints) ==
                          brute_cqa(rq, c.schema, c.instance, c.constraints),
                      "profile " << static_cast<int>(profile) << " seed "
                                 << seed << " qseed " << qseed);
      }
    }
}

TEST_CASE("woven join rules are closed under substitution") {
  std::vector<Fixture> cases = {coffee()};
  // Two join dependencies on one relation whose combination they entail; the
  // context folds them into the fully decomposed {a}{b}{c} dependency.
  cases.push_back(make("relation R(a: rat, b: rat, c: rat);\n",
                       "jd R: [1][2,3];\njd R: [1,2][3];\n",
                       "R(1,1,1). R(1,2,2)."));
  for (std::uint64_t seed = 11; seed <= 14; ++seed) {
    const GeneratedCase c = gen_random(seed, GenProfile::AcyclicTgdJd, 12);
    cases.push_back(Fixture{c.schema, c.constraints, c.instance});
  }
  for (const Fixture& fx : cases) {
    const CqaContext ctx(fx.s, fx.i, fx.f);
    const Grounding& g = ctx.grounding();
    std::set<std::tuple<std::vector<int>, int>> jd_rules;
    for (const GroundRule& r : g.rules)
      if (r.from_jd && r.rhs.size() == 1) jd_rules.insert({r.lhs, r.rhs[0]});
    int woven_checked = 0;
    for (const GroundRule& inner : g.rules) {
      if (!inner.from_jd || inner.rhs.size() != 1) continue;
      for (const GroundRule& outer : g.rules) {
        if (!outer.from_jd || outer.rhs.size() != 1) continue;
        if (outer.origin != inner.origin) continue;
        for (std::size_t pos = 0; pos < outer.matched.size(); ++pos) {
          if (outer.matched[pos] != inner.rhs[0]) continue;
          // Replace the premise the inner rule derives with the inner
          // rule's premise at the same position.
          std::vector<int> woven = outer.matched;
          woven[pos] = inner.matched[pos];
          std::sort(woven.begin(), woven.end());
          woven.erase(std::unique(woven.begin(), woven.end()), woven.end());
          ++woven_checked;
          CHECK(jd_rules.count({woven, outer.rhs[0]}) == 1);
        }
      }
    }
    CHECK(woven_checked > 0);
  }
}

TEST_CASE("accessors validate facts and levels") {
  const Fixture fx = rpq();
  const CqaContext ctx(fx.s, fx.i, fx.f);
  CHECK_THROWS_WITH_AS(ctx.supports_of(fact(fx, "Q(9)")),
                       doctest::Contains("not a hull fact"), ValidationError);
  CHECK_THROWS_AS(ctx.blocks_of(fact(fx, "Q(9)")), ValidationError);
  Fact bad{"Q", {Value::rational(1), Value::rational(2)}};
  CHECK_THROWS_AS(ctx.supports_of(bad), ValidationError);
  CHECK_THROWS_AS(exists_repair({bad}, {}, ctx), ValidationError);
}
