#include "cqadb/oracle.hpp"

#include "cqadb/consequence.hpp"
#include "cqadb/grounding.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cqadb {

namespace {

using Mask = std::uint64_t;

Mask to_mask(const FactSet& s) {
  Mask m = 0;
  for (auto b = s.find_first(); b != FactSet::npos; b = s.find_next(b))
    m |= Mask(1) << b;
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

RepairSet enumerate_repairs(const Schema& s, const Instance& i,
                            const std::vector<Constraint>& f,
                            std::size_t cap) {
  Grounding g = compute_hull(s, i, f);
  const std::size_t n = static_cast<std::size_t>(g.table.size());
  if (n > cap)
    throw CapExceededError("positive hull has " + std::to_string(n) +
                           " facts, above the enumeration cap of " +
                           std::to_string(cap));
  if (n > 62)
    throw CapExceededError("positive hull has " + std::to_string(n) +
                           " facts, above the 62-fact enumeration limit");

  // Walk all subsets flipping one fact at a time, keeping per-rule counters;
  // a rule is violated when its whole left side is present and no
  // consequent fact is.
  const auto& rules = g.rules;
  std::vector<int> lhs_missing(rules.size()), rhs_present(rules.size());
  std::vector<std::vector<int>> lhs_adj(n), rhs_adj(n);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    lhs_missing[r] = static_cast<int>(rules[r].lhs.size());
    for (int v : rules[r].lhs) lhs_adj[v].push_back(static_cast<int>(r));
    for (int v : rules[r].rhs) rhs_adj[v].push_back(static_cast<int>(r));
  }
  int violated = 0;
  auto bump = [&](int r, int dl, int dr) {
    bool was = lhs_missing[r] == 0 && rhs_present[r] == 0;
    lhs_missing[r] += dl;
    rhs_present[r] += dr;
    bool now = lhs_missing[r] == 0 && rhs_present[r] == 0;
    violated += static_cast<int>(now) - static_cast<int>(was);
  };

  std::vector<Mask> sat;
  Mask cur = 0;
  if (violated == 0) sat.push_back(cur);
  const Mask last = (n == 0) ? 0 : ((Mask(1) << n) - 1);
  for (Mask k = 1; k <= last && last != 0; ++k) {
    const int b = std::countr_zero(k);
    cur ^= Mask(1) << b;
    const bool in = (cur >> b) & 1;
    for (int r : lhs_adj[b]) bump(r, in ? -1 : 1, 0);
    for (int r : rhs_adj[b]) bump(r, 0, in ? 1 : -1);
    if (violated == 0) sat.push_back(cur);
  }

  // Keep the candidates whose difference from i is inclusion-minimal.
  const Mask imask = to_mask(g.inst);
  std::vector<std::pair<Mask, Mask>> by_delta;
  by_delta.reserve(sat.size());
  for (Mask m : sat) by_delta.emplace_back(m ^ imask, m);
  std::sort(by_delta.begin(), by_delta.end(),
            [](const std::pair<Mask, Mask>& a, const std::pair<Mask, Mask>& b) {
              const int pa = std::popcount(a.first);
              const int pb = std::popcount(b.first);
              if (pa != pb) return pa < pb;
              return a.first < b.first;
            });
  std::vector<Mask> kept;
  RepairSet out;
  for (const auto& [d, m] : by_delta) {
    bool dominated = false;
    for (Mask kd : kept)
      if ((kd & ~d) == 0) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    kept.push_back(d);
    FactSet fs = g.table.empty_set();
    for (std::size_t b = 0; b < n; ++b)
      if ((m >> b) & 1) fs.set(b);
    out.push_back(g.table.to_instance(fs));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool brute_cqa(const Query& q, const Schema& s, const Instance& i,
               const std::vector<Constraint>& f, std::size_t cap) {
  for (const Instance& r : enumerate_repairs(s, i, f, cap))
    if (!eval_query(q, r)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Branch-and-prune search for a repair avoiding given facts
// ---------------------------------------------------------------------------

namespace {

// Searches over subsets K of the instance; the candidate is the forced-fact
// closure of K.  Prunes a branch when the closure trips a denial, reaches an
// avoided or discarded fact, or leaves some discarded fact without any rule
// that could still excuse its absence at a leaf.
class AvoidSearch {
 public:
  AvoidSearch(const Grounding& g, FactSet avoid_hull,
              const std::vector<int>& avoid_inst)
      : g_(g), idx_(g), clo_(idx_), avoid_hull_(std::move(avoid_hull)) {
    const int n = g_.table.size();
    state_.assign(n, UNDEC);
    is_inst_.assign(n, 0);
    for (auto b = g_.inst.find_first(); b != FactSet::npos;
         b = g_.inst.find_next(b)) {
      ifacts_.push_back(static_cast<int>(b));
      is_inst_[b] = 1;
    }
    lhs_adj_.assign(n, {});
    for (std::size_t r = 0; r < g_.rules.size(); ++r)
      for (int v : g_.rules[r].lhs) lhs_adj_[v].push_back(static_cast<int>(r));
    clo_.reset(g_.table.empty_set());
    for (int v : avoid_inst) {
      state_[v] = OUT;
      out_.push_back(v);
    }
  }

  bool run() { return dfs(); }

 private:
  enum : signed char { UNDEC = 0, IN = 1, OUT = 2 };

  // Closure of everything not yet discarded: an upper bound for the closure
  // of every candidate below the current node.
  FactSet potential_closure() const {
    FactSet base = g_.inst;
    for (int v : out_) base.reset(v);
    return idx_.closure(base);
  }

  // A discarded fact stays excusable only while some rule mentions it on the
  // left, the rest of that left side is still reachable, and firing the rule
  // would either trip a denial or force a fact the candidate lacks.
  bool all_excusable(const FactSet& pot) const {
    for (int v : out_) {
      bool alive = false;
      for (int r : lhs_adj_[v]) {
        const GroundRule& rule = g_.rules[r];
        if (!rule.rhs.empty() && clo_.contains(rule.rhs[0])) continue;
        bool reachable = true;
        for (int l : rule.lhs)
          if (l != v && !pot.test(l)) {
            reachable = false;
            break;
          }
        if (reachable) {
          alive = true;
          break;
        }
      }
      if (!alive) return false;
    }
    return true;
  }

  // At a leaf the candidate is consistent and equals the closure of its
  // instance part; it is a repair iff re-adding any discarded fact either
  // trips a denial or forces a fact beyond the instance and the candidate.
  bool leaf_is_repair() {
    const FactSet& c = clo_.facts();
    for (int v : out_) {
      FactSet j2 = c;
      j2.set(v);
      idx_.closure_into(j2);
      if (g_.violated_rule(j2) >= 0) continue;
      FactSet extra = j2;
      extra -= c;
      extra -= g_.inst;
      if (extra.any()) continue;
      return false;
    }
    return true;
  }

  bool dfs() {
    const FactSet& c = clo_.facts();
    std::vector<int> forced;
    auto fail = [&] {
      for (int v : forced) state_[v] = UNDEC;
      return false;
    };
    if (g_.violated_rule(c) >= 0) return fail();
    if (c.intersects(avoid_hull_)) return fail();
    // Instance facts already in the closure are committed: discarding them
    // later could never produce a closure-of-its-instance-part candidate.
    for (auto b = c.find_first(); b != FactSet::npos; b = c.find_next(b)) {
      if (!is_inst_[b] || state_[b] == IN) continue;
      if (state_[b] == OUT) return fail();
      state_[b] = IN;
      forced.push_back(static_cast<int>(b));
    }
    if (!all_excusable(potential_closure())) return fail();

    int pick = -1;
    for (int v : ifacts_)
      if (state_[v] == UNDEC) {
        pick = v;
        break;
      }
    if (pick < 0) return leaf_is_repair() ? true : fail();

    const int mark = clo_.add(pick);
    state_[pick] = IN;
    if (dfs()) return true;
    clo_.undo(mark);

    state_[pick] = OUT;
    out_.push_back(pick);
    if (dfs()) return true;
    out_.pop_back();
    state_[pick] = UNDEC;
    return fail();
  }

  const Grounding& g_;
  TgdIndex idx_;
  IncrementalClosure clo_;
  FactSet avoid_hull_;
  std::vector<signed char> state_;
  std::vector<char> is_inst_;
  std::vector<int> ifacts_;
  std::vector<int> out_;
  std::vector<std::vector<int>> lhs_adj_;
};

}  // namespace

bool exists_repair_avoiding(const Schema& s, const Instance& i,
                            const std::vector<Constraint>& f,
                            const Instance& avoid) {
  for (const Constraint& c : f)
    if (c.cls() == ConstraintClass::GeneralUniversal)
      throw UnsupportedClassError(
          "the avoiding-repair search supports only denial and "
          "single-consequent constraints");
  validate_instance(s, avoid);
  Grounding g = compute_hull(s, i, f);
  FactSet avoid_hull = g.table.empty_set();
  std::vector<int> avoid_inst;
  for (const Fact& fa : avoid) {
    const int id = g.table.find(fa);
    if (id < 0) continue;  // outside the hull: no repair can contain it
    if (g.inst.test(id))
      avoid_inst.push_back(id);
    else
      avoid_hull.set(id);
  }
  AvoidSearch search(g, std::move(avoid_hull), avoid_inst);
  return search.run();
}

// ---------------------------------------------------------------------------
// Graph 3-coloring encoding
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<int, int>> normalized_edges(const Graph& g,
                                                  bool forbid_isolated) {
  if (g.n < 1) throw ValidationError("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  std::vector<char> touched(static_cast<std::size_t>(g.n) + 1, 0);
  for (const auto& [u, v] : g.edges) {
    if (u < 1 || u > g.n || v < 1 || v > g.n)
      throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loops are not allowed");
    const int a = std::min(u, v), b = std::max(u, v);
    if (!seen.insert({a, b}).second) throw ValidationError("duplicate edge");
    touched[u] = touched[v] = 1;
  }
  if (forbid_isolated)
    for (int v = 1; v <= g.n; ++v)
      if (!touched[v])
        throw ValidationError("vertex " + std::to_string(v) + " is isolated");
  return {seen.begin(), seen.end()};
}

Value rat(long long x) { return Value::rational(x); }

Fact color_fact(long long a, long long b, long long c, long long d) {
  return Fact{"R", {rat(a), rat(b), rat(c), rat(d)}};
}

}  // namespace

Reduction reduce_3col(const Graph& g) {
  const auto edges = normalized_edges(g, /*forbid_isolated=*/true);
  const int m = static_cast<int>(edges.size());

  Reduction red;
  red.schema.add_relation("R", {{"a", AttrKind::Rational},
                                {"b", AttrKind::Rational},
                                {"c", AttrKind::Rational},
                                {"d", AttrKind::Rational}});
  red.schema.add_relation("P", {{"c", AttrKind::Rational}});

  red.constraints.push_back(make_fd(red.schema, "R", {0}, {1}));
  auto var = [](const char* n) { return Term::variable(n); };
  Constraint prop;
  prop.lhs = {Atom{"R", {var("x1"), var("y1"), var("z1"), var("z2")}},
              Atom{"R", {var("x2"), var("y2"), var("z1"), var("z2")}},
              Atom{"P", {var("z1")}}};
  prop.guard = Guard::cmp(CmpOp::Ne, var("y1"), var("y2"));
  prop.rhs = {Atom{"P", {var("z2")}}};
  validate_constraint(red.schema, prop);
  red.constraints.push_back(prop);

  for (int j = 1; j <= m; ++j) {
    const auto& [u, v] = edges[static_cast<std::size_t>(j) - 1];
    for (int vert : {u, v})
      for (int k = 1; k <= 3; ++k)
        red.instance.insert(color_fact(vert, k, j - 1, j));
  }
  red.instance.insert(Fact{"P", {rat(0)}});
  const Fact query = color_fact(g.n + 1, 0, m, m + 1);
  red.instance.insert(query);
  red.instance.insert(color_fact(g.n + 2, 1, m, m + 1));
  red.query = Query::atom(query);
  return red;
}

bool three_colorable(const Graph& g) {
  const auto edges = normalized_edges(g, /*forbid_isolated=*/false);
  if (g.n > 12)
    throw CapExceededError("3-coloring test limited to 12 vertices");
  std::uint64_t total = 1;
  for (int v = 0; v < g.n; ++v) total *= 3;
  std::vector<int> color(static_cast<std::size_t>(g.n) + 1, 0);
  for (std::uint64_t a = 0; a < total; ++a) {
    std::uint64_t x = a;
    for (int v = 1; v <= g.n; ++v) {
      color[v] = static_cast<int>(x % 3);
      x /= 3;
    }
    bool proper = true;
    for (const auto& [u, v] : edges)
      if (color[u] == color[v]) {
        proper = false;
        break;
      }
    if (proper) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Quantified Boolean formula encoding
// ---------------------------------------------------------------------------

namespace {

int validated_qbf_vars(const Qbf& psi) {
  if (psi.n_universal < 0 || psi.n_existential < 0)
    throw ValidationError("negative variable count");
  const int total = psi.n_universal + psi.n_existential;
  if (total < 1) throw ValidationError("formula needs at least one variable");
  std::set<std::array<std::pair<int, int>, 3>> seen;
  for (const QbfClause& cl : psi.clauses) {
    std::array<std::pair<int, int>, 3> key;
    for (int t = 0; t < 3; ++t) {
      if (cl[t].var < 1 || cl[t].var > total)
        throw ValidationError("literal variable out of range");
      key[t] = {cl[t].var, cl[t].positive ? 1 : 0};
    }
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) throw ValidationError("duplicate clause");
  }
  return total;
}

}  // namespace

Reduction reduce_qbf(const Qbf& psi) {
  const int total = validated_qbf_vars(psi);

  Reduction red;
  red.schema.add_relation("R", {{"a", AttrKind::Rational},
                                {"b", AttrKind::Rational},
                                {"c", AttrKind::Rational},
                                {"d", AttrKind::Rational}});
  std::vector<Attribute> dattrs;
  for (int grp = 1; grp <= 4; ++grp)
    for (const char* base : {"a", "b", "c", "d"})
      dattrs.push_back({base + std::to_string(grp), AttrKind::Rational});
  red.schema.add_relation("D", dattrs);

  red.constraints.push_back(make_fd(red.schema, "R", {0}, {1}));
  red.constraints.push_back(make_fd(red.schema, "R", {2}, {3}));
  Constraint pick;
  std::vector<Term> dargs;
  std::vector<Atom> choices;
  for (int grp = 0; grp < 4; ++grp) {
    std::vector<Term> rargs;
    for (int p = 0; p < 4; ++p) {
      std::string v = "v" + std::to_string(4 * grp + p + 1);
      dargs.push_back(Term::variable(v));
      rargs.push_back(Term::variable(v));
    }
    choices.push_back(Atom{"R", rargs});
  }
  pick.lhs = {Atom{"D", dargs}};
  pick.rhs = choices;
  validate_constraint(red.schema, pick);
  red.constraints.push_back(pick);

  // One fact per literal; the third position flags the quantifier block.
  auto literal_fact = [&](int v, bool positive) {
    const long long q = v <= psi.n_universal ? 0 : 1;
    return Fact{"R", {rat(v), rat(positive ? 1 : 0), rat(q), rat(0)}};
  };
  for (int v = 1; v <= total; ++v) {
    red.instance.insert(literal_fact(v, true));
    red.instance.insert(literal_fact(v, false));
  }
  for (const QbfClause& cl : psi.clauses) {
    std::vector<Value> tuple;
    for (const QbfLiteral& l : cl) {
      tuple.push_back(rat(l.var));
      tuple.push_back(rat(l.positive ? 1 : 0));
      tuple.push_back(rat(l.var <= psi.n_universal ? 0 : 1));
      tuple.push_back(rat(0));
    }
    for (long long x : {0, 1, 1, 1}) tuple.push_back(rat(x));
    red.instance.insert(Fact{"D", tuple});
  }
  const Fact rbar{"R", {rat(0), rat(0), rat(0), rat(0)}};
  red.instance.insert(rbar);
  red.query = Query::atom(rbar);
  return red;
}

bool qbf_valid(const Qbf& psi) {
  const int total = validated_qbf_vars(psi);
  if (total > 20)
    throw CapExceededError("truth-table evaluation limited to 20 variables");
  const std::uint64_t nu = std::uint64_t(1) << psi.n_universal;
  const std::uint64_t ne = std::uint64_t(1) << psi.n_existential;
  for (std::uint64_t ua = 0; ua < nu; ++ua) {
    bool satisfied = false;
    for (std::uint64_t ea = 0; ea < ne && !satisfied; ++ea) {
      auto truth = [&](int v) {
        if (v <= psi.n_universal) return ((ua >> (v - 1)) & 1) != 0;
        return ((ea >> (v - psi.n_universal - 1)) & 1) != 0;
      };
      bool all = true;
      for (const QbfClause& cl : psi.clauses) {
        bool clause = false;
        for (const QbfLiteral& l : cl)
          if (truth(l.var) == l.positive) {
            clause = true;
            break;
          }
        if (!clause) {
          all = false;
          break;
        }
      }
      satisfied = all;
    }
    if (!satisfied) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) {
    return static_cast<int>(eng() % static_cast<std::uint64_t>(n));
  }
  bool chance(int num, int den) { return below(den) < num; }
};

struct RelPool {
  std::vector<std::string> names;
  std::vector<int> arity;
};

std::vector<Term> fresh_args(int arity, const std::string& prefix,
                             std::vector<std::string>* vars) {
  std::vector<Term> args;
  for (int p = 0; p < arity; ++p) {
    std::string v = prefix + std::to_string(p + 1);
    if (vars) vars->push_back(v);
    args.push_back(Term::variable(v));
  }
  return args;
}

// Single-atom denial banning one value at one position.
Constraint value_denial(Rng& rng, const Schema& s, const RelPool& rels,
                        int rel) {
  Constraint c;
  std::vector<std::string> vars;
  c.lhs.push_back(Atom{rels.names[rel],
                       fresh_args(rels.arity[rel], "x", &vars)});
  const int pos = rng.below(rels.arity[rel]);
  c.guard = Guard::cmp(rng.chance(1, 2) ? CmpOp::Eq : CmpOp::Ge,
                       Term::variable(vars[pos]),
                       Term::constant(Value::rational(2 + rng.below(2))));
  validate_constraint(s, c);
  return c;
}

// Two atoms joined on their first position, with an optional disequality.
Constraint join_denial(Rng& rng, const Schema& s, const RelPool& rels) {
  const int r1 = rng.below(static_cast<int>(rels.names.size()));
  const int r2 = rng.below(static_cast<int>(rels.names.size()));
  Constraint c;
  auto shared_first = [&](int rel, const std::string& prefix) {
    std::vector<Term> args;
    args.push_back(Term::variable("x"));
    for (int p = 1; p < rels.arity[rel]; ++p)
      args.push_back(Term::variable(prefix + std::to_string(p)));
    return args;
  };
  c.lhs.push_back(Atom{rels.names[r1], shared_first(r1, "y")});
  c.lhs.push_back(Atom{rels.names[r2], shared_first(r2, "z")});
  if (rels.arity[r1] >= 2 && rels.arity[r2] >= 2 && rng.chance(1, 2))
    c.guard = Guard::cmp(CmpOp::Ne, Term::variable("y1"),
                         Term::variable("z1"));
  validate_constraint(s, c);
  return c;
}

// Single-consequent dependency from one source relation to a target whose
// arguments reuse the source variables.
Constraint tgd(Rng& rng, const Schema& s, const RelPool& rels, int lhs_rel,
               int rhs_rel) {
  Constraint c;
  std::vector<std::string> vars;
  c.lhs.push_back(Atom{rels.names[lhs_rel],
                       fresh_args(rels.arity[lhs_rel], "x", &vars)});
  std::vector<Term> rargs;
  for (int p = 0; p < rels.arity[rhs_rel]; ++p)
    rargs.push_back(
        Term::variable(vars[static_cast<std::size_t>(
            rng.below(static_cast<int>(vars.size())))]));
  c.rhs.push_back(Atom{rels.names[rhs_rel], rargs});
  validate_constraint(s, c);
  return c;
}

Constraint random_jd(Rng& rng, const Schema& s, const RelPool& rels,
                     int rel) {
  std::vector<std::vector<std::vector<int>>> menu;
  if (rels.arity[rel] == 2)
    menu = {{{0}, {0, 1}}, {{1}, {0, 1}}, {{0}, {1}}};
  else
    menu = {{{0, 1}, {0, 2}}, {{0, 1}, {1, 2}}, {{0}, {1, 2}}};
  return make_jd(s, rels.names[rel],
                 menu[static_cast<std::size_t>(rng.below(
                     static_cast<int>(menu.size())))]);
}

// Multi-consequent constraint in the style of a choice between targets.
Constraint disjunctive(Rng& rng, const Schema& s, const RelPool& rels) {
  const int nrel = static_cast<int>(rels.names.size());
  const int lhs_rel = rng.below(nrel);
  Constraint c;
  std::vector<std::string> vars;
  c.lhs.push_back(Atom{rels.names[lhs_rel],
                       fresh_args(rels.arity[lhs_rel], "x", &vars)});
  auto target = [&](int rel, std::size_t shift) {
    std::vector<Term> args;
    for (int p = 0; p < rels.arity[rel]; ++p)
      args.push_back(Term::variable(
          vars[(static_cast<std::size_t>(p) + shift) % vars.size()]));
    return Atom{rels.names[rel], args};
  };
  const int t1 = rng.below(nrel);
  int t2 = rng.below(nrel);
  Atom a1 = target(t1, 0);
  Atom a2 = target(t2, 1);
  if (a1 == a2) a2 = target(t2, vars.size() > 1 ? 0 : 1);
  if (a1 == a2) {
    t2 = (t2 + 1) % nrel;
    a2 = target(t2, 0);
  }
  c.rhs = {a1, a2};
  validate_constraint(s, c);
  return c;
}

GeneratedCase build_case(Rng& rng, GenProfile profile) {
  GeneratedCase c;
  RelPool rels;
  const int nrel = 2 + rng.below(2);
  const char* names[3] = {"R", "P", "Q"};
  const char* attr_names[3] = {"a", "b", "c"};
  for (int idx = 0; idx < nrel; ++idx) {
    int a = 1 + rng.below(3);
    if (idx == 0 && profile == GenProfile::AcyclicTgdJd && a < 2) a = 2;
    rels.names.push_back(names[idx]);
    rels.arity.push_back(a);
    std::vector<Attribute> attrs;
    for (int p = 0; p < a; ++p)
      attrs.push_back({attr_names[p], AttrKind::Rational});
    c.schema.add_relation(names[idx], attrs);
  }

  // A sprinkle of key constraints for every profile.
  for (int idx = 0; idx < nrel; ++idx)
    if (rels.arity[idx] >= 2 && rng.chance(1, 2))
      c.constraints.push_back(
          make_fd(c.schema, rels.names[idx], {0}, {rels.arity[idx] - 1}));

  switch (profile) {
    case GenProfile::DenialOnly: {
      const int extra = 1 + rng.below(2);
      for (int k = 0; k < extra; ++k)
        c.constraints.push_back(rng.chance(1, 2)
                                    ? value_denial(rng, c.schema, rels,
                                                   rng.below(nrel))
                                    : join_denial(rng, c.schema, rels));
      break;
    }
    case GenProfile::AcyclicTgd:
    case GenProfile::AcyclicTgdJd: {
      const int ntgd = 1 + rng.below(2);
      for (int k = 0; k < ntgd; ++k) {
        const int lhs_rel = 1 + rng.below(nrel - 1);
        const int rhs_rel = rng.below(lhs_rel);
        c.constraints.push_back(tgd(rng, c.schema, rels, lhs_rel, rhs_rel));
      }
      if (rng.chance(1, 2))
        c.constraints.push_back(join_denial(rng, c.schema, rels));
      if (profile == GenProfile::AcyclicTgdJd)
        c.constraints.push_back(random_jd(rng, c.schema, rels, 0));
      break;
    }
    case GenProfile::CyclicTgd: {
      c.constraints.push_back(tgd(rng, c.schema, rels, 0, 1));
      c.constraints.push_back(tgd(rng, c.schema, rels, 1, 0));
      if (rng.chance(1, 2))
        c.constraints.push_back(
            value_denial(rng, c.schema, rels, rng.below(nrel)));
      break;
    }
    case GenProfile::GeneralUniversal: {
      c.constraints.push_back(disjunctive(rng, c.schema, rels));
      if (rng.chance(1, 2))
        c.constraints.push_back(join_denial(rng, c.schema, rels));
      break;
    }
  }

  const int nfacts = 3 + rng.below(4);
  for (int k = 0; k < nfacts; ++k) {
    const int rel = rng.below(nrel);
    Fact f{rels.names[rel], {}};
    for (int p = 0; p < rels.arity[rel]; ++p)
      f.tuple.push_back(Value::rational(1 + rng.below(3)));
    c.instance.insert(f);
  }
  return c;
}

}  // namespace

GeneratedCase gen_random(std::uint64_t seed, GenProfile profile,
                         std::size_t hull_cap) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + attempt + 1);
    GeneratedCase c = build_case(rng, profile);
    Grounding g = compute_hull(c.schema, c.instance, c.constraints);
    if (static_cast<std::size_t>(g.table.size()) <= hull_cap) return c;
  }
  throw Error("random generation failed to meet the hull cap");
}

Query gen_random_query(std::uint64_t seed, const GeneratedCase& c) {
  Rng rng(seed ^ 0xD1B54A32D192ED03ULL);
  const std::vector<Fact> pool(c.instance.begin(), c.instance.end());
  std::vector<std::string> rels;
  for (const auto& [name, attrs] : c.schema.relations) {
    (void)attrs;
    rels.push_back(name);
  }
  auto random_fact = [&] {
    if (!pool.empty() && rng.chance(1, 2))
      return pool[static_cast<std::size_t>(
          rng.below(static_cast<int>(pool.size())))];
    const std::string& rel =
        rels[static_cast<std::size_t>(rng.below(static_cast<int>(rels.size())))];
    Fact f{rel, {}};
    for (int p = 0; p < c.schema.arity(rel); ++p)
      f.tuple.push_back(Value::rational(1 + rng.below(3)));
    return f;
  };
  const int nconj = 1 + rng.below(3);
  std::vector<Query> conjs;
  for (int k = 0; k < nconj; ++k) {
    const int nlit = 1 + rng.below(3);
    std::vector<Query> lits;
    for (int l = 0; l < nlit; ++l) {
      Query a = Query::atom(random_fact());
      lits.push_back(rng.chance(1, 2) ? Query::negation(std::move(a))
                                      : std::move(a));
    }
    conjs.push_back(nlit == 1 ? std::move(lits[0])
                              : Query::disj(std::move(lits)));
  }
  return nconj == 1 ? std::move(conjs[0]) : Query::conj(std::move(conjs));
}

}  // namespace cqadb
