#include "cqadb/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cqadb {

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

static bool plain_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  static const std::set<std::string> keywords = {
      "relation", "fd",  "jd",  "rat",   "sym",
      "and",      "or",  "not", "true",  "false"};
  return keywords.count(s) == 0;
}

std::string to_string(const Value& v) {
  if (v.is_rational()) {
    const Rational& r = v.as_rational();
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
  }
  const std::string& s = v.as_symbol();
  if (plain_identifier(s)) return s;
  return "'" + s + "'";
}

std::string to_string(const Fact& f) {
  std::string out = f.relation + "(";
  for (size_t i = 0; i < f.tuple.size(); ++i) {
    if (i) out += ",";
    out += to_string(f.tuple[i]);
  }
  return out + ")";
}

std::string to_string(const Instance& i) {
  std::string out;
  for (const Fact& f : i) {
    if (!out.empty()) out += ", ";
    out += to_string(f);
  }
  return out;
}

std::string to_string(const Literal& l) {
  return l.positive ? to_string(l.fact) : "!" + to_string(l.fact);
}

std::string to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::Denial:
      return "denial";
    case ConstraintClass::FullTgd:
      return "full-tgd";
    case ConstraintClass::JoinDependency:
      return "join-dependency";
    case ConstraintClass::GeneralUniversal:
      return "general-universal";
  }
  return "?";
}

std::string to_string(const ViolationWitness& w) {
  std::string out;
  for (size_t i = 0; i < w.lhs_facts.size(); ++i) {
    if (i) out += ", ";
    out += to_string(w.lhs_facts[i]);
  }
  out += " -> ";
  if (w.rhs_facts.empty()) {
    out += "false";
  } else {
    for (size_t i = 0; i < w.rhs_facts.size(); ++i) {
      if (i) out += " | ";
      out += to_string(w.rhs_facts[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

const std::vector<Attribute>& Schema::attrs(const std::string& rel) const {
  auto it = relations.find(rel);
  if (it == relations.end())
    throw ValidationError("unknown relation '" + rel + "'");
  return it->second;
}

void Schema::add_relation(const std::string& rel,
                          std::vector<Attribute> attributes) {
  if (relations.count(rel))
    throw ValidationError("relation '" + rel + "' declared twice");
  if (attributes.empty())
    throw ValidationError("relation '" + rel + "' has arity 0");
  std::set<std::string> names;
  for (const Attribute& a : attributes)
    if (!names.insert(a.name).second)
      throw ValidationError("relation '" + rel + "' has duplicate attribute '" +
                            a.name + "'");
  relations.emplace(rel, std::move(attributes));
}

// ---------------------------------------------------------------------------
// Guard evaluation
// ---------------------------------------------------------------------------

static const Value& resolve(const Term& t, const Binding& b) {
  if (!t.is_var) return t.val;
  auto it = b.find(t.var);
  if (it == b.end())
    throw ValidationError("unbound variable '" + t.var + "' in guard");
  return it->second;
}

bool eval_builtin(const Guard& g, const Binding& binding) {
  switch (g.kind) {
    case Guard::Kind::True:
      return true;
    case Guard::Kind::False:
      return false;
    case Guard::Kind::Not:
      return !eval_builtin(g.kids.at(0), binding);
    case Guard::Kind::And:
      for (const Guard& k : g.kids)
        if (!eval_builtin(k, binding)) return false;
      return true;
    case Guard::Kind::Or:
      for (const Guard& k : g.kids)
        if (eval_builtin(k, binding)) return true;
      return false;
    case Guard::Kind::Cmp: {
      const Value& a = resolve(g.lhs, binding);
      const Value& b = resolve(g.rhs, binding);
      if (a.kind() != b.kind())
        throw ValidationError(
            "comparison between a rational and a symbol is not allowed");
      switch (g.op) {
        case CmpOp::Eq:
          return a == b;
        case CmpOp::Ne:
          return a != b;
        default:
          break;
      }
      if (a.is_symbol())
        throw ValidationError("ordered comparison on symbol operands");
      switch (g.op) {
        case CmpOp::Lt:
          return a.as_rational() < b.as_rational();
        case CmpOp::Le:
          return a.as_rational() <= b.as_rational();
        case CmpOp::Gt:
          return a.as_rational() > b.as_rational();
        case CmpOp::Ge:
          return a.as_rational() >= b.as_rational();
        default:
          return false;  // unreachable
      }
    }
  }
  return false;  // unreachable
}

// ---------------------------------------------------------------------------
// FD / JD desugaring
// ---------------------------------------------------------------------------

static void check_positions(const Schema& s, const std::string& rel,
                            const std::vector<int>& ps) {
  int a = s.arity(rel);
  if (ps.empty()) throw ValidationError("empty attribute position list");
  std::set<int> seen;
  for (int p : ps) {
    if (p < 0 || p >= a)
      throw ValidationError("attribute position " + std::to_string(p + 1) +
                            " out of range for relation '" + rel + "'");
    if (!seen.insert(p).second)
      throw ValidationError("duplicate attribute position " +
                            std::to_string(p + 1));
  }
}

Constraint make_fd(const Schema& s, const std::string& rel,
                   std::vector<int> lhs_positions,
                   std::vector<int> rhs_positions) {
  check_positions(s, rel, lhs_positions);
  check_positions(s, rel, rhs_positions);
  std::sort(lhs_positions.begin(), lhs_positions.end());
  std::sort(rhs_positions.begin(), rhs_positions.end());
  int a = s.arity(rel);
  std::set<int> x(lhs_positions.begin(), lhs_positions.end());

  Atom u, v;
  u.relation = v.relation = rel;
  for (int p = 0; p < a; ++p) {
    std::string sp = std::to_string(p);
    if (x.count(p)) {
      u.args.push_back(Term::variable("x" + sp));
      v.args.push_back(Term::variable("x" + sp));
    } else {
      u.args.push_back(Term::variable("y" + sp));
      v.args.push_back(Term::variable("z" + sp));
    }
  }
  // Violated when the two tuples agree on X but differ somewhere in Y.
  std::vector<Guard> diffs;
  for (int p : rhs_positions) {
    if (x.count(p)) continue;  // forced equal; can never differ
    diffs.push_back(Guard::cmp(CmpOp::Ne,
                               Term::variable("y" + std::to_string(p)),
                               Term::variable("z" + std::to_string(p))));
  }
  Constraint c;
  c.lhs = {u, v};
  if (diffs.empty())
    c.guard = Guard::falsity();
  else if (diffs.size() == 1)
    c.guard = diffs[0];
  else
    c.guard = Guard::disj(std::move(diffs));
  c.fd = FdSpec{rel, lhs_positions, rhs_positions};
  validate_constraint(s, c);
  return c;
}

Constraint make_jd(const Schema& s, const std::string& rel,
                   std::vector<std::vector<int>> components) {
  if (components.empty())
    throw ValidationError("join dependency needs at least one component");
  int a = s.arity(rel);
  std::set<int> covered;
  for (auto& comp : components) {
    check_positions(s, rel, comp);
    std::sort(comp.begin(), comp.end());
    covered.insert(comp.begin(), comp.end());
  }
  if (static_cast<int>(covered.size()) != a)
    throw ValidationError("join dependency components must cover every "
                          "attribute of relation '" +
                          rel + "'");
  std::sort(components.begin(), components.end());
  components.erase(std::unique(components.begin(), components.end()),
                   components.end());

  Constraint c;
  for (size_t i = 0; i < components.size(); ++i) {
    std::set<int> in(components[i].begin(), components[i].end());
    Atom at;
    at.relation = rel;
    for (int p = 0; p < a; ++p) {
      if (in.count(p))
        at.args.push_back(Term::variable("x" + std::to_string(p)));
      else
        at.args.push_back(Term::variable("w" + std::to_string(i) + "_" +
                                         std::to_string(p)));
    }
    c.lhs.push_back(std::move(at));
  }
  Atom head;
  head.relation = rel;
  for (int p = 0; p < a; ++p)
    head.args.push_back(Term::variable("x" + std::to_string(p)));
  c.rhs = {std::move(head)};
  c.jd = JdSpec{rel, std::move(components)};
  validate_constraint(s, c);
  return c;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate_fact(const Schema& s, const Fact& f) {
  const auto& attrs = s.attrs(f.relation);
  if (f.tuple.size() != attrs.size())
    throw ValidationError("fact " + to_string(f) + " has arity " +
                          std::to_string(f.tuple.size()) + ", expected " +
                          std::to_string(attrs.size()));
  for (size_t i = 0; i < attrs.size(); ++i)
    if (f.tuple[i].kind() != attrs[i].kind)
      throw ValidationError("fact " + to_string(f) + ": value " +
                            to_string(f.tuple[i]) + " does not match the " +
                            (attrs[i].kind == AttrKind::Rational ? "rational"
                                                                 : "symbol") +
                            " attribute '" + attrs[i].name + "'");
}

void validate_instance(const Schema& s, const Instance& i) {
  for (const Fact& f : i) validate_fact(s, f);
}

// Collects var -> attribute kind; complains on conflicting uses.
static void atom_types(const Schema& s, const Atom& a,
                       std::map<std::string, AttrKind>& kinds) {
  const auto& attrs = s.attrs(a.relation);
  if (a.args.size() != attrs.size())
    throw ValidationError("atom over '" + a.relation + "' has arity " +
                          std::to_string(a.args.size()) + ", expected " +
                          std::to_string(attrs.size()));
  for (size_t i = 0; i < attrs.size(); ++i) {
    const Term& t = a.args[i];
    if (t.is_var) {
      auto [it, fresh] = kinds.emplace(t.var, attrs[i].kind);
      if (!fresh && it->second != attrs[i].kind)
        throw ValidationError("variable '" + t.var +
                              "' used with both a rational and a symbol "
                              "attribute");
    } else if (t.val.kind() != attrs[i].kind) {
      throw ValidationError("constant " + to_string(t.val) +
                            " does not match the type of attribute '" +
                            attrs[i].name + "' of '" + a.relation + "'");
    }
  }
}

static void check_guard_types(const Guard& g,
                              const std::map<std::string, AttrKind>& kinds) {
  switch (g.kind) {
    case Guard::Kind::True:
    case Guard::Kind::False:
      return;
    case Guard::Kind::Not:
    case Guard::Kind::And:
    case Guard::Kind::Or:
      for (const Guard& k : g.kids) check_guard_types(k, kinds);
      return;
    case Guard::Kind::Cmp: {
      auto kind_of = [&](const Term& t) -> AttrKind {
        if (!t.is_var) return t.val.kind();
        auto it = kinds.find(t.var);
        if (it == kinds.end())
          throw ValidationError("guard variable '" + t.var +
                                "' does not occur in any lhs atom");
        return it->second;
      };
      AttrKind a = kind_of(g.lhs), b = kind_of(g.rhs);
      if (a != b)
        throw ValidationError(
            "guard compares a rational with a symbol");
      bool ordered = g.op == CmpOp::Lt || g.op == CmpOp::Le ||
                     g.op == CmpOp::Gt || g.op == CmpOp::Ge;
      if (ordered && a == AttrKind::Symbol)
        throw ValidationError("ordered guard comparison on symbol terms");
      return;
    }
  }
}

static void guard_vars(const Guard& g, std::set<std::string>& out) {
  if (g.kind == Guard::Kind::Cmp) {
    if (g.lhs.is_var) out.insert(g.lhs.var);
    if (g.rhs.is_var) out.insert(g.rhs.var);
  }
  for (const Guard& k : g.kids) guard_vars(k, out);
}

void validate_constraint(const Schema& s, const Constraint& c) {
  if (c.lhs.empty())
    throw ValidationError(
        "constraint needs at least one lhs atom; otherwise the empty "
        "instance could violate it");
  std::map<std::string, AttrKind> kinds;
  std::set<std::string> lhs_vars;
  for (const Atom& a : c.lhs) {
    atom_types(s, a, kinds);
    for (const Term& t : a.args)
      if (t.is_var) lhs_vars.insert(t.var);
  }
  for (const Atom& a : c.rhs) {
    atom_types(s, a, kinds);
    for (const Term& t : a.args)
      if (t.is_var && !lhs_vars.count(t.var))
        throw ValidationError("unsafe variable '" + t.var +
                              "': occurs in the rhs but in no lhs atom");
  }
  std::set<std::string> gv;
  guard_vars(c.guard, gv);
  for (const std::string& v : gv)
    if (!lhs_vars.count(v))
      throw ValidationError("unsafe variable '" + v +
                            "': occurs in the guard but in no lhs atom");
  check_guard_types(c.guard, kinds);
}

// ---------------------------------------------------------------------------
// Instance operations
// ---------------------------------------------------------------------------

Instance symmetric_difference(const Instance& a, const Instance& b) {
  Instance out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.end()));
  return out;
}

DeltaOrder closer_than(const Instance& base, const Instance& a,
                       const Instance& b) {
  Instance da = symmetric_difference(base, a);
  Instance db = symmetric_difference(base, b);
  bool ab = std::includes(db.begin(), db.end(), da.begin(), da.end());
  bool ba = std::includes(da.begin(), da.end(), db.begin(), db.end());
  if (ab && ba) return DeltaOrder::Equal;
  if (ab) return DeltaOrder::Less;
  if (ba) return DeltaOrder::Greater;
  return DeltaOrder::Incomparable;
}

// ---------------------------------------------------------------------------
// Constraint matching
// ---------------------------------------------------------------------------

namespace {

// Unifies atom against fact under the current binding; appends newly bound
// variables to trail so the caller can backtrack.
bool match_atom(const Atom& a, const Fact& f, Binding& b,
                std::vector<std::string>& trail) {
  if (a.relation != f.relation || a.args.size() != f.tuple.size())
    return false;
  size_t mark = trail.size();
  for (size_t i = 0; i < a.args.size(); ++i) {
    const Term& t = a.args[i];
    bool ok;
    if (t.is_var) {
      auto it = b.find(t.var);
      if (it == b.end()) {
        b.emplace(t.var, f.tuple[i]);
        trail.push_back(t.var);
        ok = true;
      } else {
        ok = it->second == f.tuple[i];
      }
    } else {
      ok = t.val == f.tuple[i];
    }
    if (!ok) {
      while (trail.size() > mark) {
        b.erase(trail.back());
        trail.pop_back();
      }
      return false;
    }
  }
  return true;
}

Fact ground_atom(const Atom& a, const Binding& b) {
  Fact f;
  f.relation = a.relation;
  for (const Term& t : a.args) {
    if (t.is_var) {
      auto it = b.find(t.var);
      if (it == b.end())
        throw ValidationError("unsafe variable '" + t.var +
                              "' escaped validation");
      f.tuple.push_back(it->second);
    } else {
      f.tuple.push_back(t.val);
    }
  }
  return f;
}

}  // namespace

void for_each_grounding(
    const Instance& i, const Constraint& c,
    const std::function<bool(const std::vector<Fact>&,
                             const std::vector<Fact>&)>& cb) {
  Binding b;
  std::vector<std::string> trail;
  std::vector<Fact> lhs_facts(c.lhs.size());
  bool stop = false;

  std::function<void(size_t)> rec = [&](size_t k) {
    if (stop) return;
    if (k == c.lhs.size()) {
      if (!eval_builtin(c.guard, b)) return;
      std::vector<Fact> rhs_facts;
      rhs_facts.reserve(c.rhs.size());
      for (const Atom& a : c.rhs) rhs_facts.push_back(ground_atom(a, b));
      if (!cb(lhs_facts, rhs_facts)) stop = true;
      return;
    }
    for (const Fact& f : i) {
      size_t mark = trail.size();
      if (match_atom(c.lhs[k], f, b, trail)) {
        lhs_facts[k] = f;
        rec(k + 1);
        while (trail.size() > mark) {
          b.erase(trail.back());
          trail.pop_back();
        }
        if (stop) return;
      }
    }
  };
  rec(0);
}

std::optional<ViolationWitness> find_violation(
    const Instance& i, const std::vector<Constraint>& f) {
  std::optional<ViolationWitness> found;
  for (size_t ci = 0; ci < f.size(); ++ci) {
    for_each_grounding(i, f[ci],
                       [&](const std::vector<Fact>& lhs,
                           const std::vector<Fact>& rhs) {
                         for (const Fact& r : rhs)
                           if (i.count(r)) return true;  // satisfied; keep on
                         found = ViolationWitness{static_cast<int>(ci), lhs,
                                                  rhs};
                         return false;
                       });
    if (found) return found;
  }
  return std::nullopt;
}

bool satisfies(const Instance& i, const std::vector<Constraint>& f) {
  return !find_violation(i, f).has_value();
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

bool eval_query(const Query& q, const Instance& i) {
  switch (q.kind) {
    case Query::Kind::True:
      return true;
    case Query::Kind::False:
      return false;
    case Query::Kind::Atom:
      return i.count(q.fact) != 0;
    case Query::Kind::Not:
      return !eval_query(q.kids.at(0), i);
    case Query::Kind::And:
      for (const Query& k : q.kids)
        if (!eval_query(k, i)) return false;
      return true;
    case Query::Kind::Or:
      for (const Query& k : q.kids)
        if (eval_query(k, i)) return true;
      return false;
  }
  return false;  // unreachable
}

}  // namespace cqadb
