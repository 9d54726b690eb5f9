#include "cqadb/cqa.hpp"

#include "cqadb/repair.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace cqadb {

namespace {

using SuppVec = std::vector<int>;

// Calls cb with one chosen index per dimension, in lexicographic order with
// the first dimension slowest; cb returning false stops the scan.  An empty
// dimension yields no calls; zero dimensions yield exactly one call.
void for_each_choice(const std::vector<std::size_t>& sizes,
                     const std::function<bool(const std::vector<std::size_t>&)>& cb) {
  for (std::size_t s : sizes)
    if (s == 0) return;
  std::vector<std::size_t> idx(sizes.size(), 0);
  while (true) {
    if (!cb(idx)) return;
    std::size_t d = sizes.size();
    while (true) {
      if (d == 0) return;
      --d;
      if (++idx[d] < sizes[d]) break;
      idx[d] = 0;
    }
  }
}

std::vector<int> set_bits(const FactSet& s) {
  std::vector<int> out;
  for (std::size_t f = s.find_first(); f != FactSet::npos; f = s.find_next(f))
    out.push_back(static_cast<int>(f));
  return out;
}

// Enumerates one support per fact of `needed` out of `table`, passing each
// resulting union to cb; cb returning false stops the scan.
void for_each_support_union(const std::vector<int>& needed,
                            const std::vector<std::vector<SuppVec>>& table,
                            int nfacts,
                            const std::function<bool(const FactSet&)>& cb) {
  std::vector<std::size_t> sizes;
  sizes.reserve(needed.size());
  for (int v : needed) sizes.push_back(table[v].size());
  for_each_choice(sizes, [&](const std::vector<std::size_t>& idx) {
    FactSet u(nfacts);
    for (std::size_t d = 0; d < needed.size(); ++d)
      for (int f : table[needed[d]][idx[d]]) u.set(f);
    return cb(u);
  });
}

std::vector<SuppVec> minimal_sets(const std::set<SuppVec>& in) {
  std::vector<SuppVec> by_size(in.begin(), in.end());
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const SuppVec& a, const SuppVec& b) {
                     return a.size() < b.size();
                   });
  std::vector<SuppVec> kept;
  for (const SuppVec& s : by_size) {
    bool covered = false;
    for (const SuppVec& k : kept)
      if (std::includes(s.begin(), s.end(), k.begin(), k.end())) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

int DependencyGraph::index_of(const std::string& rel) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), rel);
  if (it == nodes.end() || *it != rel) return -1;
  return static_cast<int>(it - nodes.begin());
}

bool DependencyGraph::has_edge(const std::string& from,
                               const std::string& to) const {
  int u = index_of(from), v = index_of(to);
  if (u < 0 || v < 0) return false;
  return edge[u][v];
}

namespace {

// Length of the longest simple directed path starting at u.
int longest_from(int u, const std::vector<std::vector<bool>>& edge,
                 std::vector<bool>& visited) {
  int n = static_cast<int>(edge.size());
  visited[u] = true;
  int best = 0;
  for (int v = 0; v < n; ++v)
    if (edge[u][v] && !visited[v])
      best = std::max(best, 1 + longest_from(v, edge, visited));
  visited[u] = false;
  return best;
}

}  // namespace

DependencyGraph dependency_graph(const std::vector<Constraint>& f,
                                 const Schema& s) {
  for (const Constraint& c : f) validate_constraint(s, c);
  DependencyGraph g;
  for (const auto& [rel, attrs] : s.relations) g.nodes.push_back(rel);
  int n = static_cast<int>(g.nodes.size());
  g.edge.assign(n, std::vector<bool>(n, false));
  for (const Constraint& c : f)
    for (const Atom& to : c.rhs)
      for (const Atom& from : c.lhs)
        g.edge[g.index_of(to.relation)][g.index_of(from.relation)] = true;
  g.depth.assign(n, 0);
  g.height.assign(n, 0);
  std::vector<std::vector<bool>> rev(n, std::vector<bool>(n, false));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.edge[u][v]) rev[v][u] = true;
  std::vector<bool> visited(n, false);
  for (int u = 0; u < n; ++u) {
    g.height[u] = longest_from(u, g.edge, visited);
    g.depth[u] = longest_from(u, rev, visited);
    g.h = std::max(g.h, g.height[u]);
  }
  return g;
}

bool is_acyclic(const DependencyGraph& g) {
  int n = static_cast<int>(g.nodes.size());
  // 0 unvisited, 1 on the current path, 2 done.
  std::vector<int> color(n, 0);
  std::function<bool(int)> dfs = [&](int u) {
    color[u] = 1;
    for (int v = 0; v < n; ++v)
      if (g.edge[u][v]) {
        if (color[v] == 1) return false;
        if (color[v] == 0 && !dfs(v)) return false;
      }
    color[u] = 2;
    return true;
  };
  for (int u = 0; u < n; ++u)
    if (color[u] == 0 && !dfs(u)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Join dependency merging
// ---------------------------------------------------------------------------

JdSpec merge_jds(const Schema& s, const std::string& rel,
                 const std::vector<JdSpec>& jds) {
  const int arity = s.arity(rel);  // throws on an unknown relation
  for (const JdSpec& jd : jds) {
    if (jd.relation != rel)
      throw ValidationError("cannot merge join dependencies of relation '" +
                            jd.relation + "' into relation '" + rel + "'");
    validate_constraint(s, make_jd(s, rel, jd.components));
  }
  std::vector<int> all(arity);
  for (int p = 0; p < arity; ++p) all[p] = p;
  std::vector<std::vector<int>> acc{all};
  for (const JdSpec& jd : jds) {
    std::set<std::vector<int>> next;
    for (const std::vector<int>& a : acc)
      for (const std::vector<int>& b : jd.components) {
        std::vector<int> meet;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(meet));
        if (!meet.empty()) next.insert(std::move(meet));
      }
    acc.assign(next.begin(), next.end());
  }
  return JdSpec{rel, std::move(acc)};
}

// ---------------------------------------------------------------------------
// Context construction
// ---------------------------------------------------------------------------

namespace {

// Validates the constraint class and rewrites the set so that every relation
// carries exactly one join dependency.
// Decides whether the conjunction of `jds` implies `merged` on `rel`.  The
// canonical tableau of `merged` holds one tuple per component, sharing a
// per-position value on component positions and a fresh value elsewhere; the
// implication holds exactly when closing that tableau under `jds` derives the
// fully shared tuple.  Since the reverse implication always holds (every
// original component is a union of merged components), a positive answer
// certifies that replacing the originals by `merged` preserves satisfaction.
bool conjunction_implies_merge(const Schema& s, const std::string& rel,
                               const std::vector<JdSpec>& jds,
                               const JdSpec& merged) {
  const std::vector<Attribute>& attrs = s.attrs(rel);
  const int arity = static_cast<int>(attrs.size());
  const long long k = static_cast<long long>(merged.components.size());
  // Tag 0 is the shared value for a position; tags 1..k are fresh per tuple.
  auto value_at = [&](int pos, long long tag) {
    if (attrs[static_cast<std::size_t>(pos)].kind == AttrKind::Rational)
      return Value::rational(pos * (k + 1) + tag);
    return Value::symbol(tag == 0 ? "v" + std::to_string(pos)
                                  : "n" + std::to_string(pos) + "_" +
                                        std::to_string(tag));
  };
  Instance tableau;
  for (std::size_t j = 0; j < merged.components.size(); ++j) {
    const std::vector<int>& comp = merged.components[j];
    Fact t{rel, {}};
    for (int pos = 0; pos < arity; ++pos) {
      const bool shared = std::binary_search(comp.begin(), comp.end(), pos);
      t.tuple.push_back(value_at(pos, shared ? 0 : static_cast<long long>(j) + 1));
    }
    tableau.insert(t);
  }
  Fact goal{rel, {}};
  for (int pos = 0; pos < arity; ++pos) goal.tuple.push_back(value_at(pos, 0));
  std::vector<Constraint> cs;
  for (const JdSpec& jd : jds) cs.push_back(make_jd(s, rel, jd.components));
  return compute_hull(s, tableau, cs).table.find(goal) >= 0;
}

std::vector<Constraint> normalize_constraints(const Schema& s,
                                              const std::vector<Constraint>& f) {
  std::vector<Constraint> rest;
  std::map<std::string, std::vector<JdSpec>> jds;
  for (const Constraint& c : f) {
    validate_constraint(s, c);
    switch (c.cls()) {
      case ConstraintClass::GeneralUniversal:
        throw UnsupportedClassError(
            "consistent query answering requires denial constraints, join "
            "dependencies, or single-consequent dependencies");
      case ConstraintClass::JoinDependency:
        jds[c.jd->relation].push_back(*c.jd);
        break;
      default:
        rest.push_back(c);
    }
  }
  if (!is_acyclic(dependency_graph(rest, s)))
    throw UnsupportedClassError(
        "consistent query answering requires an acyclic dependency graph "
        "outside of join dependencies");
  std::vector<Constraint> out = rest;
  for (const auto& [rel, attrs] : s.relations) {
    auto it = jds.find(rel);
    static const std::vector<JdSpec> none;
    const std::vector<JdSpec>& given = it == jds.end() ? none : it->second;
    JdSpec merged = merge_jds(s, rel, given);
    if (given.size() > 1 && !conjunction_implies_merge(s, rel, given, merged))
      throw UnsupportedClassError(
          "consistent query answering requires the join dependencies of each "
          "relation to combine into one equivalent join dependency; those "
          "declared on relation '" +
          rel + "' do not");
    out.push_back(make_jd(s, rel, merged.components));
  }
  return out;
}

}  // namespace

CqaContext::CqaContext(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f)
    : schema_(s),
      inst_facts_(i),
      f_(f),
      fp_(normalize_constraints(s, f)),
      g_(compute_hull(s, i, fp_)),
      idx_(g_),
      dg_(dependency_graph(fp_, s)) {
  build_supports();
  build_blocks();
}

// ---------------------------------------------------------------------------
// Supports
// ---------------------------------------------------------------------------

void CqaContext::build_supports() {
  const int n = g_.table.size();
  const int lcount = dg_.h + 2;  // levels -1..h

  // Single-consequent rules indexed by consequent.
  std::vector<std::vector<int>> rules_by_rhs(n);
  std::vector<std::vector<int>> jd_by_rhs(n);
  for (std::size_t r = 0; r < g_.rules.size(); ++r) {
    if (g_.rules[r].rhs.size() != 1) continue;
    rules_by_rhs[g_.rules[r].rhs[0]].push_back(static_cast<int>(r));
    if (g_.rules[r].from_jd)
      jd_by_rhs[g_.rules[r].rhs[0]].push_back(static_cast<int>(r));
  }

  std::vector<std::vector<std::set<SuppVec>>> lev(
      lcount, std::vector<std::set<SuppVec>>(n));
  for (std::size_t t = g_.inst.find_first(); t != FactSet::npos;
       t = g_.inst.find_next(t))
    lev[0][t].insert({static_cast<int>(t)});

  for (int li = 1; li < lcount; ++li) {
    lev[li] = lev[li - 1];
    // Per-fact previous-level tables as vectors for the choice scan.
    std::vector<std::vector<SuppVec>> prev(n);
    for (int v = 0; v < n; ++v)
      prev[v].assign(lev[li - 1][v].begin(), lev[li - 1][v].end());

    for (int t = 0; t < n; ++t) {
      if (g_.inst.test(t)) continue;
      for (int jri : jd_by_rhs[t]) {
        const GroundRule& jr = g_.rules[jri];
        // Choose one deriving rule per premise of the join-dependency rule,
        // then one previous-level support per premise of the chosen rules.
        std::vector<std::size_t> sizes;
        for (int u : jr.lhs) sizes.push_back(rules_by_rhs[u].size());
        for_each_choice(sizes, [&](const std::vector<std::size_t>& pick) {
          std::set<int> needed;
          for (std::size_t d = 0; d < jr.lhs.size(); ++d) {
            const GroundRule& ru =
                g_.rules[rules_by_rhs[jr.lhs[d]][pick[d]]];
            needed.insert(ru.lhs.begin(), ru.lhs.end());
          }
          std::vector<int> needv(needed.begin(), needed.end());
          for_each_support_union(needv, prev, n, [&](const FactSet& u) {
            lev[li][t].insert(set_bits(u));
            return true;
          });
          return true;
        });
      }
    }
  }

  supp_levels_.assign(lcount, std::vector<std::vector<SuppVec>>(n));
  for (int li = 0; li < lcount; ++li)
    for (int t = 0; t < n; ++t)
      supp_levels_[li][t].assign(lev[li][t].begin(), lev[li][t].end());
  supp_.assign(n, {});
  for (int t = 0; t < n; ++t) supp_[t] = minimal_sets(lev[lcount - 1][t]);
}

// ---------------------------------------------------------------------------
// Blocks
// ---------------------------------------------------------------------------

void CqaContext::build_blocks() {
  const int n = g_.table.size();
  const int lcount = dg_.h + 2;  // levels -1..h

  // routes[t]: join-dependency rules containing t in the premises, keyed by
  // their consequent.
  std::vector<std::map<int, std::vector<int>>> routes(n);
  for (std::size_t r = 0; r < g_.rules.size(); ++r) {
    const GroundRule& gr = g_.rules[r];
    if (!gr.from_jd || gr.rhs.size() != 1) continue;
    for (int t : gr.lhs)
      routes[t][gr.rhs[0]].push_back(static_cast<int>(r));
  }

  // Enumerates, for an instance fact t and a rule premise set `lhs`, every
  // way of covering the premises: each premise is either rewritten through a
  // join-dependency rule whose premises contain t (its other premises then
  // need supports) or supported directly.  At least one premise must be
  // rewritten; cb receives each resulting support union.
  auto for_each_cover = [&](int t, const std::vector<int>& lhs,
                            const std::function<void(const FactSet&)>& cb) {
    // Option -1: direct support; option k >= 0: routes[t][f][k].
    std::vector<std::vector<int>> options(lhs.size());
    for (std::size_t d = 0; d < lhs.size(); ++d) {
      if (!supp_[lhs[d]].empty()) options[d].push_back(-1);
      auto it = routes[t].find(lhs[d]);
      if (it != routes[t].end())
        for (std::size_t k = 0; k < it->second.size(); ++k)
          options[d].push_back(static_cast<int>(k));
    }
    std::vector<std::size_t> sizes;
    for (const auto& o : options) sizes.push_back(o.size());
    for_each_choice(sizes, [&](const std::vector<std::size_t>& pick) {
      std::set<int> needed;
      bool routed = false;
      for (std::size_t d = 0; d < lhs.size(); ++d) {
        int opt = options[d][pick[d]];
        if (opt < 0) {
          needed.insert(lhs[d]);
        } else {
          routed = true;
          const GroundRule& jr = g_.rules[routes[t][lhs[d]][opt]];
          for (int m : jr.lhs)
            if (m != t) needed.insert(m);
        }
      }
      if (!routed) return true;
      std::vector<int> needv(needed.begin(), needed.end());
      for_each_support_union(needv, supp_, n, [&](const FactSet& u) {
        cb(u);
        return true;
      });
      return true;
    });
  };

  std::vector<std::vector<std::set<BlockRep>>> lev(
      lcount, std::vector<std::set<BlockRep>>(n));

  // Level -1: non-instance hull facts are blocked by their own absence;
  // instance facts are blocked by covered denial premises.
  for (int t = 0; t < n; ++t)
    if (!g_.inst.test(t)) lev[0][t].insert(BlockRep{{}, t});
  for (std::size_t r = 0; r < g_.rules.size(); ++r) {
    const GroundRule& dr = g_.rules[r];
    if (!dr.rhs.empty()) continue;
    for (std::size_t t = g_.inst.find_first(); t != FactSet::npos;
         t = g_.inst.find_next(t))
      for_each_cover(static_cast<int>(t), dr.lhs, [&](const FactSet& u) {
        lev[0][t].insert(BlockRep{set_bits(u), -1});
      });
  }

  // Levels 0..h: push blocks of a rule's consequent back to any instance
  // fact that can cover the rule's premises.
  for (int li = 1; li < lcount; ++li) {
    lev[li] = lev[li - 1];
    for (std::size_t r = 0; r < g_.rules.size(); ++r) {
      const GroundRule& rr = g_.rules[r];
      if (rr.rhs.size() != 1) continue;
      const std::set<BlockRep>& below = lev[li - 1][rr.rhs[0]];
      if (below.empty()) continue;
      for (std::size_t t = g_.inst.find_first(); t != FactSet::npos;
           t = g_.inst.find_next(t))
        for_each_cover(static_cast<int>(t), rr.lhs, [&](const FactSet& u) {
          for (const BlockRep& b : below) {
            FactSet req = u;
            for (int x : b.require) req.set(x);
            lev[li][t].insert(BlockRep{set_bits(req), b.forbid});
          }
        });
    }
  }

  block_levels_.assign(lcount, std::vector<std::vector<BlockRep>>(n));
  for (int li = 0; li < lcount; ++li)
    for (int t = 0; t < n; ++t)
      block_levels_[li][t].assign(lev[li][t].begin(), lev[li][t].end());

  // Keep only undominated blocks: drop (B, N) when some other (B', N') has
  // B' subset of B and N' subset of N.
  block_.assign(n, {});
  for (int t = 0; t < n; ++t) {
    const auto& all = block_levels_[lcount - 1][t];
    for (const BlockRep& b : all) {
      bool dominated = false;
      for (const BlockRep& a : all) {
        if (a == b) continue;
        if (std::includes(b.require.begin(), b.require.end(),
                          a.require.begin(), a.require.end()) &&
            (a.forbid == -1 || a.forbid == b.forbid)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) block_[t].push_back(b);
    }
  }
}

// ---------------------------------------------------------------------------
// Accessors
// ---------------------------------------------------------------------------

int CqaContext::hull_id(const Fact& fact) const {
  validate_fact(schema_, fact);
  int id = g_.table.find(fact);
  if (id < 0)
    throw ValidationError(to_string(fact) + " is not a hull fact");
  return id;
}

std::vector<Instance> CqaContext::supports_of(const Fact& fact) const {
  std::vector<Instance> out;
  for (const SuppVec& s : supp_[hull_id(fact)]) {
    Instance inst;
    for (int f : s) inst.insert(g_.table.fact(f));
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Instance> CqaContext::supports_of(const Fact& fact,
                                              int level) const {
  if (level < -1 || level > dg_.h)
    throw ValidationError("support level must lie between -1 and " +
                          std::to_string(dg_.h));
  std::vector<Instance> out;
  for (const SuppVec& s : supp_levels_[level + 1][hull_id(fact)]) {
    Instance inst;
    for (int f : s) inst.insert(g_.table.fact(f));
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<std::pair<Instance, Instance>> CqaContext::blocks_of(
    const Fact& fact) const {
  std::vector<std::pair<Instance, Instance>> out;
  for (const BlockRep& b : block_[hull_id(fact)]) {
    Instance req, forb;
    for (int f : b.require) req.insert(g_.table.fact(f));
    if (b.forbid >= 0) forb.insert(g_.table.fact(b.forbid));
    out.emplace_back(std::move(req), std::move(forb));
  }
  return out;
}

std::vector<std::pair<Instance, Instance>> CqaContext::blocks_of(
    const Fact& fact, int level) const {
  if (level < -1 || level > dg_.h)
    throw ValidationError("block level must lie between -1 and " +
                          std::to_string(dg_.h));
  std::vector<std::pair<Instance, Instance>> out;
  for (const BlockRep& b : block_levels_[level + 1][hull_id(fact)]) {
    Instance req, forb;
    for (int f : b.require) req.insert(g_.table.fact(f));
    if (b.forbid >= 0) forb.insert(g_.table.fact(b.forbid));
    out.emplace_back(std::move(req), std::move(forb));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exists-repair test
// ---------------------------------------------------------------------------

struct ExistsRepairSearch {
  static ExistsRepairResult run(const Instance& required,
                                const Instance& forbidden,
                                const CqaContext& ctx) {
    validate_instance(ctx.schema_, required);
    validate_instance(ctx.schema_, forbidden);
    const int n = ctx.g_.table.size();

    std::vector<int> req;
    for (const Fact& f : required) {
      int id = ctx.g_.table.find(f);
      if (id < 0) return {};  // outside the hull: no repair contains it
      req.push_back(id);
    }
    std::vector<int> forb;
    for (const Fact& f : forbidden) {
      int id = ctx.g_.table.find(f);
      if (id >= 0) forb.push_back(id);  // outside the hull: trivially absent
    }

    std::vector<std::size_t> sizes;
    for (int r : req) sizes.push_back(ctx.supp_[r].size());
    for (int b : forb) sizes.push_back(ctx.block_[b].size());

    ExistsRepairResult out;
    for_each_choice(sizes, [&](const std::vector<std::size_t>& pick) {
      FactSet p(n);
      for (std::size_t d = 0; d < req.size(); ++d)
        for (int f : ctx.supp_[req[d]][pick[d]]) p.set(f);
      for (std::size_t d = 0; d < forb.size(); ++d)
        for (int f : ctx.block_[forb[d]][pick[req.size() + d]].require)
          p.set(f);
      FactSet closed = ctx.idx_.closure(p);
      if (!ctx.g_.consistent(closed)) return true;
      for (std::size_t d = 0; d < forb.size(); ++d) {
        int nf = ctx.block_[forb[d]][pick[req.size() + d]].forbid;
        if (nf >= 0 && closed.test(nf)) return true;
      }
      out.exists = true;
      out.witness = make_witness(ctx, req, forb, pick, closed);
      return false;
    });
    return out;
  }

  static RepairWitness make_witness(const CqaContext& ctx,
                                    const std::vector<int>& req,
                                    const std::vector<int>& forb,
                                    const std::vector<std::size_t>& pick,
                                    const FactSet& closed) {
    RepairWitness w;
    for (std::size_t d = 0; d < req.size(); ++d) {
      Instance s;
      for (int f : ctx.supp_[req[d]][pick[d]]) s.insert(ctx.g_.table.fact(f));
      w.supports.emplace_back(ctx.g_.table.fact(req[d]), std::move(s));
    }
    for (std::size_t d = 0; d < forb.size(); ++d) {
      const auto& b = ctx.block_[forb[d]][pick[req.size() + d]];
      Instance breq, bforb;
      for (int f : b.require) breq.insert(ctx.g_.table.fact(f));
      if (b.forbid >= 0) bforb.insert(ctx.g_.table.fact(b.forbid));
      w.blocks.emplace_back(ctx.g_.table.fact(forb[d]), std::move(breq),
                            std::move(bforb));
    }
    w.closure = ctx.g_.table.to_instance(closed);

    // Building the repair by drawing the instance facts inside the closure
    // first (kept freely) and the rest under the no-new-facts flag yields a
    // repair that contains the closure and adds nothing outside the
    // instance, so it realizes the chosen combination.
    RepairStrategy st;
    st.order = std::vector<Fact>{};
    st.b = BChoice::Scripted;
    FactSet inside = ctx.g_.inst & closed;
    FactSet outside = ctx.g_.inst - closed;
    for (std::size_t f = inside.find_first(); f != FactSet::npos;
         f = inside.find_next(f)) {
      st.order->push_back(ctx.g_.table.fact(static_cast<int>(f)));
      st.b_script.push_back(false);
    }
    for (std::size_t f = outside.find_first(); f != FactSet::npos;
         f = outside.find_next(f)) {
      st.order->push_back(ctx.g_.table.fact(static_cast<int>(f)));
      st.b_script.push_back(true);
    }
    w.repair = construct_repair(ctx.schema_, ctx.inst_facts_, ctx.fp_, st);
    return w;
  }
};

ExistsRepairResult exists_repair(const Instance& required,
                                 const Instance& forbidden,
                                 const CqaContext& ctx) {
  return ExistsRepairSearch::run(required, forbidden, ctx);
}

// ---------------------------------------------------------------------------
// CNF conversion
// ---------------------------------------------------------------------------

namespace {

struct LitClause {
  std::set<Fact> plus;
  std::set<Fact> minus;

  friend bool operator==(const LitClause&, const LitClause&) = default;
  friend auto operator<=>(const LitClause&, const LitClause&) = default;

  bool tautology() const {
    for (const Fact& f : plus)
      if (minus.count(f)) return true;
    return false;
  }
};

// CNF of q (pos) or of not-q (!pos), with tautological clauses dropped.
std::vector<LitClause> cnf_of(const Query& q, bool pos, std::size_t cap) {
  auto conjunction = [&](const std::vector<Query>& kids, bool kpos) {
    std::vector<LitClause> out;
    for (const Query& k : kids) {
      std::vector<LitClause> part = cnf_of(k, kpos, cap);
      for (LitClause& c : part) {
        out.push_back(std::move(c));
        if (out.size() > cap)
          throw CapExceededError(
              "the query's conjunctive normal form exceeds " +
              std::to_string(cap) + " clauses");
      }
    }
    return out;
  };
  auto disjunction = [&](const std::vector<Query>& kids, bool kpos) {
    std::vector<LitClause> out{LitClause{}};
    for (const Query& k : kids) {
      std::vector<LitClause> part = cnf_of(k, kpos, cap);
      std::vector<LitClause> next;
      for (const LitClause& a : out)
        for (const LitClause& b : part) {
          LitClause merged = a;
          merged.plus.insert(b.plus.begin(), b.plus.end());
          merged.minus.insert(b.minus.begin(), b.minus.end());
          if (merged.tautology()) continue;
          next.push_back(std::move(merged));
          if (next.size() > cap)
            throw CapExceededError(
                "the query's conjunctive normal form exceeds " +
                std::to_string(cap) + " clauses");
        }
      out = std::move(next);
    }
    return out;
  };

  switch (q.kind) {
    case Query::Kind::True:
      return pos ? std::vector<LitClause>{} : std::vector<LitClause>{{}};
    case Query::Kind::False:
      return pos ? std::vector<LitClause>{{}} : std::vector<LitClause>{};
    case Query::Kind::Atom: {
      LitClause c;
      (pos ? c.plus : c.minus).insert(q.fact);
      return {c};
    }
    case Query::Kind::Not:
      return cnf_of(q.kids.front(), !pos, cap);
    case Query::Kind::And:
      return pos ? conjunction(q.kids, true) : disjunction(q.kids, false);
    case Query::Kind::Or:
      return pos ? disjunction(q.kids, true) : conjunction(q.kids, false);
  }
  throw std::logic_error("unhandled query node");
}

}  // namespace

std::vector<CnfClause> to_cnf(const Query& q, std::size_t clause_cap) {
  std::vector<LitClause> raw = cnf_of(q, true, clause_cap);
  std::set<LitClause> seen;
  std::vector<CnfClause> out;
  for (const LitClause& c : raw) {
    if (!seen.insert(c).second) continue;
    out.push_back(CnfClause{{c.plus.begin(), c.plus.end()},
                            {c.minus.begin(), c.minus.end()}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Top level
// ---------------------------------------------------------------------------

CqaOutcome cqa_explain(const Query& q, const CqaContext& ctx,
                       std::size_t clause_cap) {
  std::vector<CnfClause> cnf = to_cnf(q, clause_cap);
  for (std::size_t ci = 0; ci < cnf.size(); ++ci) {
    // The clause fails in a repair exactly when the repair keeps every
    // negated fact and omits every plain one.
    Instance required(cnf[ci].minus.begin(), cnf[ci].minus.end());
    Instance forbidden(cnf[ci].plus.begin(), cnf[ci].plus.end());
    ExistsRepairResult res = exists_repair(required, forbidden, ctx);
    if (res.exists) {
      CqaOutcome out;
      out.consistently_true = false;
      out.failing_clause = static_cast<int>(ci);
      out.witness = std::move(res.witness);
      return out;
    }
  }
  CqaOutcome out;
  out.consistently_true = true;
  return out;
}

bool cqa(const Query& q, const Schema& s, const Instance& i,
         const std::vector<Constraint>& f, std::size_t clause_cap) {
  CqaContext ctx(s, i, f);
  return cqa_explain(q, ctx, clause_cap).consistently_true;
}

}  // namespace cqadb
