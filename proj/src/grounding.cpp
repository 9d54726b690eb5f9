#include "cqadb/grounding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace cqadb {

// ---------------------------------------------------------------------------
// FactTable
// ---------------------------------------------------------------------------

int FactTable::intern(const Fact& f) {
  if (finalized_) throw Error("intern after finalize");
  auto [it, fresh] = ids_.emplace(f, static_cast<int>(facts_.size()));
  if (fresh) facts_.push_back(f);
  return it->second;
}

int FactTable::find(const Fact& f) const {
  auto it = ids_.find(f);
  return it == ids_.end() ? -1 : it->second;
}

std::vector<int> FactTable::finalize() {
  if (finalized_) throw Error("finalize twice");
  finalized_ = true;
  std::vector<int> remap(facts_.size());
  // ids_ iterates facts in canonical order; assign ranks in that order.
  int rank = 0;
  for (auto& [fact, id] : ids_) {
    remap[id] = rank++;
  }
  std::vector<Fact> sorted(facts_.size());
  for (const auto& [fact, id] : ids_) sorted[remap[id]] = fact;
  facts_ = std::move(sorted);
  for (auto& [fact, id] : ids_) id = remap[id];
  return remap;
}

Instance FactTable::to_instance(const FactSet& s) const {
  Instance out;
  for (std::size_t b = s.find_first(); b != FactSet::npos; b = s.find_next(b))
    out.insert(facts_[b]);
  return out;
}

FactSet FactTable::to_set(const Instance& i) const {
  FactSet out(facts_.size());
  for (const Fact& f : i) {
    int id = find(f);
    if (id < 0)
      throw ValidationError("fact " + to_string(f) + " is outside the hull");
    out.set(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hull fixpoint
// ---------------------------------------------------------------------------

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

int Grounding::violated_rule(const FactSet& j) const {
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const GroundRule& rule = rules[r];
    bool lhs_in = true;
    for (int f : rule.lhs)
      if (!j.test(f)) {
        lhs_in = false;
        break;
      }
    if (!lhs_in) continue;
    bool rhs_hit = false;
    for (int f : rule.rhs)
      if (j.test(f)) {
        rhs_hit = true;
        break;
      }
    if (!rhs_hit) return static_cast<int>(r);
  }
  return -1;
}

Grounding compute_hull(const Schema& s, const Instance& i,
                       const std::vector<Constraint>& f) {
  validate_instance(s, i);
  for (const Constraint& c : f) validate_constraint(s, c);

  Grounding g;
  g.schema = s;
  g.constraints = f;
  for (const Fact& fact : i) g.table.intern(fact);

  // Dedup key: lhs set, rhs set, and whether the origin is a join dependency
  // (support computation needs join-dependency rules kept apart).
  std::map<std::tuple<std::vector<int>, std::vector<int>, bool>, int> seen;
  std::set<int> neg;

  bool grew = true;
  while (grew) {
    grew = false;
    Instance hull_now = g.table.to_instance(g.table.full_set());
    for (std::size_t ci = 0; ci < f.size(); ++ci) {
      const Constraint& c = f[ci];
      bool jd = c.cls() == ConstraintClass::JoinDependency;
      for_each_grounding(
          hull_now, c,
          [&](const std::vector<Fact>& lhs_facts,
              const std::vector<Fact>& rhs_facts) {
            GroundRule rule;
            rule.origin = static_cast<int>(ci);
            rule.from_jd = jd;
            for (const Fact& lf : lhs_facts)
              rule.matched.push_back(g.table.intern(lf));
            rule.lhs = sorted_unique(rule.matched);
            for (const Fact& rf : rhs_facts) {
              int before = g.table.size();
              int id = g.table.intern(rf);
              if (id >= before) grew = true;
              rule.rhs.push_back(id);
              neg.insert(id);
            }
            rule.rhs = sorted_unique(rule.rhs);
            auto key = std::make_tuple(rule.lhs, rule.rhs, rule.from_jd);
            if (!seen.count(key)) {
              seen.emplace(std::move(key), static_cast<int>(g.rules.size()));
              g.rules.push_back(std::move(rule));
            }
            return true;
          });
    }
  }

  // Canonicalize: ids become canonical ranks, rules get remapped and sorted.
  std::vector<int> remap = g.table.finalize();
  g.inst = g.table.empty_set();
  for (const Fact& fact : i) g.inst.set(g.table.find(fact));
  g.hull_neg = g.table.empty_set();
  for (int old_id : neg) g.hull_neg.set(remap[old_id]);
  for (GroundRule& r : g.rules) {
    for (int& x : r.lhs) x = remap[x];
    for (int& x : r.rhs) x = remap[x];
    for (int& x : r.matched) x = remap[x];
    std::sort(r.lhs.begin(), r.lhs.end());
    std::sort(r.rhs.begin(), r.rhs.end());
  }
  std::sort(g.rules.begin(), g.rules.end(),
            [](const GroundRule& a, const GroundRule& b) {
              if (a.lhs != b.lhs) return a.lhs < b.lhs;
              if (a.rhs != b.rhs) return a.rhs < b.rhs;
              return a.from_jd < b.from_jd;
            });
  return g;
}

const std::vector<GroundRule>& ground_rules(const Grounding& g) {
  return g.rules;
}

// ---------------------------------------------------------------------------
// Extended conflict hypergraph
// ---------------------------------------------------------------------------

int Hypergraph::vertex_index(const Literal& l) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), l);
  if (it == vertices.end() || !(*it == l)) return -1;
  return static_cast<int>(it - vertices.begin());
}

Hypergraph build_hypergraph(const Grounding& g) {
  Hypergraph h;
  int n = g.table.size();
  // Vertex order: ascending fact id, positive literal before negative.
  std::vector<int> pos_idx(n, -1), neg_idx(n, -1);
  for (int f = 0; f < n; ++f) {
    pos_idx[f] = static_cast<int>(h.vertices.size());
    h.vertices.push_back(Literal{g.table.fact(f), true});
    if (g.hull_neg.test(f)) {
      neg_idx[f] = static_cast<int>(h.vertices.size());
      h.vertices.push_back(Literal{g.table.fact(f), false});
    }
  }
  std::set<std::vector<int>> seen;
  for (const GroundRule& r : g.rules) {
    std::vector<int> edge;
    for (int f : r.lhs) edge.push_back(pos_idx[f]);
    for (int f : r.rhs) edge.push_back(neg_idx[f]);
    edge = sorted_unique(std::move(edge));
    if (seen.insert(edge).second) h.conflict_edges.push_back(std::move(edge));
  }
  std::sort(h.conflict_edges.begin(), h.conflict_edges.end());
  for (std::size_t f = g.hull_neg.find_first(); f != FactSet::npos;
       f = g.hull_neg.find_next(f)) {
    h.stabilizing_edges.push_back(
        {pos_idx[f], neg_idx[f]});
  }
  return h;
}

bool is_maximal_independent(const Hypergraph& h,
                            const std::vector<Literal>& lits) {
  std::vector<char> in(h.vertices.size(), 0);
  for (const Literal& l : lits) {
    int v = h.vertex_index(l);
    if (v < 0) return false;  // not a set of hull literals
    in[v] = 1;
  }
  auto contained = [&](const std::vector<int>& edge, int extra) {
    for (int v : edge)
      if (!in[v] && v != extra) return false;
    return true;
  };
  auto blocked = [&](int extra) {
    for (const auto& e : h.conflict_edges)
      if (std::find(e.begin(), e.end(), extra) != e.end() &&
          contained(e, extra))
        return true;
    for (const auto& e : h.stabilizing_edges)
      if (std::find(e.begin(), e.end(), extra) != e.end() &&
          contained(e, extra))
        return true;
    return false;
  };
  for (const auto& e : h.conflict_edges)
    if (contained(e, -1)) return false;
  for (const auto& e : h.stabilizing_edges)
    if (contained(e, -1)) return false;
  for (std::size_t v = 0; v < h.vertices.size(); ++v)
    if (!in[v] && !blocked(static_cast<int>(v))) return false;
  return true;
}

std::vector<Literal> complement(const Grounding& g, const Instance& iprime) {
  std::vector<Literal> out;
  for (const Fact& f : iprime) out.push_back(Literal{f, true});
  for (std::size_t b = g.hull_neg.find_first(); b != FactSet::npos;
       b = g.hull_neg.find_next(b)) {
    const Fact& f = g.table.fact(static_cast<int>(b));
    if (!iprime.count(f)) out.push_back(Literal{f, false});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Instance positive_projection(const std::vector<Literal>& lits) {
  Instance out;
  for (const Literal& l : lits)
    if (l.positive) out.insert(l.fact);
  return out;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string to_dot(const Hypergraph& h) {
  std::ostringstream os;
  os << "graph hypergraph {\n";
  os << "  node [shape=box];\n";
  for (std::size_t v = 0; v < h.vertices.size(); ++v) {
    os << "  v" << v << " [label=\"" << to_string(h.vertices[v]) << "\"];\n";
  }
  // Each conflict edge becomes a diamond joint node linked to its vertices;
  // binary edges short-circuit to a plain edge.
  for (std::size_t e = 0; e < h.conflict_edges.size(); ++e) {
    const auto& edge = h.conflict_edges[e];
    if (edge.size() == 2) {
      os << "  v" << edge[0] << " -- v" << edge[1] << ";\n";
    } else {
      os << "  e" << e << " [shape=diamond, label=\"\", width=0.15, "
            "height=0.15];\n";
      for (int v : edge) os << "  e" << e << " -- v" << v << ";\n";
    }
  }
  for (const auto& edge : h.stabilizing_edges) {
    os << "  v" << edge[0] << " -- v" << edge[1] << " [style=dotted];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_json(const Hypergraph& h) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  os << "{\n  \"vertices\": [";
  for (std::size_t v = 0; v < h.vertices.size(); ++v) {
    if (v) os << ", ";
    os << quote(to_string(h.vertices[v]));
  }
  os << "],\n  \"conflict_edges\": [";
  auto edge_list = [&](const std::vector<std::vector<int>>& edges) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (e) os << ", ";
      os << "[";
      for (std::size_t k = 0; k < edges[e].size(); ++k) {
        if (k) os << ", ";
        os << quote(to_string(h.vertices[edges[e][k]]));
      }
      os << "]";
    }
  };
  edge_list(h.conflict_edges);
  os << "],\n  \"stabilizing_edges\": [";
  edge_list(h.stabilizing_edges);
  os << "]\n}\n";
  return os.str();
}

}  // namespace cqadb
