// Command-line front end: loads schema/constraint/instance/query files,
// runs the engine or the reference oracles, and reports through stdout plus
// the exit code (0 yes, 1 no, 2 parse or validation error, 3 unsupported
// constraint class, 4 cap exceeded).

#include "CLI11.hpp"
#include "cqadb/core.hpp"
#include "cqadb/cqa.hpp"
#include "cqadb/grounding.hpp"
#include "cqadb/oracle.hpp"
#include "cqadb/parser.hpp"
#include "cqadb/repair.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cqadb;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file " + path.string());
  out << text;
}

// Paths shared by the engine subcommands.
struct Inputs {
  std::string schema_path;
  std::string constraints_path;
  std::string instance_path;

  Schema schema;
  std::vector<Constraint> constraints;
  Instance instance;

  void load() {
    schema = parse_schema(read_file(schema_path));
    constraints = parse_constraints(read_file(constraints_path), schema);
    instance = parse_instance(read_file(instance_path), schema);
  }
};

void add_input_options(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--schema", in.schema_path, "schema file")->required();
  cmd->add_option("--constraints", in.constraints_path, "constraints file")
      ->required();
  cmd->add_option("--instance", in.instance_path, "instance file")->required();
}

std::string rule_text(const Grounding& g, const GroundRule& r) {
  std::string out;
  for (std::size_t k = 0; k < r.lhs.size(); ++k) {
    if (k) out += ", ";
    out += to_string(g.table.fact(r.lhs[k]));
  }
  out += " -> ";
  if (r.rhs.empty()) {
    out += "false";
  } else {
    for (std::size_t k = 0; k < r.rhs.size(); ++k) {
      if (k) out += " | ";
      out += to_string(g.table.fact(r.rhs[k]));
    }
  }
  out += ".";
  return out;
}

int run_hull(Inputs& in) {
  in.load();
  const Grounding g = compute_hull(in.schema, in.instance, in.constraints);
  std::cout << serialize(g.hull());
  return 0;
}

int run_rules(Inputs& in, bool json) {
  in.load();
  const Grounding g = compute_hull(in.schema, in.instance, in.constraints);
  if (json) {
    nlohmann::json rules = nlohmann::json::array();
    for (const GroundRule& r : g.rules) {
      nlohmann::json jr;
      jr["lhs"] = nlohmann::json::array();
      for (int id : r.lhs) jr["lhs"].push_back(to_string(g.table.fact(id)));
      jr["rhs"] = nlohmann::json::array();
      for (int id : r.rhs) jr["rhs"].push_back(to_string(g.table.fact(id)));
      jr["origin"] = r.origin;
      jr["from_jd"] = r.from_jd;
      rules.push_back(jr);
    }
    std::cout << nlohmann::json{{"rules", rules}}.dump(2) << "\n";
  } else {
    for (const GroundRule& r : g.rules) std::cout << rule_text(g, r) << "\n";
  }
  return 0;
}

int run_graph(Inputs& in, bool json) {
  in.load();
  const Grounding g = compute_hull(in.schema, in.instance, in.constraints);
  const Hypergraph h = build_hypergraph(g);
  std::cout << (json ? to_json(h) : to_dot(h));
  return 0;
}

int run_check_repair(Inputs& in, const std::string& candidate_path) {
  in.load();
  const Instance candidate =
      parse_instance(read_file(candidate_path), in.schema);
  const RepairReport r =
      check_repair(in.schema, in.instance, candidate, in.constraints);
  if (r.verdict) {
    std::cout << "repair\n";
    return 0;
  }
  std::cout << "not a repair: " << to_string(r.violated) << "\n";
  if (r.witness_fact)
    std::cout << "re-addable discarded fact: " << to_string(*r.witness_fact)
              << "\n";
  if (r.witness_facts)
    std::cout << "closure mismatch: " << to_string(*r.witness_facts) << "\n";
  return 1;
}

int run_repair(Inputs& in, const std::string& order_path,
               const std::string& script_path, std::uint64_t seed,
               bool have_seed) {
  in.load();
  RepairStrategy st;
  if (!order_path.empty())
    st.order = parse_fact_sequence(read_file(order_path), in.schema);
  if (have_seed) {
    st.shuffle_seed = seed;
    st.b = BChoice::Seeded;
    st.b_seed = seed;
  }
  if (!script_path.empty()) {
    st.b = BChoice::Scripted;
    std::istringstream ss(read_file(script_path));
    std::string tok;
    while (ss >> tok) {
      if (tok != "0" && tok != "1")
        throw ValidationError("flag script entries must be 0 or 1, found " + tok);
      st.b_script.push_back(tok == "1");
    }
  }
  std::cout << serialize(construct_repair(in.schema, in.instance,
                                          in.constraints, st));
  return 0;
}

int run_repairs(Inputs& in, std::size_t cap) {
  in.load();
  const RepairSet rs = enumerate_repairs(in.schema, in.instance,
                                         in.constraints, cap);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (k) std::cout << "\n";
    std::cout << "# repair " << (k + 1) << "\n" << serialize(rs[k]);
  }
  return 0;
}

void print_witness(const RepairWitness& w, bool explain) {
  if (explain) {
    for (const auto& [f, supp] : w.supports)
      std::cout << "support " << to_string(f) << ": " << to_string(supp)
                << "\n";
    for (const auto& [f, req, forb] : w.blocks)
      std::cout << "block " << to_string(f) << ": require {" << to_string(req)
                << "}; forbid {" << to_string(forb) << "}\n";
    std::cout << "closure: " << to_string(w.closure) << "\n";
  }
  std::cout << "# witness repair\n" << serialize(w.repair);
}

int run_cqa(Inputs& in, const std::string& query_path, bool explain,
            std::size_t cnf_cap) {
  in.load();
  const Query q = parse_query(read_file(query_path), in.schema);
  const CqaContext ctx(in.schema, in.instance, in.constraints);
  const CqaOutcome out = cqa_explain(q, ctx, cnf_cap);
  if (out.consistently_true) {
    std::cout << "consistently true\n";
    return 0;
  }
  std::cout << "not consistently true\n";
  if (explain) std::cout << "failing clause: " << (out.failing_clause + 1)
                         << "\n";
  if (out.witness) print_witness(*out.witness, explain);
  return 1;
}

int run_oracle_cqa(Inputs& in, const std::string& query_path,
                   std::size_t cap) {
  in.load();
  const Query q = parse_query(read_file(query_path), in.schema);
  if (brute_cqa(q, in.schema, in.instance, in.constraints, cap)) {
    std::cout << "consistently true\n";
    return 0;
  }
  std::cout << "not consistently true\n";
  return 1;
}

void write_case(const std::string& out_dir, const Schema& s,
                const std::vector<Constraint>& f, const Instance& i,
                const Query& q) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "schema.txt", serialize(s));
  write_file(dir / "constraints.txt", serialize(f));
  write_file(dir / "instance.txt", serialize(i));
  write_file(dir / "query.txt", serialize(q));
  for (const char* name :
       {"schema.txt", "constraints.txt", "instance.txt", "query.txt"})
    std::cout << "wrote " << (dir / name).string() << "\n";
}

Graph parse_edges(int vertices, const std::string& text) {
  Graph g;
  g.n = vertices;
  std::istringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const std::size_t dash = part.find('-');
    if (dash == std::string::npos)
      throw ValidationError("edge '" + part + "' must look like 2-5");
    try {
      g.edges.emplace_back(std::stoi(part.substr(0, dash)),
                           std::stoi(part.substr(dash + 1)));
    } catch (const std::exception&) {
      throw ValidationError("edge '" + part + "' must name two vertex numbers");
    }
  }
  return g;
}

Qbf parse_qbf(int universals, int existentials, const std::string& text) {
  Qbf psi;
  psi.n_universal = universals;
  psi.n_existential = existentials;
  std::istringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    std::istringstream cs(part);
    std::string lit;
    std::vector<QbfLiteral> lits;
    while (std::getline(cs, lit, ',')) {
      int v = 0;
      try {
        v = std::stoi(lit);
      } catch (const std::exception&) {
        throw ValidationError("literal '" + lit + "' must be a signed variable");
      }
      if (v == 0) throw ValidationError("literal 0 is not a variable");
      lits.push_back(QbfLiteral{v < 0 ? -v : v, v > 0});
    }
    if (lits.size() != 3)
      throw ValidationError("clause '" + part + "' must hold exactly 3 literals");
    psi.clauses.push_back(QbfClause{lits[0], lits[1], lits[2]});
  }
  return psi;
}

GenProfile profile_of(const std::string& name) {
  if (name == "denial") return GenProfile::DenialOnly;
  if (name == "acyclic") return GenProfile::AcyclicTgd;
  if (name == "acyclic-jd") return GenProfile::AcyclicTgdJd;
  if (name == "cyclic") return GenProfile::CyclicTgd;
  if (name == "general") return GenProfile::GeneralUniversal;
  throw ValidationError("unknown profile '" + name +
                   "' (denial, acyclic, acyclic-jd, cyclic, general)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistent query answering over inconsistent databases"};
  app.require_subcommand(1);

  Inputs in;
  std::string candidate_path, query_path, order_path, script_path, out_dir;
  std::uint64_t seed = 0;
  std::size_t cap = 18, cnf_cap = 4096, hull_cap = 14;
  bool json = false, explain = false;
  int vertices = 0, universals = 0, existentials = 0;
  std::string edges, clauses, profile = "acyclic-jd";

  CLI::App* hull = app.add_subcommand("hull", "print the saturated instance");
  add_input_options(hull, in);

  CLI::App* rules = app.add_subcommand("rules", "print the ground rules");
  add_input_options(rules, in);
  rules->add_flag("--json", json, "emit JSON");

  CLI::App* graph =
      app.add_subcommand("graph", "print the extended conflict hypergraph");
  add_input_options(graph, in);
  graph->add_flag("--json", json, "emit JSON instead of DOT");
  graph->add_flag("--dot", "emit DOT (the default)");

  CLI::App* check =
      app.add_subcommand("check-repair", "test whether a candidate repairs "
                                         "the instance (exit 0 iff it does)");
  add_input_options(check, in);
  check->add_option("--candidate", candidate_path, "candidate instance file")
      ->required();

  CLI::App* repair =
      app.add_subcommand("repair", "construct one repair deterministically");
  add_input_options(repair, in);
  repair->add_option("--order", order_path,
                     "file listing every instance fact in processing order");
  repair->add_option("--b-script", script_path,
                     "file of 0/1 discard flags, one per instance fact");
  CLI::Option* seed_opt = repair->add_option(
      "--seed", seed, "shuffle the order and draw seeded discard flags");

  CLI::App* repairs = app.add_subcommand("repairs", "enumerate every repair");
  add_input_options(repairs, in);
  repairs->add_option("--cap", cap, "largest admissible hull size");

  CLI::App* cqa_cmd = app.add_subcommand(
      "cqa", "decide consistent truth of a query (exit 0 iff it holds in "
             "every repair)");
  add_input_options(cqa_cmd, in);
  cqa_cmd->add_option("--query", query_path, "query file")->required();
  cqa_cmd->add_flag("--explain", explain,
                    "print the failing clause and its witness combination");
  cqa_cmd->add_option("--cnf-cap", cnf_cap,
                      "largest admissible clausal normal form");

  CLI::App* oracle = app.add_subcommand(
      "oracle-cqa", "decide consistent truth by enumerating all repairs");
  add_input_options(oracle, in);
  oracle->add_option("--query", query_path, "query file")->required();
  oracle->add_option("--cap", cap, "largest admissible hull size");

  CLI::App* gen = app.add_subcommand("gen", "write a generated test case");
  gen->require_subcommand(1);
  CLI::App* gen3 = gen->add_subcommand(
      "3col", "encode graph 3-colorability as a repair question");
  gen3->add_option("--vertices", vertices, "vertex count")->required();
  gen3->add_option("--edges", edges, "comma list of edges, e.g. 1-2,2-3")
      ->required();
  gen3->add_option("--out", out_dir, "output directory")->required();
  CLI::App* genq = gen->add_subcommand(
      "qbf", "encode a forall-exists 3-CNF formula as a query question");
  genq->add_option("--universals", universals, "universal variable count")
      ->required();
  genq->add_option("--existentials", existentials,
                   "existential variable count")
      ->required();
  genq->add_option("--clauses", clauses,
                   "semicolon list of 3-literal clauses, e.g. 1,-2,3;2,3,4")
      ->required();
  genq->add_option("--out", out_dir, "output directory")->required();
  CLI::App* genr = gen->add_subcommand("random", "draw a seeded random case");
  genr->add_option("--seed", seed, "generator seed")->required();
  genr->add_option("--profile", profile,
                   "denial, acyclic, acyclic-jd, cyclic, or general");
  genr->add_option("--hull-cap", hull_cap, "largest admissible hull size");
  genr->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(hull)) return run_hull(in);
    if (app.got_subcommand(rules)) return run_rules(in, json);
    if (app.got_subcommand(graph)) return run_graph(in, json);
    if (app.got_subcommand(check)) return run_check_repair(in, candidate_path);
    if (app.got_subcommand(repair))
      return run_repair(in, order_path, script_path, seed,
                        seed_opt->count() > 0);
    if (app.got_subcommand(repairs)) return run_repairs(in, cap);
    if (app.got_subcommand(cqa_cmd))
      return run_cqa(in, query_path, explain, cnf_cap);
    if (app.got_subcommand(oracle))
      return run_oracle_cqa(in, query_path, cap);
    if (gen->got_subcommand(gen3)) {
      const Reduction r = reduce_3col(parse_edges(vertices, edges));
      write_case(out_dir, r.schema, r.constraints, r.instance, r.query);
      return 0;
    }
    if (gen->got_subcommand(genq)) {
      const Reduction r =
          reduce_qbf(parse_qbf(universals, existentials, clauses));
      write_case(out_dir, r.schema, r.constraints, r.instance, r.query);
      return 0;
    }
    if (gen->got_subcommand(genr)) {
      const GeneratedCase c = gen_random(seed, profile_of(profile), hull_cap);
      write_case(out_dir, c.schema, c.constraints, c.instance,
                 gen_random_query(seed, c));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedClassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
