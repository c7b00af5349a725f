// Copyright 2026 The ccorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ccorr: command-line front end over JSON files.
//
// Exit codes: 0 when the property holds or the command succeeded, 1 when a
// checked property fails, 2 on usage, schema or model errors.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cc/bell.hpp"
#include "cc/causal_graph.hpp"
#include "cc/classical.hpp"
#include "cc/correlation.hpp"
#include "cc/dist.hpp"
#include "cc/errors.hpp"
#include "cc/hbn.hpp"
#include "cc/json_io.hpp"
#include "cc/quantum.hpp"

#ifndef CC_VERSION
#define CC_VERSION "0.0.0"
#endif

namespace {

using cc::io::Json;

struct Result {
  Json payload;
  int code = 0;
};

struct Options {
  std::string graph, dist, model, hbn, out, other;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string src, dst, edge, via, kind = "classical", box = "none";
  std::vector<std::string> order;
  std::size_t parties = 2, settings = 2, outcomes = 2, source = 1, size = 2, kraus = 1;
};

std::string require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw CLI::ValidationError(flag, "is required for this command");
  return value;
}

cc::CausalGraph load_graph(const Options& o) {
  return cc::io::graph_from_json(cc::io::read_file(require(o.graph, "--graph")));
}
cc::JointDistribution load_dist(const Options& o) {
  return cc::io::dist_from_json(cc::io::read_file(require(o.dist, "--dist")));
}
cc::classical::Model load_classical(const Options& o) {
  return cc::io::classical_from_json(cc::io::read_file(require(o.model, "--model")));
}
cc::quantum::Model load_quantum(const Options& o) {
  return cc::io::quantum_from_json(cc::io::read_file(require(o.model, "--model")));
}
cc::hbn::Net load_hbn(const Options& o) {
  return cc::io::hbn_from_json(cc::io::read_file(require(o.hbn, "--hbn")));
}

std::optional<std::vector<cc::NodeId>> order_of(const Options& o) {
  if (o.order.empty()) return std::nullopt;
  return o.order;
}

Result graph_validate(const Options& o) {
  const auto g = load_graph(o);
  const auto problems = cc::validate(g);
  Json j{{"ok", problems.empty()}, {"violations", problems}};
  if (problems.empty()) {
    j["topological_order"] = cc::topological_order(g);
    Json pairs = Json::array();
    for (const auto& p : cc::maximal_disjoint_past_pairs(g))
      pairs.push_back({cc::io::to_json(p.first), cc::io::to_json(p.second)});
    j["maximal_disjoint_past_pairs"] = pairs;
  }
  return {j, problems.empty() ? 0 : 1};
}

Result check_correlation(const Options& o) {
  const auto v = cc::is_correlation(load_graph(o), load_dist(o), o.tol.value_or(1e-9));
  return {cc::io::to_json(v), v.is_correlation ? 0 : 1};
}

Result poset_closure(const Options& o) {
  const auto g = load_graph(o);
  if (!o.other.empty()) {
    const auto h = cc::io::graph_from_json(cc::io::read_file(o.other));
    const bool eq = cc::poset_equal(g, h);
    return {Json{{"poset_equal", eq}}, eq ? 0 : 1};
  }
  return {cc::io::to_json(cc::transitive_closure(g)), 0};
}

Json validated(const std::vector<cc::ModelViolation>& v) {
  if (!v.empty()) {
    std::string msg = "invalid model:";
    for (const auto& x : v) msg += " [" + x.where + ": " + x.what + "]";
    throw cc::InvalidModel(msg);
  }
  return {};
}

Result eval_classical(const Options& o) {
  const auto m = load_classical(o);
  validated(cc::classical::validate_model(m));
  return {cc::io::to_json(cc::classical::evaluate(m, order_of(o))), 0};
}

Result eval_quantum(const Options& o) {
  const auto m = load_quantum(o);
  validated(cc::quantum::validate_model(m, o.tol.value_or(cc::quantum::kCompletenessTol)));
  return {cc::io::to_json(cc::quantum::evaluate(m, order_of(o))), 0};
}

Result eval_hbn(const Options& o) {
  const auto h = load_hbn(o);
  validated(cc::hbn::validate(h));
  return {cc::io::to_json(cc::hbn::evaluate(h)), 0};
}

Result to_hbn(const Options& o) { return {cc::io::to_json(cc::hbn::from_classical(load_classical(o))), 0}; }

Result from_hbn(const Options& o) { return {cc::io::to_json(cc::hbn::to_classical(load_hbn(o))), 0}; }

Result push_determinism(const Options& o) {
  return {cc::io::to_json(cc::classical::push_back_determinism(load_classical(o))), 0};
}

Result embed_quantum(const Options& o) {
  return {cc::io::to_json(cc::quantum::decohere_embed(load_classical(o))), 0};
}

Result lift_edge(const Options& o) {
  std::optional<cc::EdgeId> id;
  if (!o.edge.empty()) id = o.edge;
  return {cc::io::to_json(cc::classical::lift_trivial_edge(load_classical(o), require(o.src, "--src"),
                                                           require(o.dst, "--dst"), id)),
          0};
}

Result reroute_edge(const Options& o) {
  return {cc::io::to_json(cc::classical::reroute_transitive_edge(load_classical(o), require(o.edge, "--edge"),
                                                                 require(o.via, "--via"))),
          0};
}

cc::bell::Scenario scenario_of(const Options& o) {
  return cc::bell::Scenario::uniform(o.parties, o.settings, o.outcomes, o.source);
}

Result bell_gen(const Options& o) {
  const auto sc = scenario_of(o);
  if (o.box == "none") return {cc::io::to_json(cc::bell::make_bell_graph(sc)), 0};
  if (o.box == "uniform") {
    std::vector<cc::Variable> vars;
    for (const auto& n : cc::bell::make_bell_graph(sc).nodes()) vars.push_back({n.id, n.outcomes});
    return {cc::io::to_json(cc::JointDistribution::uniform(vars)), 0};
  }
  if (o.box == "pr") {
    if (sc.parties != 2 || o.settings != 2 || o.outcomes != 2 || o.source != 1)
      throw cc::ShapeMismatch("the PR box needs --parties 2 --settings 2 --outcomes 2 --source 1");
    return {cc::io::to_json(cc::bell::behaviour_joint(sc, cc::bell::pr_box_conditional())), 0};
  }
  throw CLI::ValidationError("--box", "must be none, uniform or pr");
}

Result bell_check_ns(const Options& o) {
  const auto p = load_dist(o);
  const auto v = cc::bell::check_free_will_no_signalling(cc::bell::infer_scenario(p), p, o.tol.value_or(1e-9));
  return {cc::io::to_json(v), v.holds ? 0 : 1};
}

Result bell_local(const Options& o) {
  const auto p = load_dist(o);
  const auto sc = cc::bell::infer_scenario(p);
  const double tol = o.tol.value_or(1e-7);
  try {
    const auto v = cc::bell::local_membership(sc, p, tol, o.exact);
    return {cc::io::to_json(v), v.is_local ? 0 : 1};
  } catch (const cc::NotNoSignalling& e) {
    return {Json{{"is_local", false},
                 {"tol", tol},
                 {"reason", e.what()},
                 {"no_signalling", cc::io::to_json(cc::bell::check_free_will_no_signalling(sc, p, tol))}},
            1};
  }
}

cc::bell::QuantumBellSetup chsh_setup() {
  using std::numbers::pi;
  cc::bell::QuantumBellSetup s;
  s.local_dims = {2, 2};
  s.states = {cc::bell::singlet()};
  s.povms = {{cc::bell::qubit_measurement(0), cc::bell::qubit_measurement(pi / 2)},
             {cc::bell::qubit_measurement(pi / 4), cc::bell::qubit_measurement(-pi / 4)}};
  s.setting_dists = {{0.5, 0.5}, {0.5, 0.5}};
  s.source_dist = {1.0};
  return s;
}

Result bell_quantum(const Options& o) {
  cc::bell::QuantumBellSetup setup =
      o.model.empty() ? chsh_setup() : cc::io::bell_setup_from_json(cc::io::read_file(o.model));
  cc::bell::Scenario sc;
  sc.parties = setup.povms.size();
  for (const auto& party : setup.povms) {
    sc.settings.push_back(party.size());
    sc.outcomes.push_back(party.empty() ? 0 : party.front().size());
  }
  sc.source = setup.states.size();
  return {cc::io::to_json(cc::bell::quantum_bell_model(sc, setup)), 0};
}

Result chsh(const Options& o) {
  const double s = cc::bell::chsh_value(load_dist(o));
  const double tol = o.tol.value_or(1e-9);
  return {Json{{"chsh", s}, {"local_bound", 2.0}, {"exceeds_local_bound", std::abs(s) > 2.0 + tol}}, 0};
}

Result compress_cg(const Options& o) {
  const auto p = load_dist(o);
  const auto f = cc::io::coarse_graining_from_json(cc::io::read_file(require(o.model, "--model")));
  return {cc::io::to_json(cc::factor_coarse_graining(p, f, o.tol.value_or(0.0))), 0};
}

Result random_model(const Options& o) {
  const auto g = load_graph(o);
  if (o.kind == "classical") return {cc::io::to_json(cc::classical::random_model(g, o.size, o.seed)), 0};
  if (o.kind == "quantum") return {cc::io::to_json(cc::quantum::random_model(g, o.size, o.kraus, o.seed)), 0};
  if (o.kind == "hbn") return {cc::io::to_json(cc::hbn::random_net(g, o.size, o.seed)), 0};
  throw CLI::ValidationError("--kind", "must be classical, quantum or hbn");
}

void emit(const Json& payload, const std::string& out) {
  const std::string text = payload.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw cc::SchemaError("cannot write '" + out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal-structure correlation toolkit"};
  app.set_version_flag("--version", std::string("ccorr ") + CC_VERSION);
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    std::function<Result(const Options&)> run;
    std::vector<std::string> flags;
  };
  const std::vector<Command> commands = {
      {"graph-validate", "Check a causal graph for acyclicity and consistency", graph_validate, {"graph"}},
      {"check-correlation", "Test the disjoint-past factorization of a distribution", check_correlation,
       {"graph", "dist", "tol"}},
      {"poset-closure", "Transitive closure, or reachability equality with --other", poset_closure,
       {"graph", "other"}},
      {"eval-classical", "Evaluate a classical hidden-variable model", eval_classical, {"model", "order"}},
      {"eval-quantum", "Evaluate a quantum model", eval_quantum, {"model", "order", "tol"}},
      {"eval-hbn", "Evaluate a hidden Bayesian network", eval_hbn, {"hbn"}},
      {"to-hbn", "Convert a classical model to a hidden Bayesian network", to_hbn, {"model"}},
      {"from-hbn", "Convert a hidden Bayesian network to a classical model", from_hbn, {"hbn"}},
      {"push-determinism", "Make every non-root gate deterministic", push_determinism, {"model"}},
      {"embed-quantum", "Embed a classical model as a decohered quantum model", embed_quantum, {"model"}},
      {"lift-edge", "Add an edge carrying a one-point alphabet", lift_edge, {"model", "src", "dst", "edge"}},
      {"reroute-edge", "Relay a direct edge through an intermediate node", reroute_edge,
       {"model", "edge", "via"}},
      {"bell-gen", "Generate a Bell-scenario graph or a standard box", bell_gen,
       {"parties", "settings", "outcomes", "source", "box"}},
      {"bell-check-ns", "Check the free-will and no-signalling equations", bell_check_ns, {"dist", "tol"}},
      {"bell-local", "Local-polytope membership by linear programming", bell_local, {"dist", "tol", "exact"}},
      {"bell-quantum", "Build a quantum Bell model (default: CHSH-optimal singlet)", bell_quantum, {"model"}},
      {"chsh", "CHSH value of a two-party binary Bell distribution", chsh, {"dist", "tol"}},
      {"compress-cg", "Factor a coarse-graining within error --tol", compress_cg, {"dist", "model", "tol"}},
      {"random-model", "Random classical, quantum or HBN model on a graph", random_model,
       {"graph", "kind", "size", "kraus", "seed"}},
  };

  const std::function<Result(const Options&)>* selected = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    for (const auto& f : c.flags) {
      if (f == "graph") sub->add_option("--graph", o.graph, "Causal graph JSON");
      if (f == "dist") sub->add_option("--dist", o.dist, "Distribution JSON");
      if (f == "model") sub->add_option("--model", o.model, "Model JSON");
      if (f == "hbn") sub->add_option("--hbn", o.hbn, "Hidden Bayesian network JSON");
      if (f == "tol") sub->add_option("--tol", o.tol, "Tolerance override");
      if (f == "seed") sub->add_option("--seed", o.seed, "Random seed");
      if (f == "exact") sub->add_flag("--exact", o.exact, "Rational arithmetic");
      if (f == "other") sub->add_option("--other", o.other, "Second graph JSON");
      if (f == "order") sub->add_option("--order", o.order, "Topological order to contract along")->delimiter(',');
      if (f == "src") sub->add_option("--src", o.src, "Source node");
      if (f == "dst") sub->add_option("--dst", o.dst, "Target node");
      if (f == "edge") sub->add_option("--edge", o.edge, "Edge id");
      if (f == "via") sub->add_option("--via", o.via, "Relay node");
      if (f == "parties") sub->add_option("--parties", o.parties, "Number of parties");
      if (f == "settings") sub->add_option("--settings", o.settings, "Settings per party");
      if (f == "outcomes") sub->add_option("--outcomes", o.outcomes, "Outcomes per party");
      if (f == "source") sub->add_option("--source", o.source, "Source outcomes");
      if (f == "box") sub->add_option("--box", o.box, "none, uniform or pr");
      if (f == "kind") sub->add_option("--kind", o.kind, "classical, quantum or hbn");
      if (f == "size") sub->add_option("--size", o.size, "Alphabet size or dimension per edge/node");
      if (f == "kraus") sub->add_option("--kraus", o.kraus, "Kraus operators per outcome");
    }
    sub->add_option("--out", o.out, "Write the payload to this file");
    sub->callback([&selected, &c] { selected = &c.run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Result r = (*selected)(o);
    emit(r.payload, o.out);
    return r.code;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "ccorr: " << e.what() << "\n";
  } catch (const cc::Error& e) {
    std::cerr << "ccorr: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "ccorr: " << e.what() << "\n";
  }
  return 2;
}
