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

#include "cc/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cc/errors.hpp"

namespace cc::io {

namespace {

void check_object(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw SchemaError(where + ": unknown field '" + key + "'");
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

const Json& array_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  return j;
}

std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

std::size_t get_size(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw SchemaError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

double get_double(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> get_doubles(const Json& j, const std::string& where) {
  std::vector<double> out;
  for (const auto& x : array_of(j, where)) out.push_back(get_double(x, where));
  return out;
}

std::vector<std::size_t> get_sizes(const Json& j, const std::string& where) {
  std::vector<std::size_t> out;
  for (const auto& x : array_of(j, where)) out.push_back(get_size(x, where));
  return out;
}

std::vector<std::string> get_strings(const Json& j, const std::string& where) {
  std::vector<std::string> out;
  for (const auto& x : array_of(j, where)) out.push_back(get_string(x, where));
  return out;
}

quantum::Complex get_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(where + ": expected a [re, im] pair");
  return {get_double(j[0], where), get_double(j[1], where)};
}

Json complex_json(const quantum::Complex& z) { return Json::array({z.real(), z.imag()}); }

quantum::Matrix get_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  array_of(j, where);
  if (j.size() != rows * cols)
    throw SchemaError(where + ": expected " + std::to_string(rows * cols) + " entries");
  quantum::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_complex(j[r * cols + c], where);
  return m;
}

Json matrix_json(const quantum::Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_json(m(r, c)));
  return out;
}

template <class F>
auto wrap(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

}  // namespace

CausalGraph graph_from_json(const Json& j) {
  check_object(j, {"nodes", "edges"}, "graph");
  std::vector<Node> nodes;
  for (const auto& n : array_of(field(j, "nodes", "graph"), "graph.nodes")) {
    check_object(n, {"id", "outcomes"}, "graph.nodes[]");
    nodes.push_back({get_string(field(n, "id", "node"), "node.id"),
                     get_size(field(n, "outcomes", "node"), "node.outcomes")});
  }
  std::vector<Edge> edges;
  for (const auto& e : array_of(field(j, "edges", "graph"), "graph.edges")) {
    check_object(e, {"id", "src", "dst"}, "graph.edges[]");
    edges.push_back({get_string(field(e, "id", "edge"), "edge.id"),
                     get_string(field(e, "src", "edge"), "edge.src"),
                     get_string(field(e, "dst", "edge"), "edge.dst")});
  }
  return CausalGraph(std::move(nodes), std::move(edges));
}

Json to_json(const CausalGraph& g) {
  Json nodes = Json::array(), edges = Json::array();
  for (const auto& n : g.nodes()) nodes.push_back({{"id", n.id}, {"outcomes", n.outcomes}});
  for (const auto& e : g.edges()) edges.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
  return {{"nodes", nodes}, {"edges", edges}};
}

JointDistribution dist_from_json(const Json& j) {
  check_object(j, {"vars", "probs"}, "distribution");
  std::vector<Variable> vars;
  for (const auto& v : array_of(field(j, "vars", "distribution"), "distribution.vars")) {
    check_object(v, {"id", "size"}, "distribution.vars[]");
    vars.push_back({get_string(field(v, "id", "variable"), "variable.id"),
                    get_size(field(v, "size", "variable"), "variable.size")});
  }
  auto probs = get_doubles(field(j, "probs", "distribution"), "distribution.probs");
  return wrap("distribution", [&] { return JointDistribution(std::move(vars), std::move(probs)); });
}

Json to_json(const JointDistribution& p) {
  Json vars = Json::array();
  for (const auto& v : p.vars()) vars.push_back({{"id", v.id}, {"size", v.size}});
  return {{"vars", vars}, {"probs", p.probs()}};
}

classical::Model classical_from_json(const Json& j) {
  check_object(j, {"graph", "edge_sizes", "gates"}, "classical model");
  classical::Model m;
  m.graph = graph_from_json(field(j, "graph", "classical model"));
  const auto& sizes = field(j, "edge_sizes", "classical model");
  if (!sizes.is_object()) throw SchemaError("edge_sizes: expected an object");
  for (const auto& [e, v] : sizes.items()) m.edge_alphabet[e] = get_size(v, "edge_sizes." + e);
  const auto& gates = field(j, "gates", "classical model");
  if (!gates.is_object()) throw SchemaError("gates: expected an object");
  for (const auto& [v, g] : gates.items()) {
    const std::string where = "gates." + v;
    check_object(g, {"in", "out", "tensor"}, where);
    classical::Gate gate;
    gate.in_edges = get_strings(field(g, "in", where), where + ".in");
    gate.out_edges = get_strings(field(g, "out", where), where + ".out");
    gate.tensor = get_doubles(field(g, "tensor", where), where + ".tensor");
    m.gates[v] = std::move(gate);
  }
  return m;
}

Json to_json(const classical::Model& m) {
  Json sizes = Json::object(), gates = Json::object();
  for (const auto& [e, x] : m.edge_alphabet) sizes[e] = x;
  for (const auto& [v, g] : m.gates)
    gates[v] = {{"in", g.in_edges}, {"out", g.out_edges}, {"tensor", g.tensor}};
  return {{"graph", to_json(m.graph)}, {"edge_sizes", sizes}, {"gates", gates}};
}

quantum::Model quantum_from_json(const Json& j) {
  check_object(j, {"graph", "edge_dims", "instruments"}, "quantum model");
  quantum::Model m;
  m.graph = graph_from_json(field(j, "graph", "quantum model"));
  const auto& dims = field(j, "edge_dims", "quantum model");
  if (!dims.is_object()) throw SchemaError("edge_dims: expected an object");
  for (const auto& [e, v] : dims.items()) m.edge_dim[e] = get_size(v, "edge_dims." + e);
  const auto& insts = field(j, "instruments", "quantum model");
  if (!insts.is_object()) throw SchemaError("instruments: expected an object");
  for (const auto& [v, inst_json] : insts.items()) {
    const std::string where = "instruments." + v;
    check_object(inst_json, {"in", "out", "kraus"}, where);
    quantum::Instrument inst;
    inst.in_edges = get_strings(field(inst_json, "in", where), where + ".in");
    inst.out_edges = get_strings(field(inst_json, "out", where), where + ".out");
    const std::size_t din = wrap(where, [&] { return quantum::space_dim(m, inst.in_edges); });
    const std::size_t dout = wrap(where, [&] { return quantum::space_dim(m, inst.out_edges); });
    const auto& kraus = field(inst_json, "kraus", where);
    if (!kraus.is_object()) throw SchemaError(where + ".kraus: expected an object");
    const std::size_t outcomes = m.graph.has_node(v) ? m.graph.outcomes(v) : 0;
    inst.kraus.resize(outcomes);
    for (const auto& [key, ops] : kraus.items()) {
      std::size_t o = 0;
      std::istringstream is(key);
      if (!(is >> o) || !is.eof() || std::to_string(o) != key || o >= outcomes)
        throw SchemaError(where + ".kraus: invalid outcome key '" + key + "'");
      for (const auto& op : array_of(ops, where + ".kraus." + key))
        inst.kraus[o].push_back(get_matrix(op, dout, din, where + ".kraus." + key));
    }
    m.instruments[v] = std::move(inst);
  }
  return m;
}

Json to_json(const quantum::Model& m) {
  Json dims = Json::object(), insts = Json::object();
  for (const auto& [e, d] : m.edge_dim) dims[e] = d;
  for (const auto& [v, inst] : m.instruments) {
    Json kraus = Json::object();
    for (std::size_t o = 0; o < inst.kraus.size(); ++o) {
      Json ops = Json::array();
      for (const auto& k : inst.kraus[o]) ops.push_back(matrix_json(k));
      kraus[std::to_string(o)] = ops;
    }
    insts[v] = {{"in", inst.in_edges}, {"out", inst.out_edges}, {"kraus", kraus}};
  }
  return {{"graph", to_json(m.graph)}, {"edge_dims", dims}, {"instruments", insts}};
}

hbn::Net hbn_from_json(const Json& j) {
  check_object(j, {"graph", "node_sizes", "transitions", "readouts"}, "hbn");
  hbn::Net h;
  h.graph = graph_from_json(field(j, "graph", "hbn"));
  const auto& sizes = field(j, "node_sizes", "hbn");
  if (!sizes.is_object()) throw SchemaError("node_sizes: expected an object");
  for (const auto& [v, x] : sizes.items()) h.node_alphabet[v] = get_size(x, "node_sizes." + v);
  const auto& trs = field(j, "transitions", "hbn");
  if (!trs.is_object()) throw SchemaError("transitions: expected an object");
  for (const auto& [v, t] : trs.items()) {
    const std::string where = "transitions." + v;
    check_object(t, {"parents", "table"}, where);
    hbn::Transition tr;
    tr.parents = get_strings(field(t, "parents", where), where + ".parents");
    tr.table = get_doubles(field(t, "table", where), where + ".table");
    h.transitions[v] = std::move(tr);
  }
  const auto& rds = field(j, "readouts", "hbn");
  if (!rds.is_object()) throw SchemaError("readouts: expected an object");
  for (const auto& [v, r] : rds.items()) h.readouts[v] = get_doubles(r, "readouts." + v);
  return h;
}

Json to_json(const hbn::Net& h) {
  Json sizes = Json::object(), trs = Json::object(), rds = Json::object();
  for (const auto& [v, y] : h.node_alphabet) sizes[v] = y;
  for (const auto& [v, t] : h.transitions) trs[v] = {{"parents", t.parents}, {"table", t.table}};
  for (const auto& [v, r] : h.readouts) rds[v] = r;
  return {{"graph", to_json(h.graph)}, {"node_sizes", sizes}, {"transitions", trs}, {"readouts", rds}};
}

CoarseGraining coarse_graining_from_json(const Json& j) {
  check_object(j, {"domain", "codomain", "map"}, "coarse graining");
  CoarseGraining f;
  f.domain = get_sizes(field(j, "domain", "coarse graining"), "domain");
  f.codomain = get_size(field(j, "codomain", "coarse graining"), "codomain");
  f.map = get_sizes(field(j, "map", "coarse graining"), "map");
  wrap("coarse graining", [&] {
    validate_coarse_graining(f);
    return 0;
  });
  return f;
}

Json to_json(const CoarseGraining& f) {
  return {{"domain", f.domain}, {"codomain", f.codomain}, {"map", f.map}};
}

bell::Scenario scenario_from_json(const Json& j) {
  check_object(j, {"parties", "settings", "outcomes", "source"}, "scenario");
  bell::Scenario sc;
  sc.parties = get_size(field(j, "parties", "scenario"), "parties");
  sc.settings = get_sizes(field(j, "settings", "scenario"), "settings");
  sc.outcomes = get_sizes(field(j, "outcomes", "scenario"), "outcomes");
  sc.source = get_size(field(j, "source", "scenario"), "source");
  wrap("scenario", [&] {
    bell::validate_scenario(sc);
    return 0;
  });
  return sc;
}

Json to_json(const bell::Scenario& sc) {
  return {{"parties", sc.parties}, {"settings", sc.settings}, {"outcomes", sc.outcomes}, {"source", sc.source}};
}

bell::QuantumBellSetup bell_setup_from_json(const Json& j) {
  check_object(j, {"local_dims", "states", "povms", "setting_dists", "source_dist"}, "bell setup");
  bell::QuantumBellSetup s;
  s.local_dims = get_sizes(field(j, "local_dims", "bell setup"), "local_dims");
  std::size_t total = 1;
  for (auto d : s.local_dims) total = saturating_mul(total, d);
  for (const auto& v : array_of(field(j, "states", "bell setup"), "states")) {
    const auto m = get_matrix(v, total, 1, "states[]");
    s.states.push_back(m.col(0));
  }
  const auto& povms = array_of(field(j, "povms", "bell setup"), "povms");
  if (povms.size() != s.local_dims.size()) throw SchemaError("povms: need one entry per party");
  for (std::size_t i = 0; i < povms.size(); ++i) {
    std::vector<std::vector<quantum::Matrix>> party;
    for (const auto& setting : array_of(povms[i], "povms[]")) {
      std::vector<quantum::Matrix> effects;
      for (const auto& e : array_of(setting, "povms[][]"))
        effects.push_back(get_matrix(e, s.local_dims[i], s.local_dims[i], "povms[][][]"));
      party.push_back(std::move(effects));
    }
    s.povms.push_back(std::move(party));
  }
  for (const auto& d : array_of(field(j, "setting_dists", "bell setup"), "setting_dists"))
    s.setting_dists.push_back(get_doubles(d, "setting_dists[]"));
  s.source_dist = get_doubles(field(j, "source_dist", "bell setup"), "source_dist");
  return s;
}

Json to_json(const bell::QuantumBellSetup& s) {
  Json states = Json::array(), povms = Json::array();
  for (const auto& v : s.states) states.push_back(matrix_json(v));
  for (const auto& party : s.povms) {
    Json pj = Json::array();
    for (const auto& setting : party) {
      Json sj = Json::array();
      for (const auto& e : setting) sj.push_back(matrix_json(e));
      pj.push_back(sj);
    }
    povms.push_back(pj);
  }
  return {{"local_dims", s.local_dims},
          {"states", states},
          {"povms", povms},
          {"setting_dists", s.setting_dists},
          {"source_dist", s.source_dist}};
}

Json to_json(const std::vector<ModelViolation>& v) {
  Json list = Json::array();
  for (const auto& x : v) list.push_back({{"where", x.where}, {"what", x.what}, {"deviation", x.deviation}});
  return {{"ok", v.empty()}, {"violations", list}};
}

Json to_json(const NodeSet& s) { return Json(std::vector<std::string>(s.begin(), s.end())); }

Json to_json(const CorrelationVerdict& v) {
  Json list = Json::array();
  for (const auto& d : v.violations)
    list.push_back({{"U", to_json(d.first)}, {"W", to_json(d.second)}, {"dev", d.deviation}});
  return {{"is_correlation", v.is_correlation}, {"tol", v.tol}, {"violations", list}};
}

Json to_json(const bell::NsVerdict& v) {
  return {{"holds", v.holds}, {"tol", v.tol}, {"free_will", v.free_will}, {"no_signalling", v.no_signalling}};
}

Json to_json(const bell::LocalityVerdict& v) {
  Json blocks = Json::array();
  for (const auto& f : v.per_source) {
    Json w = Json::object();
    for (const auto& [label, q] : f.weights) w[label] = q;
    blocks.push_back({{"source_outcome", f.source_outcome},
                      {"constrained", f.constrained},
                      {"feasible", f.feasible},
                      {"infeasibility", f.infeasibility},
                      {"residual", f.residual},
                      {"weights", w}});
  }
  return {{"is_local", v.is_local}, {"tol", v.tol},         {"exact", v.exact},
          {"residual", v.residual}, {"infeasibility", v.infeasibility}, {"per_source", blocks}};
}

Json to_json(const CoarseGrainingFactorization& f) {
  return {{"factor_maps", f.factor_maps},
          {"factor_sizes", f.factor_sizes},
          {"composed", f.composed},
          {"error", f.error}};
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace cc::io
