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

#include "cc/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cc/errors.hpp"
#include "cc/radix.hpp"

namespace cc::classical {

namespace {

std::string outcome_label(const NodeId& v) { return "o:" + v; }
std::string edge_label(const EdgeId& e) { return "e:" + e; }

std::size_t alphabet(const Model& m, const EdgeId& e) {
  auto it = m.edge_alphabet.find(e);
  if (it == m.edge_alphabet.end()) throw InvalidModel("edge '" + e + "' has no alphabet");
  return it->second;
}

const Gate& gate_of(const Model& m, const NodeId& v) {
  auto it = m.gates.find(v);
  if (it == m.gates.end()) throw InvalidModel("node '" + v + "' has no gate");
  return it->second;
}

std::vector<std::size_t> sizes_of(const Model& m, const std::vector<EdgeId>& edges) {
  std::vector<std::size_t> s;
  for (const auto& e : edges) s.push_back(alphabet(m, e));
  return s;
}

std::size_t position(const std::vector<EdgeId>& list, const EdgeId& e) {
  auto it = std::find(list.begin(), list.end(), e);
  if (it == list.end()) throw InvalidModel("edge '" + e + "' missing from gate edge list");
  return static_cast<std::size_t>(it - list.begin());
}

bool same_elements(std::vector<EdgeId> a, std::vector<EdgeId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Tensor gate_tensor(const Model& m, const NodeId& v) {
  const Gate& g = gate_of(m, v);
  std::vector<Axis> axes;
  for (const auto& e : g.in_edges) axes.push_back({edge_label(e), alphabet(m, e)});
  axes.push_back({outcome_label(v), m.graph.outcomes(v)});
  for (const auto& e : g.out_edges) axes.push_back({edge_label(e), alphabet(m, e)});
  return Tensor(std::move(axes), g.tensor);
}

// Absorbs the gates of `nodes` (a topological order of an ancestral set) one
// at a time. Edges leaving the set are summed at their source.
Tensor eliminate(const Model& m, const std::vector<NodeId>& nodes, Execution exec) {
  const std::set<NodeId> inside(nodes.begin(), nodes.end());
  std::vector<std::string> outcomes;
  std::set<EdgeId> open;
  Tensor state;
  for (const auto& v : nodes) {
    const Gate& g = gate_of(m, v);
    for (const auto& e : g.in_edges) open.erase(e);
    for (const auto& e : g.out_edges)
      if (inside.count(m.graph.edge(e).dst)) open.insert(e);
    outcomes.push_back(outcome_label(v));
    std::vector<std::string> keep = outcomes;
    for (const auto& e : open) keep.push_back(edge_label(e));
    state = contract(state, gate_tensor(m, v), keep, exec);
  }
  return state;
}

JointDistribution to_distribution(const Tensor& t, const std::vector<NodeId>& node_order,
                                  const CausalGraph& graph) {
  std::vector<std::string> keep;
  std::vector<Variable> vars;
  for (const auto& v : node_order) {
    keep.push_back(outcome_label(v));
    vars.push_back({v, graph.outcomes(v)});
  }
  Tensor r = contract(t, Tensor::scalar(1.0), keep, Execution::serial);
  return JointDistribution(std::move(vars), std::move(r.data()));
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

bool Gate::deterministic() const {
  return std::all_of(tensor.begin(), tensor.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

GateShape gate_shape(const Model& model, const NodeId& node) {
  const Gate& g = gate_of(model, node);
  GateShape s;
  s.in = Radix(sizes_of(model, g.in_edges)).volume();
  s.outcomes = model.graph.outcomes(node);
  s.out = Radix(sizes_of(model, g.out_edges)).volume();
  return s;
}

std::vector<ModelViolation> validate_model(const Model& model, double tol) {
  std::vector<ModelViolation> out;
  auto graph_violations = validate(model.graph);
  for (auto& v : graph_violations) out.push_back({"graph", v, 0.0});
  if (!graph_violations.empty()) return out;

  for (const auto& e : model.graph.edges()) {
    auto it = model.edge_alphabet.find(e.id);
    if (it == model.edge_alphabet.end())
      out.push_back({e.id, "edge has no hidden-variable alphabet", 0.0});
    else if (it->second < 1)
      out.push_back({e.id, "edge alphabet is empty", 0.0});
  }
  for (const auto& [e, _] : model.edge_alphabet)
    if (!model.graph.has_edge(e)) out.push_back({e, "alphabet given for unknown edge", 0.0});
  for (const auto& [v, _] : model.gates)
    if (!model.graph.has_node(v)) out.push_back({v, "gate given for unknown node", 0.0});
  if (!out.empty()) return out;

  for (const auto& n : model.graph.nodes()) {
    auto it = model.gates.find(n.id);
    if (it == model.gates.end()) {
      out.push_back({n.id, "node has no gate", 0.0});
      continue;
    }
    const Gate& g = it->second;
    if (!same_elements(g.in_edges, model.graph.in_edges(n.id))) {
      out.push_back({n.id, "gate input edges do not match the graph", 0.0});
      continue;
    }
    if (!same_elements(g.out_edges, model.graph.out_edges(n.id))) {
      out.push_back({n.id, "gate output edges do not match the graph", 0.0});
      continue;
    }
    GateShape s = gate_shape(model, n.id);
    if (g.tensor.size() != s.volume()) {
      out.push_back({n.id,
                     "gate tensor has " + std::to_string(g.tensor.size()) + " entries, expected " +
                         std::to_string(s.volume()),
                     0.0});
      continue;
    }
    if (std::any_of(g.tensor.begin(), g.tensor.end(),
                    [](double x) { return !(x >= 0.0) || !std::isfinite(x); })) {
      out.push_back({n.id, "gate has a negative or non-finite entry", 0.0});
      continue;
    }
    double worst = 0.0;
    const std::size_t row = s.outcomes * s.out;
    for (std::size_t lin = 0; lin < s.in; ++lin) {
      double sum = 0.0;
      for (std::size_t k = 0; k < row; ++k) sum += g.tensor[lin * row + k];
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    if (worst > tol)
      out.push_back({n.id, "gate rows are not normalized (max deviation " + format_double(worst) + ")",
                     worst});
  }
  return out;
}

void require_valid(const Model& model) {
  auto v = validate_model(model);
  if (v.empty()) return;
  std::string msg = "invalid classical model:";
  for (const auto& x : v) msg += " [" + x.where + ": " + x.what + "]";
  throw InvalidModel(msg);
}

JointDistribution evaluate(const Model& model, const std::optional<std::vector<NodeId>>& order,
                           Execution exec) {
  require_valid(model);
  std::vector<NodeId> seq = order ? *order : topological_order(model.graph);
  if (!is_topological_order(model.graph, seq))
    throw Error("evaluation order is not a topological order of the graph");
  std::vector<NodeId> node_order;
  for (const auto& n : model.graph.nodes()) node_order.push_back(n.id);
  return to_distribution(eliminate(model, seq, exec), node_order, model.graph);
}

JointDistribution evaluate_naive(const Model& model) {
  require_valid(model);
  const auto& g = model.graph;
  std::vector<std::size_t> osizes, esizes;
  for (const auto& n : g.nodes()) osizes.push_back(n.outcomes);
  for (const auto& e : g.edges()) esizes.push_back(alphabet(model, e.id));
  Radix orad(osizes), erad(esizes);
  check_limit(saturating_mul(orad.volume(), erad.volume()), kDefaultStateSpaceLimit,
              "naive enumeration size");

  std::map<EdgeId, std::size_t> epos;
  for (std::size_t i = 0; i < g.edges().size(); ++i) epos[g.edges()[i].id] = i;

  struct Prepared {
    const Gate* gate;
    GateShape shape;
    std::vector<std::size_t> in_pos, out_pos, in_sizes, out_sizes;
  };
  std::vector<Prepared> prep;
  for (const auto& n : g.nodes()) {
    Prepared p{&gate_of(model, n.id), gate_shape(model, n.id), {}, {}, {}, {}};
    for (const auto& e : p.gate->in_edges) {
      p.in_pos.push_back(epos.at(e));
      p.in_sizes.push_back(alphabet(model, e));
    }
    for (const auto& e : p.gate->out_edges) {
      p.out_pos.push_back(epos.at(e));
      p.out_sizes.push_back(alphabet(model, e));
    }
    prep.push_back(std::move(p));
  }

  std::vector<double> probs(orad.volume(), 0.0);
  std::vector<std::size_t> od, ed;
  for (std::size_t oi = 0; oi < orad.volume(); ++oi) {
    orad.decode(oi, od);
    double acc = 0.0;
    for (std::size_t ei = 0; ei < erad.volume(); ++ei) {
      erad.decode(ei, ed);
      double term = 1.0;
      for (std::size_t v = 0; v < prep.size() && term != 0.0; ++v) {
        const auto& p = prep[v];
        std::size_t lin = 0, lout = 0;
        for (std::size_t k = 0; k < p.in_pos.size(); ++k) lin = lin * p.in_sizes[k] + ed[p.in_pos[k]];
        for (std::size_t k = 0; k < p.out_pos.size(); ++k)
          lout = lout * p.out_sizes[k] + ed[p.out_pos[k]];
        term *= p.gate->tensor[p.shape.index(lin, od[v], lout)];
      }
      acc += term;
    }
    probs[oi] = acc;
  }
  std::vector<Variable> vars;
  for (const auto& n : g.nodes()) vars.push_back({n.id, n.outcomes});
  return JointDistribution(std::move(vars), std::move(probs));
}

JointDistribution evaluate_marginal_ancestral(const Model& model, const NodeSet& u) {
  require_valid(model);
  if (!is_ancestral(model.graph, u)) throw NotAncestral("node set is not closed under causal past");
  std::vector<NodeId> seq;
  for (const auto& v : topological_order(model.graph))
    if (u.count(v)) seq.push_back(v);
  std::vector<NodeId> node_order;
  for (const auto& n : model.graph.nodes())
    if (u.count(n.id)) node_order.push_back(n.id);
  return to_distribution(eliminate(model, seq, Execution::parallel), node_order, model.graph);
}

Model push_back_determinism(const Model& model) {
  require_valid(model);
  Model m = model;
  auto order = topological_order(m.graph);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId& w = *it;
    auto parents = m.graph.parents(w);
    if (parents.empty()) continue;
    const NodeId& u = parents.front();
    EdgeId d;
    for (const auto& e : m.graph.in_edges(w)) {
      if (m.graph.edge(e).src == u) {
        d = e;
        break;
      }
    }

    Gate& gw = m.gates.at(w);
    const GateShape sw = gate_shape(m, w);
    const std::size_t n_in = sw.in;
    const std::size_t radix = sw.outcomes * sw.out;
    std::size_t n_f = 1;
    for (std::size_t j = 0; j < n_in; ++j) {
      n_f = saturating_mul(n_f, radix);
      check_limit(n_f, kDefaultFunctionSpaceLimit, "push-back function space at '" + w + "'");
    }
    const std::size_t xd = alphabet(m, d);
    const std::size_t xd_new = saturating_mul(n_f, xd);
    check_limit(xd_new, kDefaultFunctionSpaceLimit, "push-back edge alphabet of '" + d + "'");

    // Weight of each function: product over input tuples of w's gate row entry.
    std::vector<double> weight(n_f, 1.0);
    {
      std::vector<std::size_t> digit(n_in, 0);
      for (std::size_t f = 0; f < n_f; ++f) {
        double p = 1.0;
        for (std::size_t j = 0; j < n_in && p != 0.0; ++j) p *= gw.tensor[j * radix + digit[j]];
        weight[f] = p;
        for (std::size_t j = n_in; j-- > 0;) {
          if (++digit[j] < radix) break;
          digit[j] = 0;
        }
      }
    }

    // w applies the function it receives.
    const std::size_t pos_w = position(gw.in_edges, d);
    Radix old_in(sizes_of(m, gw.in_edges));
    auto new_in_sizes = old_in.sizes();
    new_in_sizes[pos_w] = xd_new;
    Radix new_in(new_in_sizes);
    check_limit(saturating_mul(new_in.volume(), radix), kDefaultStateSpaceLimit,
                "push-back gate size at '" + w + "'");
    std::vector<double> w_tensor(new_in.volume() * radix, 0.0);
    std::vector<std::size_t> digits;
    for (std::size_t lin = 0; lin < new_in.volume(); ++lin) {
      new_in.decode(lin, digits);
      const std::size_t f = digits[pos_w] / xd;
      digits[pos_w] %= xd;
      const std::size_t j = old_in.encode(digits);
      std::size_t r = f;
      for (std::size_t k = j + 1; k < n_in; ++k) r /= radix;
      r %= radix;
      w_tensor[lin * radix + r] = 1.0;
    }

    // u draws the function independently of everything else.
    Gate& gu = m.gates.at(u);
    const GateShape su = gate_shape(m, u);
    const std::size_t pos_u = position(gu.out_edges, d);
    Radix old_out(sizes_of(m, gu.out_edges));
    auto new_out_sizes = old_out.sizes();
    new_out_sizes[pos_u] = xd_new;
    Radix new_out(new_out_sizes);
    const std::size_t u_volume = saturating_mul(su.in * su.outcomes, new_out.volume());
    check_limit(u_volume, kDefaultStateSpaceLimit, "push-back gate size at '" + u + "'");
    std::vector<double> u_tensor(u_volume, 0.0);
    for (std::size_t lin = 0; lin < su.in; ++lin) {
      for (std::size_t o = 0; o < su.outcomes; ++o) {
        for (std::size_t lout = 0; lout < new_out.volume(); ++lout) {
          new_out.decode(lout, digits);
          const std::size_t f = digits[pos_u] / xd;
          digits[pos_u] %= xd;
          const double base = gu.tensor[su.index(lin, o, old_out.encode(digits))];
          u_tensor[(lin * su.outcomes + o) * new_out.volume() + lout] = base * weight[f];
        }
      }
    }

    gw.tensor = std::move(w_tensor);
    gu.tensor = std::move(u_tensor);
    m.edge_alphabet[d] = xd_new;
  }
  return m;
}

Model lift_trivial_edge(const Model& model, const NodeId& u, const NodeId& w,
                        const std::optional<EdgeId>& id) {
  require_valid(model);
  model.graph.node_index(u);
  model.graph.node_index(w);
  if (u == w || reaches(model.graph, w, u))
    throw WouldCreateCycle("adding " + u + "->" + w + " would create a cycle");
  EdgeId eid = id ? *id : u + "->" + w + "#tc";
  if (model.graph.has_edge(eid)) throw Error("edge id '" + eid + "' already exists");
  Model m = model;
  m.graph = m.graph.with_edge({eid, u, w});
  m.edge_alphabet[eid] = 1;
  m.gates.at(u).out_edges.push_back(eid);
  m.gates.at(w).in_edges.push_back(eid);
  return m;
}

Model reroute_transitive_edge(const Model& model, const EdgeId& direct, const NodeId& via) {
  require_valid(model);
  const Edge t = model.graph.edge(direct);
  const NodeId& u = t.src;
  const NodeId& w = t.dst;
  model.graph.node_index(via);
  EdgeId e1, e2;
  for (const auto& e : model.graph.out_edges(u))
    if (e != direct && model.graph.edge(e).dst == via) {
      e1 = e;
      break;
    }
  for (const auto& e : model.graph.out_edges(via))
    if (model.graph.edge(e).dst == w) {
      e2 = e;
      break;
    }
  if (e1.empty() || e2.empty())
    throw MissingRelayPath("no path " + u + "->" + via + "->" + w + " to relay '" + direct + "'");

  const std::size_t xt = alphabet(model, direct);
  const std::size_t x1 = alphabet(model, e1);
  const std::size_t x2 = alphabet(model, e2);
  Model m = model;
  m.graph = m.graph.without_edge(direct);
  m.edge_alphabet.erase(direct);
  m.edge_alphabet[e1] = x1 * xt;
  m.edge_alphabet[e2] = x2 * xt;
  std::vector<std::size_t> d, nd;

  // u: fold the direct edge's value into u->via.
  {
    const Gate& old = model.gates.at(u);
    const GateShape s = gate_shape(model, u);
    Gate g = old;
    const std::size_t pt = position(old.out_edges, direct);
    g.out_edges.erase(g.out_edges.begin() + static_cast<std::ptrdiff_t>(pt));
    const std::size_t p1 = position(g.out_edges, e1);
    Radix old_out(sizes_of(model, old.out_edges));
    Radix new_out(sizes_of(m, g.out_edges));
    g.tensor.assign(s.in * s.outcomes * new_out.volume(), 0.0);
    for (std::size_t lin = 0; lin < s.in; ++lin)
      for (std::size_t o = 0; o < s.outcomes; ++o)
        for (std::size_t lout = 0; lout < old_out.volume(); ++lout) {
          old_out.decode(lout, d);
          const std::size_t tv = d[pt];
          nd = d;
          nd.erase(nd.begin() + static_cast<std::ptrdiff_t>(pt));
          nd[p1] = nd[p1] * xt + tv;
          g.tensor[(lin * s.outcomes + o) * new_out.volume() + new_out.encode(nd)] =
              old.tensor[s.index(lin, o, lout)];
        }
    m.gates[u] = std::move(g);
  }
  // via: pass the relayed component from u->via to via->w unchanged.
  {
    const Gate& old = model.gates.at(via);
    const GateShape s = gate_shape(model, via);
    Gate g = old;
    const std::size_t q1 = position(old.in_edges, e1);
    const std::size_t q2 = position(old.out_edges, e2);
    Radix new_in(sizes_of(m, g.in_edges)), new_out(sizes_of(m, g.out_edges));
    Radix old_in(sizes_of(model, old.in_edges)), old_out(sizes_of(model, old.out_edges));
    g.tensor.assign(new_in.volume() * s.outcomes * new_out.volume(), 0.0);
    std::vector<std::size_t> din, dout;
    for (std::size_t lin = 0; lin < new_in.volume(); ++lin) {
      new_in.decode(lin, din);
      const std::size_t relayed = din[q1] % xt;
      din[q1] /= xt;
      const std::size_t old_lin = old_in.encode(din);
      for (std::size_t o = 0; o < s.outcomes; ++o)
        for (std::size_t lout = 0; lout < new_out.volume(); ++lout) {
          new_out.decode(lout, dout);
          if (dout[q2] % xt != relayed) continue;
          dout[q2] /= xt;
          g.tensor[(lin * s.outcomes + o) * new_out.volume() + lout] =
              old.tensor[s.index(old_lin, o, old_out.encode(dout))];
        }
    }
    m.gates[via] = std::move(g);
  }
  // w: read the relayed value from via->w.
  {
    const Gate& old = model.gates.at(w);
    const GateShape s = gate_shape(model, w);
    Gate g = old;
    const std::size_t pt = position(old.in_edges, direct);
    g.in_edges.erase(g.in_edges.begin() + static_cast<std::ptrdiff_t>(pt));
    const std::size_t p2 = position(g.in_edges, e2);
    Radix old_in(sizes_of(model, old.in_edges)), new_in(sizes_of(m, g.in_edges));
    const std::size_t row = s.outcomes * s.out;
    g.tensor.assign(new_in.volume() * row, 0.0);
    for (std::size_t lin = 0; lin < new_in.volume(); ++lin) {
      new_in.decode(lin, nd);
      const std::size_t relayed = nd[p2] % xt;
      nd[p2] /= xt;
      nd.insert(nd.begin() + static_cast<std::ptrdiff_t>(pt), relayed);
      const std::size_t old_lin = old_in.encode(nd);
      std::copy_n(old.tensor.begin() + static_cast<std::ptrdiff_t>(old_lin * row), row,
                  g.tensor.begin() + static_cast<std::ptrdiff_t>(lin * row));
    }
    m.gates[w] = std::move(g);
  }
  return m;
}

Model random_model(const CausalGraph& graph, const std::map<EdgeId, std::size_t>& edge_sizes,
                   std::uint64_t seed) {
  auto violations = validate(graph);
  if (!violations.empty()) throw InvalidModel("invalid graph: " + violations.front());
  Model m;
  m.graph = graph;
  for (const auto& e : graph.edges()) {
    auto it = edge_sizes.find(e.id);
    if (it == edge_sizes.end() || it->second == 0)
      throw InvalidModel("no positive alphabet size for edge '" + e.id + "'");
    m.edge_alphabet[e.id] = it->second;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& n : graph.nodes()) {
    Gate g;
    g.in_edges = graph.in_edges(n.id);
    g.out_edges = graph.out_edges(n.id);
    m.gates[n.id] = g;
    const GateShape s = gate_shape(m, n.id);
    check_limit(s.volume(), kDefaultStateSpaceLimit, "random gate size");
    auto& tensor = m.gates[n.id].tensor;
    tensor.resize(s.volume());
    const std::size_t row = s.outcomes * s.out;
    for (std::size_t lin = 0; lin < s.in; ++lin) {
      double sum = 0.0;
      for (std::size_t k = 0; k < row; ++k) sum += tensor[lin * row + k] = unif(rng);
      for (std::size_t k = 0; k < row; ++k) tensor[lin * row + k] /= sum;
    }
  }
  return m;
}

Model random_model(const CausalGraph& graph, std::size_t edge_size, std::uint64_t seed) {
  std::map<EdgeId, std::size_t> sizes;
  for (const auto& e : graph.edges()) sizes[e.id] = edge_size;
  return random_model(graph, sizes, seed);
}

}  // namespace cc::classical
