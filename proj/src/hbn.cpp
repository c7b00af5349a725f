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

#include "cc/hbn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cc/errors.hpp"
#include "cc/radix.hpp"

namespace cc::hbn {

namespace {

std::string hidden_label(const NodeId& v) { return "m:" + v; }
std::string outcome_label(const NodeId& v) { return "o:" + v; }

std::size_t alphabet(const Net& net, const NodeId& v) {
  auto it = net.node_alphabet.find(v);
  if (it == net.node_alphabet.end()) throw InvalidModel("node '" + v + "' has no hidden alphabet");
  return it->second;
}

std::size_t parent_rows(const Net& net, const std::vector<NodeId>& parents) {
  std::size_t rows = 1;
  for (const auto& p : parents) rows = saturating_mul(rows, alphabet(net, p));
  return rows;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Appends a violation if some row of `table` (row length `cols`) is invalid.
void check_rows(const std::vector<double>& table, std::size_t cols, double tol, const std::string& where,
                const std::string& what, std::vector<ModelViolation>& out) {
  if (std::any_of(table.begin(), table.end(), [](double x) { return !(x >= 0.0) || !std::isfinite(x); })) {
    out.push_back({where, what + " has a negative or non-finite entry", 0.0});
    return;
  }
  double worst = 0.0;
  for (std::size_t r = 0; r * cols < table.size(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) sum += table[r * cols + c];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  if (worst > tol)
    out.push_back({where, what + " rows are not normalized (max deviation " + format_double(worst) + ")",
                   worst});
}

}  // namespace

std::vector<ModelViolation> validate(const Net& net, double tol) {
  std::vector<ModelViolation> out;
  for (auto& v : cc::validate(net.graph)) out.push_back({"graph", v, 0.0});
  if (!out.empty()) return out;
  for (const auto& n : net.graph.nodes()) {
    auto it = net.node_alphabet.find(n.id);
    if (it == net.node_alphabet.end() || it->second < 1)
      out.push_back({n.id, "node has no positive hidden alphabet", 0.0});
  }
  for (const auto& [v, _] : net.node_alphabet)
    if (!net.graph.has_node(v)) out.push_back({v, "alphabet given for unknown node", 0.0});
  for (const auto& [v, _] : net.transitions)
    if (!net.graph.has_node(v)) out.push_back({v, "transition given for unknown node", 0.0});
  for (const auto& [v, _] : net.readouts)
    if (!net.graph.has_node(v)) out.push_back({v, "readout given for unknown node", 0.0});
  if (!out.empty()) return out;

  for (const auto& n : net.graph.nodes()) {
    const std::size_t y = alphabet(net, n.id);
    auto t = net.transitions.find(n.id);
    if (t == net.transitions.end()) {
      out.push_back({n.id, "node has no transition table", 0.0});
    } else if (t->second.parents != net.graph.parents(n.id)) {
      out.push_back({n.id, "transition parents do not match the graph", 0.0});
    } else {
      const std::size_t expected = saturating_mul(parent_rows(net, t->second.parents), y);
      if (t->second.table.size() != expected)
        out.push_back({n.id,
                       "transition has " + std::to_string(t->second.table.size()) +
                           " entries, expected " + std::to_string(expected),
                       0.0});
      else
        check_rows(t->second.table, y, tol, n.id, "transition", out);
    }
    auto r = net.readouts.find(n.id);
    if (r == net.readouts.end()) {
      out.push_back({n.id, "node has no readout table", 0.0});
    } else if (r->second.size() != y * n.outcomes) {
      out.push_back({n.id,
                     "readout has " + std::to_string(r->second.size()) + " entries, expected " +
                         std::to_string(y * n.outcomes),
                     0.0});
    } else {
      check_rows(r->second, n.outcomes, tol, n.id, "readout", out);
    }
  }
  return out;
}

void require_valid(const Net& net) {
  auto v = validate(net);
  if (v.empty()) return;
  std::string msg = "invalid hidden Bayesian network:";
  for (const auto& x : v) msg += " [" + x.where + ": " + x.what + "]";
  throw InvalidModel(msg);
}

JointDistribution evaluate(const Net& net, Execution exec) {
  require_valid(net);
  const auto& g = net.graph;
  std::set<NodeId> done;
  std::vector<std::string> outcomes;
  auto open_hidden = [&](const std::set<NodeId>& processed) {
    std::vector<std::string> labels;
    for (const auto& u : processed) {
      auto ch = g.children(u);
      if (std::any_of(ch.begin(), ch.end(), [&](const NodeId& c) { return !processed.count(c); }))
        labels.push_back(hidden_label(u));
    }
    return labels;
  };

  Tensor state;
  for (const auto& v : topological_order(g)) {
    const auto& tr = net.transitions.at(v);
    std::vector<Axis> t_axes;
    for (const auto& p : tr.parents) t_axes.push_back({hidden_label(p), alphabet(net, p)});
    t_axes.push_back({hidden_label(v), alphabet(net, v)});
    Tensor t(std::move(t_axes), tr.table);
    Tensor r({{hidden_label(v), alphabet(net, v)}, {outcome_label(v), g.outcomes(v)}},
             net.readouts.at(v));

    done.insert(v);
    auto keep = outcomes;
    for (const auto& l : open_hidden(done))
      if (l != hidden_label(v)) keep.push_back(l);
    keep.push_back(hidden_label(v));
    state = contract(state, t, keep, exec);

    outcomes.push_back(outcome_label(v));
    keep = outcomes;
    for (const auto& l : open_hidden(done)) keep.push_back(l);
    state = contract(state, r, keep, exec);
  }

  std::vector<std::string> labels;
  std::vector<Variable> vars;
  for (const auto& n : g.nodes()) {
    labels.push_back(outcome_label(n.id));
    vars.push_back({n.id, n.outcomes});
  }
  state = contract(state, Tensor::scalar(1.0), labels, Execution::serial);
  return JointDistribution(std::move(vars), std::move(state.data()));
}

Net from_classical(const classical::Model& model) {
  classical::require_valid(model);
  const auto& g = model.graph;
  Net net;
  net.graph = g;

  // Component layout of each Y_v: outcome, then out-edges in EdgeId order.
  std::map<NodeId, Radix> layout;
  for (const auto& n : g.nodes()) {
    std::vector<std::size_t> sizes{n.outcomes};
    for (const auto& e : g.out_edges(n.id)) sizes.push_back(model.edge_alphabet.at(e));
    Radix r(sizes);
    check_limit(r.volume(), kDefaultStateSpaceLimit, "hidden alphabet of '" + n.id + "'");
    net.node_alphabet[n.id] = r.volume();
    layout.emplace(n.id, std::move(r));
  }

  for (const auto& n : g.nodes()) {
    const auto& gate = model.gates.at(n.id);
    const auto shape = classical::gate_shape(model, n.id);
    const auto parents = g.parents(n.id);
    const auto sorted_out = g.out_edges(n.id);
    const std::size_t y = net.node_alphabet[n.id];

    std::vector<std::size_t> psizes;
    for (const auto& p : parents) psizes.push_back(net.node_alphabet[p]);
    Radix prad(psizes);
    check_limit(saturating_mul(prad.volume(), y), kDefaultStateSpaceLimit,
                "transition table of '" + n.id + "'");

    // Where each declared in-edge value sits: (parent slot, component).
    std::vector<std::pair<std::size_t, std::size_t>> in_src;
    std::vector<std::size_t> in_sizes;
    for (const auto& e : gate.in_edges) {
      const auto& src = g.edge(e).src;
      const auto slot = static_cast<std::size_t>(std::find(parents.begin(), parents.end(), src) - parents.begin());
      const auto outs = g.out_edges(src);
      const auto comp = static_cast<std::size_t>(std::find(outs.begin(), outs.end(), e) - outs.begin()) + 1;
      in_src.emplace_back(slot, comp);
      in_sizes.push_back(model.edge_alphabet.at(e));
    }
    Radix in_rad(in_sizes);
    std::vector<std::size_t> out_sizes, out_pos;
    for (const auto& e : gate.out_edges) {
      out_sizes.push_back(model.edge_alphabet.at(e));
      out_pos.push_back(static_cast<std::size_t>(std::find(sorted_out.begin(), sorted_out.end(), e) -
                                                 sorted_out.begin()));
    }
    Radix out_rad(out_sizes);

    Transition tr;
    tr.parents = parents;
    tr.table.assign(prad.volume() * y, 0.0);
    std::vector<std::size_t> pd, comp, in_digits(gate.in_edges.size()), od, yd(sorted_out.size() + 1);
    for (std::size_t row = 0; row < prad.volume(); ++row) {
      prad.decode(row, pd);
      for (std::size_t k = 0; k < in_src.size(); ++k) {
        layout.at(parents[in_src[k].first]).decode(pd[in_src[k].first], comp);
        in_digits[k] = comp[in_src[k].second];
      }
      const std::size_t lin = in_rad.encode(in_digits);
      for (std::size_t o = 0; o < shape.outcomes; ++o)
        for (std::size_t lout = 0; lout < shape.out; ++lout) {
          out_rad.decode(lout, od);
          yd[0] = o;
          for (std::size_t k = 0; k < od.size(); ++k) yd[out_pos[k] + 1] = od[k];
          tr.table[row * y + layout.at(n.id).encode(yd)] = gate.tensor[shape.index(lin, o, lout)];
        }
    }
    net.transitions[n.id] = std::move(tr);

    std::vector<double> readout(y * n.outcomes, 0.0);
    const std::size_t per_outcome = y / n.outcomes;
    for (std::size_t mu = 0; mu < y; ++mu) readout[mu * n.outcomes + mu / per_outcome] = 1.0;
    net.readouts[n.id] = std::move(readout);
  }
  return net;
}

classical::Model to_classical(const Net& net) {
  require_valid(net);
  const auto& g = net.graph;
  classical::Model m;
  m.graph = g;
  for (const auto& e : g.edges()) m.edge_alphabet[e.id] = alphabet(net, e.src);

  for (const auto& n : g.nodes()) {
    const auto& tr = net.transitions.at(n.id);
    const auto& readout = net.readouts.at(n.id);
    const std::size_t y = alphabet(net, n.id);
    classical::Gate gate;
    gate.in_edges = g.in_edges(n.id);
    gate.out_edges = g.out_edges(n.id);

    std::vector<std::size_t> in_sizes;
    for (const auto& e : gate.in_edges) in_sizes.push_back(m.edge_alphabet.at(e));
    Radix in_rad(in_sizes);
    // Slot k of the parent tuple is read from in-edge reader[k].
    std::vector<std::size_t> reader;
    for (const auto& p : tr.parents)
      for (std::size_t k = 0; k < gate.in_edges.size(); ++k)
        if (g.edge(gate.in_edges[k]).src == p) {
          reader.push_back(k);
          break;
        }
    std::vector<std::size_t> psizes;
    for (const auto& p : tr.parents) psizes.push_back(alphabet(net, p));
    Radix prad(psizes);

    const std::size_t n_out = gate.out_edges.size();
    std::size_t out_vol = 1;
    for (std::size_t k = 0; k < n_out; ++k) out_vol = saturating_mul(out_vol, y);
    const std::size_t volume = saturating_mul(saturating_mul(in_rad.volume(), n.outcomes), out_vol);
    check_limit(volume, kDefaultStateSpaceLimit, "gate size at '" + n.id + "'");
    gate.tensor.assign(volume, 0.0);

    // Index of the all-equal tuple (mu, ..., mu) among out-edge values.
    std::size_t diag_step = 0;
    for (std::size_t k = 0; k < n_out; ++k) diag_step = diag_step * y + 1;

    std::vector<std::size_t> digits, pd(tr.parents.size());
    for (std::size_t lin = 0; lin < in_rad.volume(); ++lin) {
      in_rad.decode(lin, digits);
      for (std::size_t k = 0; k < reader.size(); ++k) pd[k] = digits[reader[k]];
      const std::size_t row = prad.encode(pd);
      for (std::size_t mu = 0; mu < y; ++mu) {
        const double pt = tr.table[row * y + mu];
        const std::size_t lout = mu * diag_step;
        for (std::size_t o = 0; o < n.outcomes; ++o)
          gate.tensor[(lin * n.outcomes + o) * out_vol + lout] += pt * readout[mu * n.outcomes + o];
      }
    }
    m.gates[n.id] = std::move(gate);
  }
  return m;
}

Net random_net(const CausalGraph& graph, const std::map<NodeId, std::size_t>& node_sizes,
               std::uint64_t seed) {
  auto violations = cc::validate(graph);
  if (!violations.empty()) throw InvalidModel("invalid graph: " + violations.front());
  Net net;
  net.graph = graph;
  for (const auto& n : graph.nodes()) {
    auto it = node_sizes.find(n.id);
    if (it == node_sizes.end() || it->second == 0)
      throw InvalidModel("no positive hidden alphabet size for node '" + n.id + "'");
    net.node_alphabet[n.id] = it->second;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto fill = [&](std::vector<double>& table, std::size_t rows, std::size_t cols) {
    table.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < cols; ++c) sum += table[r * cols + c] = unif(rng);
      for (std::size_t c = 0; c < cols; ++c) table[r * cols + c] /= sum;
    }
  };
  for (const auto& n : graph.nodes()) {
    Transition tr;
    tr.parents = graph.parents(n.id);
    const std::size_t rows = parent_rows(net, tr.parents);
    const std::size_t y = net.node_alphabet[n.id];
    check_limit(saturating_mul(rows, y), kDefaultStateSpaceLimit, "random transition size");
    fill(tr.table, rows, y);
    net.transitions[n.id] = std::move(tr);
    fill(net.readouts[n.id], y, n.outcomes);
  }
  return net;
}

Net random_net(const CausalGraph& graph, std::size_t node_size, std::uint64_t seed) {
  std::map<NodeId, std::size_t> sizes;
  for (const auto& n : graph.nodes()) sizes[n.id] = node_size;
  return random_net(graph, sizes, seed);
}

}  // namespace cc::hbn
