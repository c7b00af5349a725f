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

#include "cc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "cc/errors.hpp"
#include "cc/radix.hpp"

namespace cc::quantum {

namespace {

std::size_t dim_of(const Model& m, const EdgeId& e) {
  auto it = m.edge_dim.find(e);
  if (it == m.edge_dim.end()) throw InvalidModel("edge '" + e + "' has no dimension");
  return it->second;
}

bool same_elements(std::vector<EdgeId> a, std::vector<EdgeId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::vector<std::size_t> permutation_of(const std::vector<EdgeId>& from, const std::vector<EdgeId>& to) {
  std::vector<std::size_t> perm;
  for (const auto& e : to) {
    auto it = std::find(from.begin(), from.end(), e);
    if (it == from.end()) throw InvalidModel("edge '" + e + "' is not part of the reordered list");
    perm.push_back(static_cast<std::size_t>(it - from.begin()));
  }
  if (perm.size() != from.size() || !same_elements(from, to))
    throw InvalidModel("edge order is not a permutation of the declared edges");
  return perm;
}

// new_index[old] for moving subsystem perm[k] to position k.
std::vector<std::size_t> index_map(const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& perm) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> new_stride(n, 1);
  for (std::size_t k = n; k-- > 1;) new_stride[k - 1] = new_stride[k] * dims[perm[k]];
  std::vector<std::size_t> stride_of_old(n);
  for (std::size_t k = 0; k < n; ++k) stride_of_old[perm[k]] = new_stride[k];
  Radix old(dims);
  std::vector<std::size_t> map(old.volume()), digits;
  for (std::size_t i = 0; i < old.volume(); ++i) {
    old.decode(i, digits);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) j += digits[k] * stride_of_old[k];
    map[i] = j;
  }
  return map;
}

bool is_identity(const std::vector<std::size_t>& perm) {
  for (std::size_t k = 0; k < perm.size(); ++k)
    if (perm[k] != k) return false;
  return true;
}

Matrix permute_density(const Matrix& rho, const std::vector<std::size_t>& dims,
                       const std::vector<std::size_t>& perm) {
  if (is_identity(perm)) return rho;
  const auto map = index_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix out(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a)
      out(static_cast<Eigen::Index>(map[a]), static_cast<Eigen::Index>(map[b])) = rho(a, b);
  return out;
}

struct State {
  Matrix rho = Matrix::Ones(1, 1);
  std::vector<EdgeId> wires;  // sorted
  std::vector<std::size_t> dims;
  bool zero = false;
};

struct Step {
  const Instrument* inst;
  std::size_t outcomes;
};

State apply(const Model& m, const State& s, const Instrument& inst, std::size_t outcome) {
  State next;
  const auto& ops = inst.kraus[outcome];
  if (s.zero || ops.empty()) {
    next.zero = true;
    return next;
  }
  std::vector<EdgeId> order;
  std::vector<std::size_t> order_dims, perm;
  for (std::size_t k = 0; k < s.wires.size(); ++k) {
    if (std::find(inst.in_edges.begin(), inst.in_edges.end(), s.wires[k]) == inst.in_edges.end()) {
      order.push_back(s.wires[k]);
      perm.push_back(k);
    }
  }
  std::size_t rest = 1;
  for (auto k : perm) rest *= s.dims[k];
  for (const auto& e : inst.in_edges) {
    auto it = std::find(s.wires.begin(), s.wires.end(), e);
    perm.push_back(static_cast<std::size_t>(it - s.wires.begin()));
  }
  const Matrix rho = permute_density(s.rho, s.dims, perm);

  const auto din = ops.front().cols();
  const auto dout = ops.front().rows();
  const auto r = static_cast<Eigen::Index>(rest);
  check_limit(static_cast<std::size_t>(r * dout), kDefaultDensityDimLimit, "density matrix dimension");
  Matrix sigma = Matrix::Zero(r * dout, r * dout);
  for (const auto& k : ops) {
    const Matrix kd = k.adjoint();
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index i = 0; i < r; ++i)
        sigma.block(i * dout, j * dout, dout, dout).noalias() +=
            k * rho.block(i * din, j * din, din, din) * kd;
  }

  next.wires = order;
  for (const auto& e : inst.out_edges) next.wires.push_back(e);
  std::vector<std::size_t> cur_dims;
  for (const auto& e : next.wires) {
    auto it = std::find(s.wires.begin(), s.wires.end(), e);
    cur_dims.push_back(it != s.wires.end() ? s.dims[static_cast<std::size_t>(it - s.wires.begin())]
                                           : dim_of(m, e));
  }
  std::vector<std::size_t> sort_perm(next.wires.size());
  std::iota(sort_perm.begin(), sort_perm.end(), 0);
  std::sort(sort_perm.begin(), sort_perm.end(),
            [&](std::size_t a, std::size_t b) { return next.wires[a] < next.wires[b]; });
  next.rho = permute_density(sigma, cur_dims, sort_perm);
  std::vector<EdgeId> sorted;
  for (auto k : sort_perm) {
    sorted.push_back(next.wires[k]);
    next.dims.push_back(cur_dims[k]);
  }
  next.wires = std::move(sorted);
  return next;
}

double finish(const State& s) {
  if (s.zero) return 0.0;
  const Complex v = s.rho.trace();
  if (std::abs(v.imag()) > kImaginaryTol)
    throw InvalidModel("contraction left an imaginary residue of " + std::to_string(v.imag()));
  double p = v.real();
  if (p < -kNegativeTol)
    throw NegativeProbability("contraction produced probability " + std::to_string(p));
  return p < 0.0 ? 0.0 : p;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

std::size_t space_dim(const Model& model, const std::vector<EdgeId>& edges) {
  std::size_t d = 1;
  for (const auto& e : edges) d = saturating_mul(d, dim_of(model, e));
  return d;
}

std::vector<ModelViolation> validate_model(const Model& model, double tol) {
  std::vector<ModelViolation> out;
  for (auto& v : validate(model.graph)) out.push_back({"graph", v, 0.0});
  if (!out.empty()) return out;
  for (const auto& e : model.graph.edges()) {
    auto it = model.edge_dim.find(e.id);
    if (it == model.edge_dim.end())
      out.push_back({e.id, "edge has no Hilbert space dimension", 0.0});
    else if (it->second < 1)
      out.push_back({e.id, "edge dimension is zero", 0.0});
  }
  for (const auto& [e, _] : model.edge_dim)
    if (!model.graph.has_edge(e)) out.push_back({e, "dimension given for unknown edge", 0.0});
  for (const auto& [v, _] : model.instruments)
    if (!model.graph.has_node(v)) out.push_back({v, "instrument given for unknown node", 0.0});
  if (!out.empty()) return out;

  for (const auto& n : model.graph.nodes()) {
    auto it = model.instruments.find(n.id);
    if (it == model.instruments.end()) {
      out.push_back({n.id, "node has no instrument", 0.0});
      continue;
    }
    const Instrument& inst = it->second;
    if (!same_elements(inst.in_edges, model.graph.in_edges(n.id))) {
      out.push_back({n.id, "instrument input edges do not match the graph", 0.0});
      continue;
    }
    if (!same_elements(inst.out_edges, model.graph.out_edges(n.id))) {
      out.push_back({n.id, "instrument output edges do not match the graph", 0.0});
      continue;
    }
    if (inst.kraus.size() != n.outcomes) {
      out.push_back({n.id,
                     "instrument has " + std::to_string(inst.kraus.size()) + " outcomes, expected " +
                         std::to_string(n.outcomes),
                     0.0});
      continue;
    }
    const auto din = static_cast<Eigen::Index>(space_dim(model, inst.in_edges));
    const auto dout = static_cast<Eigen::Index>(space_dim(model, inst.out_edges));
    bool shapes_ok = true;
    Matrix sum = Matrix::Zero(din, din);
    for (const auto& ops : inst.kraus) {
      for (const auto& k : ops) {
        if (k.rows() != dout || k.cols() != din) {
          shapes_ok = false;
          break;
        }
        if (!k.allFinite()) {
          shapes_ok = false;
          break;
        }
        sum.noalias() += k.adjoint() * k;
      }
      if (!shapes_ok) break;
    }
    if (!shapes_ok) {
      out.push_back({n.id,
                     "Kraus operators must be finite " + std::to_string(dout) + "x" +
                         std::to_string(din) + " matrices",
                     0.0});
      continue;
    }
    const double dev = (sum - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
    if (dev > tol)
      out.push_back({n.id, "instrument is not trace preserving (max deviation " + format_double(dev) + ")",
                     dev});
  }
  return out;
}

void require_valid(const Model& model) {
  auto v = validate_model(model);
  if (v.empty()) return;
  std::string msg = "invalid quantum model:";
  for (const auto& x : v) msg += " [" + x.where + ": " + x.what + "]";
  throw InvalidModel(msg);
}

JointDistribution evaluate(const Model& model, const std::optional<std::vector<NodeId>>& order,
                           Execution exec) {
  require_valid(model);
  const auto& g = model.graph;
  const std::vector<NodeId> seq = order ? *order : topological_order(g);
  if (!is_topological_order(g, seq))
    throw Error("evaluation order is not a topological order of the graph");

  std::vector<Variable> vars;
  for (const auto& n : g.nodes()) vars.push_back({n.id, n.outcomes});
  std::vector<std::size_t> node_stride(vars.size(), 1);
  for (std::size_t k = vars.size(); k-- > 1;) node_stride[k - 1] = node_stride[k] * vars[k].size;

  std::vector<Step> steps;
  std::vector<std::size_t> seq_sizes, seq_stride;
  for (const auto& v : seq) {
    steps.push_back({&model.instruments.at(v), g.outcomes(v)});
    seq_sizes.push_back(g.outcomes(v));
    seq_stride.push_back(node_stride[g.node_index(v)]);
  }
  const Radix tuples(seq_sizes);
  check_limit(tuples.volume(), kDefaultStateSpaceLimit, "number of outcome tuples");
  std::vector<double> probs(tuples.volume(), 0.0);

  auto flat = [&](const std::vector<std::size_t>& digits) {
    std::size_t f = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) f += digits[k] * seq_stride[k];
    return f;
  };

  if (exec == Execution::serial) {
    std::vector<std::size_t> digits;
    for (std::size_t t = 0; t < tuples.volume(); ++t) {
      tuples.decode(t, digits);
      State s;
      for (std::size_t k = 0; k < steps.size(); ++k) s = apply(model, s, *steps[k].inst, digits[k]);
      probs[flat(digits)] = finish(s);
    }
  } else {
    // Split the outcome tree at a depth with enough branches to share out.
    std::size_t depth = 0, branches = 1;
    while (depth < steps.size() && branches < 64) branches *= steps[depth++].outcomes;
    const Radix prefix(std::vector<std::size_t>(seq_sizes.begin(), seq_sizes.begin() + depth));
    const auto n_prefix = static_cast<std::ptrdiff_t>(prefix.volume());

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < n_prefix; ++p) {
      try {
        std::vector<std::size_t> digits(steps.size(), 0), head;
        prefix.decode(static_cast<std::size_t>(p), head);
        State s;
        for (std::size_t k = 0; k < depth; ++k) {
          digits[k] = head[k];
          s = apply(model, s, *steps[k].inst, head[k]);
        }
        std::vector<State> stack(steps.size() + 1);
        stack[depth] = std::move(s);
        // Iterative depth-first walk over the remaining outcomes.
        std::size_t k = depth;
        bool descend = true;
        while (true) {
          if (k == steps.size()) {
            probs[flat(digits)] = finish(stack[k]);
            descend = false;
          }
          if (descend) {
            digits[k] = 0;
            stack[k + 1] = apply(model, stack[k], *steps[k].inst, 0);
            ++k;
            continue;
          }
          // Advance the deepest digit that still has outcomes left.
          while (k > depth && digits[k - 1] + 1 == steps[k - 1].outcomes) --k;
          if (k == depth) break;
          ++digits[k - 1];
          stack[k] = apply(model, stack[k - 1], *steps[k - 1].inst, digits[k - 1]);
          descend = true;
        }
      } catch (...) {
#pragma omp critical(cc_quantum_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return JointDistribution(std::move(vars), std::move(probs));
}

Model decohere_embed(const classical::Model& cmodel) {
  classical::require_valid(cmodel);
  Model q;
  q.graph = cmodel.graph;
  q.edge_dim = cmodel.edge_alphabet;
  for (const auto& n : cmodel.graph.nodes()) {
    const auto& gate = cmodel.gates.at(n.id);
    const auto shape = classical::gate_shape(cmodel, n.id);
    check_limit(saturating_mul(shape.volume(), saturating_mul(shape.in, shape.out)),
                kDefaultStateSpaceLimit, "decoherence embedding size at '" + n.id + "'");
    Instrument inst;
    inst.in_edges = gate.in_edges;
    inst.out_edges = gate.out_edges;
    inst.kraus.resize(shape.outcomes);
    const auto din = static_cast<Eigen::Index>(shape.in);
    const auto dout = static_cast<Eigen::Index>(shape.out);
    for (std::size_t lin = 0; lin < shape.in; ++lin)
      for (std::size_t o = 0; o < shape.outcomes; ++o)
        for (std::size_t lout = 0; lout < shape.out; ++lout) {
          const double p = gate.tensor[shape.index(lin, o, lout)];
          if (p <= 0.0) continue;
          Matrix k = Matrix::Zero(dout, din);
          k(static_cast<Eigen::Index>(lout), static_cast<Eigen::Index>(lin)) = std::sqrt(p);
          inst.kraus[o].push_back(std::move(k));
        }
    q.instruments[n.id] = std::move(inst);
  }
  return q;
}

Matrix subsystem_permutation(const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& perm) {
  const auto map = index_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix u = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) u(static_cast<Eigen::Index>(map[i]), i) = 1.0;
  return u;
}

Model reorder_instrument(const Model& model, const NodeId& node, const std::vector<EdgeId>& in_edges,
                         const std::vector<EdgeId>& out_edges) {
  Model m = model;
  auto it = m.instruments.find(node);
  if (it == m.instruments.end()) throw UnknownNode("no instrument at node '" + node + "'");
  Instrument& inst = it->second;
  auto dims = [&](const std::vector<EdgeId>& es) {
    std::vector<std::size_t> d;
    for (const auto& e : es) d.push_back(dim_of(m, e));
    return d;
  };
  const Matrix u_in = subsystem_permutation(dims(inst.in_edges), permutation_of(inst.in_edges, in_edges));
  const Matrix u_out =
      subsystem_permutation(dims(inst.out_edges), permutation_of(inst.out_edges, out_edges));
  for (auto& ops : inst.kraus)
    for (auto& k : ops) k = u_out * k * u_in.adjoint();
  inst.in_edges = in_edges;
  inst.out_edges = out_edges;
  return m;
}

Model random_model(const CausalGraph& graph, const std::map<EdgeId, std::size_t>& edge_dims,
                   std::size_t kraus_per_outcome, std::uint64_t seed) {
  auto violations = validate(graph);
  if (!violations.empty()) throw InvalidModel("invalid graph: " + violations.front());
  Model m;
  m.graph = graph;
  for (const auto& e : graph.edges()) {
    auto it = edge_dims.find(e.id);
    if (it == edge_dims.end() || it->second == 0)
      throw InvalidModel("no positive dimension for edge '" + e.id + "'");
    m.edge_dim[e.id] = it->second;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& n : graph.nodes()) {
    Instrument inst;
    inst.in_edges = graph.in_edges(n.id);
    inst.out_edges = graph.out_edges(n.id);
    const std::size_t din = space_dim(m, inst.in_edges);
    const std::size_t dout = space_dim(m, inst.out_edges);
    check_limit(saturating_mul(din, dout), kDefaultStateSpaceLimit, "random instrument size");
    // Enough operators that S below is invertible almost surely.
    std::size_t per = std::max<std::size_t>(kraus_per_outcome, 1);
    while (per * n.outcomes * dout < din) ++per;
    const auto rows = static_cast<Eigen::Index>(dout);
    const auto cols = static_cast<Eigen::Index>(din);
    std::vector<Matrix> raw;
    Matrix s = Matrix::Zero(cols, cols);
    for (std::size_t j = 0; j < per * n.outcomes; ++j) {
      Matrix a(rows, cols);
      for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          a(r, c) = Complex(re, im);
        }
      s.noalias() += a.adjoint() * a;
      raw.push_back(std::move(a));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
    const Matrix inv_sqrt = eig.eigenvectors() *
                            eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            eig.eigenvectors().adjoint();
    inst.kraus.resize(n.outcomes);
    for (std::size_t j = 0; j < raw.size(); ++j) inst.kraus[j / per].push_back(raw[j] * inv_sqrt);
    m.instruments[n.id] = std::move(inst);
  }
  return m;
}

Model random_model(const CausalGraph& graph, std::size_t edge_dim, std::size_t kraus_per_outcome,
                   std::uint64_t seed) {
  std::map<EdgeId, std::size_t> dims;
  for (const auto& e : graph.edges()) dims[e.id] = edge_dim;
  return random_model(graph, dims, kraus_per_outcome, seed);
}

}  // namespace cc::quantum
