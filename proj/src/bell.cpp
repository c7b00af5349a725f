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

#include "cc/bell.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "cc/correlation.hpp"
#include "cc/errors.hpp"
#include "cc/radix.hpp"
#include "cc/simplex.hpp"

namespace cc::bell {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kPovmTol = 1e-10;
constexpr double kStateNormTol = 1e-10;
constexpr std::size_t kExactStrategyLimit = 4096;

std::vector<std::string> setting_ids(const Scenario& sc) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < sc.parties; ++i) ids.push_back(setting_id(i));
  return ids;
}

std::vector<std::string> outcome_ids(const Scenario& sc) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < sc.parties; ++i) ids.push_back(outcome_id(i));
  return ids;
}

// p over exactly the scenario's variables, in graph node order. A missing
// source variable is read as a trivial one.
JointDistribution canonical(const Scenario& sc, const JointDistribution& p) {
  const CausalGraph g = make_bell_graph(sc);
  std::vector<std::string> order;
  for (const auto& n : g.nodes()) order.push_back(n.id);
  JointDistribution q = p;
  if (!p.find(source_id()) && sc.source == 1) {
    q = JointDistribution({{source_id(), 1}}, {1.0}, true);
    std::vector<Variable> vars = q.vars();
    vars.insert(vars.end(), p.vars().begin(), p.vars().end());
    q = JointDistribution(std::move(vars), p.probs(), p.normalized());
  }
  if (q.vars().size() != order.size())
    throw ShapeMismatch("distribution does not range over the Bell scenario's variables");
  for (const auto& n : g.nodes()) {
    auto idx = q.find(n.id);
    if (!idx) throw ShapeMismatch("distribution lacks Bell variable '" + n.id + "'");
    if (q.vars()[*idx].size != n.outcomes)
      throw ShapeMismatch("variable '" + n.id + "' has " + std::to_string(q.vars()[*idx].size) +
                          " values, scenario expects " + std::to_string(n.outcomes));
  }
  return reorder(q, order);
}

std::size_t checked_strategy_count(const Scenario& sc, bool exact) {
  const std::size_t count = strategy_count(sc);
  check_limit(count, exact ? kExactStrategyLimit : kDefaultStrategyLimit, "number of strategies");
  return count;
}

template <class T>
struct BlockResult {
  T infeasibility;
  std::vector<T> q;
};

template <class T>
BlockResult<T> solve_block(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
                           const T& eps, const T& pivot_eps) {
  std::vector<std::vector<T>> a(rows.size());
  std::vector<T> b(rhs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a[i].reserve(rows[i].size());
    for (double v : rows[i]) a[i].push_back(T(v));
    b[i] = T(rhs[i]);
  }
  auto r = lp::phase_one<T>(a, b, eps, pivot_eps);
  return {r.infeasibility, std::move(r.x)};
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

Scenario Scenario::uniform(std::size_t parties, std::size_t settings, std::size_t outcomes,
                           std::size_t source) {
  Scenario sc;
  sc.parties = parties;
  sc.settings.assign(parties, settings);
  sc.outcomes.assign(parties, outcomes);
  sc.source = source;
  return sc;
}

void validate_scenario(const Scenario& sc) {
  if (sc.parties < 1) throw ShapeMismatch("a Bell scenario needs at least one party");
  if (sc.settings.size() != sc.parties || sc.outcomes.size() != sc.parties)
    throw ShapeMismatch("setting and outcome sizes must be given for every party");
  if (sc.source < 1) throw ShapeMismatch("source outcome size must be positive");
  for (std::size_t i = 0; i < sc.parties; ++i)
    if (sc.settings[i] < 1 || sc.outcomes[i] < 1)
      throw ShapeMismatch("setting and outcome sizes must be positive");
}

NodeId source_id() { return "s"; }
NodeId setting_id(std::size_t party) { return "x" + std::to_string(party + 1); }
NodeId outcome_id(std::size_t party) { return "a" + std::to_string(party + 1); }

CausalGraph make_bell_graph(const Scenario& sc) {
  validate_scenario(sc);
  std::vector<Node> nodes{{source_id(), sc.source}};
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sc.parties; ++i) {
    nodes.push_back({setting_id(i), sc.settings[i]});
    nodes.push_back({outcome_id(i), sc.outcomes[i]});
    edges.push_back({source_id() + "->" + outcome_id(i), source_id(), outcome_id(i)});
    edges.push_back({setting_id(i) + "->" + outcome_id(i), setting_id(i), outcome_id(i)});
  }
  return CausalGraph(std::move(nodes), std::move(edges));
}

Scenario infer_scenario(const JointDistribution& p) {
  Scenario sc;
  sc.parties = 0;
  while (p.find(setting_id(sc.parties)) || p.find(outcome_id(sc.parties))) ++sc.parties;
  if (sc.parties == 0) throw ShapeMismatch("distribution has no Bell variables x1, a1");
  for (std::size_t i = 0; i < sc.parties; ++i) {
    auto x = p.find(setting_id(i));
    auto a = p.find(outcome_id(i));
    if (!x || !a) throw ShapeMismatch("party " + std::to_string(i + 1) + " lacks a setting or outcome");
    sc.settings.push_back(p.vars()[*x].size);
    sc.outcomes.push_back(p.vars()[*a].size);
  }
  auto s = p.find(source_id());
  sc.source = s ? p.vars()[*s].size : 1;
  const std::size_t expected = 2 * sc.parties + (s ? 1 : 0);
  if (p.vars().size() != expected) throw ShapeMismatch("distribution has variables outside the Bell scenario");
  return sc;
}

NsVerdict check_free_will_no_signalling(const Scenario& sc, const JointDistribution& p, double tol) {
  const JointDistribution q = canonical(sc, p);
  const CausalGraph g = make_bell_graph(sc);
  NsVerdict v;
  v.tol = tol;

  auto free = setting_ids(sc);
  free.push_back(source_id());
  const JointDistribution joint = marginal(q, free);
  std::vector<JointDistribution> singles;
  for (const auto& var : joint.vars()) singles.push_back(marginal(q, {var.id}));
  std::vector<std::size_t> digits;
  for (std::size_t t = 0; t < joint.size(); ++t) {
    digits = joint.unflatten(t);
    double prod = 1.0;
    for (std::size_t k = 0; k < singles.size(); ++k) prod *= singles[k][digits[k]];
    v.free_will = std::max(v.free_will, std::abs(joint[t] - prod));
  }

  for (std::size_t i = 0; i < sc.parties; ++i) {
    NodeSet rest;
    for (const auto& n : g.nodes())
      if (n.id != setting_id(i) && n.id != outcome_id(i)) rest.insert(n.id);
    v.no_signalling.push_back(pair_deviation(q, {setting_id(i)}, rest));
  }
  v.holds = v.free_will <= tol &&
            std::all_of(v.no_signalling.begin(), v.no_signalling.end(), [&](double d) { return d <= tol; });
  return v;
}

std::size_t strategy_count(const Scenario& sc) {
  validate_scenario(sc);
  std::size_t count = 1;
  for (std::size_t i = 0; i < sc.parties; ++i)
    for (std::size_t x = 0; x < sc.settings[i]; ++x) count = saturating_mul(count, sc.outcomes[i]);
  return count;
}

Strategy strategy_at(const Scenario& sc, std::size_t index) {
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < sc.parties; ++i)
    for (std::size_t x = 0; x < sc.settings[i]; ++x) sizes.push_back(sc.outcomes[i]);
  const auto digits = Radix(sizes).decode(index);
  Strategy d(sc.parties);
  std::size_t k = 0;
  for (std::size_t i = 0; i < sc.parties; ++i)
    for (std::size_t x = 0; x < sc.settings[i]; ++x) d[i].push_back(digits[k++]);
  return d;
}

std::string strategy_label(const Strategy& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += '|';
    for (std::size_t x = 0; x < d[i].size(); ++x) {
      if (x) s += '.';
      s += std::to_string(d[i][x]);
    }
  }
  return s;
}

LocalityVerdict local_membership(const Scenario& sc, const JointDistribution& p, double tol, bool exact) {
  const JointDistribution q = canonical(sc, p);
  const NsVerdict ns = check_free_will_no_signalling(sc, q, tol);
  if (!ns.holds) {
    double worst = ns.free_will;
    for (double d : ns.no_signalling) worst = std::max(worst, d);
    throw NotNoSignalling("distribution fails the free-will / no-signalling checks (max deviation " +
                          format_double(worst) + ")");
  }
  const std::size_t n_strat = checked_strategy_count(sc, exact);

  auto givens = setting_ids(sc);
  givens.push_back(source_id());
  const ConditionalTable ct = conditional(q, outcome_ids(sc), givens);
  const Radix xs(sc.settings), as(sc.outcomes);

  // predicted[d * |X| + x] = outcome tuple chosen by strategy d at settings x.
  std::vector<std::size_t> predicted(n_strat * xs.volume());
  std::vector<Strategy> strategies(n_strat);
  std::vector<std::size_t> xd, ad(sc.parties);
  for (std::size_t d = 0; d < n_strat; ++d) {
    strategies[d] = strategy_at(sc, d);
    for (std::size_t x = 0; x < xs.volume(); ++x) {
      xs.decode(x, xd);
      for (std::size_t i = 0; i < sc.parties; ++i) ad[i] = strategies[d][i][xd[i]];
      predicted[d * xs.volume() + x] = as.encode(ad);
    }
  }

  LocalityVerdict verdict;
  verdict.tol = tol;
  verdict.exact = exact;
  verdict.is_local = true;
  for (std::size_t s = 0; s < sc.source; ++s) {
    SourceFit fit;
    fit.source_outcome = s;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<std::size_t> row_x;
    for (std::size_t x = 0; x < xs.volume(); ++x) {
      const auto& row = ct.rows[x * sc.source + s];
      if (!row) continue;
      for (std::size_t a = 0; a < as.volume(); ++a) {
        std::vector<double> coeff(n_strat, 0.0);
        for (std::size_t d = 0; d < n_strat; ++d)
          if (predicted[d * xs.volume() + x] == a) coeff[d] = 1.0;
        rows.push_back(std::move(coeff));
        rhs.push_back((*row)[a]);
        row_x.push_back(x);
      }
    }
    if (rows.empty()) {
      fit.constrained = false;
      fit.feasible = true;
      verdict.per_source.push_back(std::move(fit));
      continue;
    }
    rows.emplace_back(n_strat, 1.0);
    rhs.push_back(1.0);

    std::vector<double> weights(n_strat, 0.0);
    if (exact) {
      auto r = solve_block<Rational>(rows, rhs, Rational(0), Rational(0));
      fit.infeasibility = static_cast<double>(r.infeasibility);
      for (std::size_t d = 0; d < n_strat; ++d) weights[d] = static_cast<double>(r.q[d]);
    } else {
      auto r = solve_block<double>(rows, rhs, 1e-12, 1e-9);
      fit.infeasibility = r.infeasibility;
      weights = std::move(r.q);
    }
    fit.feasible = fit.infeasibility <= tol;

    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      double recon = 0.0;
      for (std::size_t d = 0; d < n_strat; ++d) recon += rows[k][d] * weights[d];
      fit.residual = std::max(fit.residual, std::abs(recon - rhs[k]));
    }
    if (fit.feasible)
      for (std::size_t d = 0; d < n_strat; ++d)
        if (weights[d] > 0.0) fit.weights[strategy_label(strategies[d])] = weights[d];

    verdict.is_local = verdict.is_local && fit.feasible;
    verdict.residual = std::max(verdict.residual, fit.residual);
    verdict.infeasibility = std::max(verdict.infeasibility, fit.infeasibility);
    verdict.per_source.push_back(std::move(fit));
  }
  return verdict;
}

JointDistribution behaviour_joint(const Scenario& sc, const std::vector<double>& conditional,
                                  const std::vector<std::vector<double>>& setting_dists,
                                  const std::vector<double>& source_dist) {
  const CausalGraph g = make_bell_graph(sc);
  const Radix xs(sc.settings), as(sc.outcomes);
  if (conditional.size() != sc.source * xs.volume() * as.volume())
    throw ShapeMismatch("conditional table has the wrong size");
  if (setting_dists.size() != sc.parties || source_dist.size() != sc.source)
    throw ShapeMismatch("setting or source distribution has the wrong size");
  for (std::size_t i = 0; i < sc.parties; ++i)
    if (setting_dists[i].size() != sc.settings[i])
      throw ShapeMismatch("setting distribution of party " + std::to_string(i + 1) + " has the wrong size");

  std::vector<Variable> vars;
  std::vector<std::size_t> sizes;
  for (const auto& n : g.nodes()) {
    vars.push_back({n.id, n.outcomes});
    sizes.push_back(n.outcomes);
  }
  const Radix all(sizes);
  std::vector<double> probs(all.volume());
  std::vector<std::size_t> digits, xd(sc.parties), ad(sc.parties);
  for (std::size_t t = 0; t < all.volume(); ++t) {
    all.decode(t, digits);
    const std::size_t s = digits[0];
    double w = source_dist[s];
    for (std::size_t i = 0; i < sc.parties; ++i) {
      xd[i] = digits[1 + 2 * i];
      ad[i] = digits[2 + 2 * i];
      w *= setting_dists[i][xd[i]];
    }
    probs[t] = w * conditional[(s * xs.volume() + xs.encode(xd)) * as.volume() + as.encode(ad)];
  }
  return JointDistribution(std::move(vars), std::move(probs));
}

JointDistribution behaviour_joint(const Scenario& sc, const std::vector<double>& conditional) {
  std::vector<std::vector<double>> settings;
  for (std::size_t i = 0; i < sc.parties; ++i)
    settings.emplace_back(sc.settings[i], 1.0 / static_cast<double>(sc.settings[i]));
  return behaviour_joint(sc, conditional, settings,
                         std::vector<double>(sc.source, 1.0 / static_cast<double>(sc.source)));
}

std::vector<double> strategy_conditional(const Scenario& sc, const Strategy& d) {
  const Radix xs(sc.settings), as(sc.outcomes);
  std::vector<double> c(sc.source * xs.volume() * as.volume(), 0.0);
  std::vector<std::size_t> xd, ad(sc.parties);
  for (std::size_t s = 0; s < sc.source; ++s)
    for (std::size_t x = 0; x < xs.volume(); ++x) {
      xs.decode(x, xd);
      for (std::size_t i = 0; i < sc.parties; ++i) ad[i] = d[i][xd[i]];
      c[(s * xs.volume() + x) * as.volume() + as.encode(ad)] = 1.0;
    }
  return c;
}

std::vector<double> pr_box_conditional() {
  std::vector<double> c(16, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) c[((x * 2 + y) * 2 + a) * 2 + b] = 0.5;
  return c;
}

double chsh_value(const std::array<double, 16>& c) {
  auto corr = [&](std::size_t x, std::size_t y) {
    double e = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        e += ((a ^ b) ? -1.0 : 1.0) * c[((x * 2 + y) * 2 + a) * 2 + b];
    return e;
  };
  return corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1);
}

double chsh_value(const JointDistribution& p) {
  const Scenario sc = infer_scenario(p);
  if (sc.parties != 2 || sc.settings != std::vector<std::size_t>{2, 2} ||
      sc.outcomes != std::vector<std::size_t>{2, 2})
    throw ShapeMismatch("CHSH needs a two-party scenario with binary settings and outcomes");
  const ConditionalTable ct = conditional(p, {"a1", "a2"}, {"x1", "x2"});
  std::array<double, 16> c{};
  for (std::size_t xy = 0; xy < 4; ++xy) {
    if (!ct.rows[xy]) throw ShapeMismatch("a setting pair has zero probability");
    for (std::size_t ab = 0; ab < 4; ++ab) c[xy * 4 + ab] = (*ct.rows[xy])[ab];
  }
  return chsh_value(c);
}

quantum::Model quantum_bell_model(const Scenario& sc, const QuantumBellSetup& setup) {
  using quantum::Matrix;
  const CausalGraph g = make_bell_graph(sc);
  if (setup.states.size() != sc.source) throw ShapeMismatch("need one state per source outcome");
  if (setup.local_dims.size() != sc.parties || setup.povms.size() != sc.parties ||
      setup.setting_dists.size() != sc.parties)
    throw ShapeMismatch("need local dimensions, POVMs and setting distributions for every party");
  if (setup.source_dist.size() != sc.source) throw ShapeMismatch("source distribution has the wrong size");

  auto check_dist = [](const std::vector<double>& d, const std::string& what) {
    double sum = 0.0;
    for (double x : d) {
      if (!(x >= 0.0)) throw InvalidDistribution(what + " has a negative entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kNormalizationTol) throw InvalidDistribution(what + " is not normalized");
  };
  check_dist(setup.source_dist, "source distribution");

  std::size_t total_dim = 1;
  for (auto d : setup.local_dims) {
    if (d < 1) throw ShapeMismatch("local dimensions must be positive");
    total_dim = saturating_mul(total_dim, d);
  }
  check_limit(total_dim, kDefaultDensityDimLimit, "joint source dimension");
  for (const auto& psi : setup.states) {
    if (static_cast<std::size_t>(psi.size()) != total_dim)
      throw ShapeMismatch("state dimension does not match the product of local dimensions");
    if (std::abs(psi.norm() - 1.0) > kStateNormTol) throw ShapeMismatch("states must be unit vectors");
  }

  quantum::Model m;
  m.graph = g;
  quantum::Instrument src;
  for (std::size_t i = 0; i < sc.parties; ++i) {
    const EdgeId se = source_id() + "->" + outcome_id(i);
    const EdgeId xe = setting_id(i) + "->" + outcome_id(i);
    m.edge_dim[se] = setup.local_dims[i];
    m.edge_dim[xe] = sc.settings[i];
    src.out_edges.push_back(se);
  }
  for (std::size_t s = 0; s < sc.source; ++s)
    src.kraus.push_back({Matrix(std::sqrt(setup.source_dist[s]) * setup.states[s])});
  m.instruments[source_id()] = std::move(src);

  for (std::size_t i = 0; i < sc.parties; ++i) {
    const std::size_t d = setup.local_dims[i];
    const std::size_t nx = sc.settings[i];
    const auto& dist = setup.setting_dists[i];
    if (dist.size() != nx) throw ShapeMismatch("setting distribution of party " + std::to_string(i + 1) + " has the wrong size");
    check_dist(dist, "setting distribution of party " + std::to_string(i + 1));

    quantum::Instrument xi;
    xi.out_edges = {setting_id(i) + "->" + outcome_id(i)};
    for (std::size_t x = 0; x < nx; ++x) {
      Matrix k = Matrix::Zero(static_cast<Eigen::Index>(nx), 1);
      k(static_cast<Eigen::Index>(x), 0) = std::sqrt(dist[x]);
      xi.kraus.push_back({k});
    }
    m.instruments[setting_id(i)] = std::move(xi);

    const auto& povm = setup.povms[i];
    if (povm.size() != nx) throw ShapeMismatch("party " + std::to_string(i + 1) + " needs one POVM per setting");
    quantum::Instrument ai;
    ai.in_edges = {setting_id(i) + "->" + outcome_id(i), source_id() + "->" + outcome_id(i)};
    ai.kraus.resize(sc.outcomes[i]);
    const auto dd = static_cast<Eigen::Index>(d);
    for (std::size_t x = 0; x < nx; ++x) {
      if (povm[x].size() != sc.outcomes[i])
        throw ShapeMismatch("POVM of party " + std::to_string(i + 1) + " has the wrong number of effects");
      Matrix sum = Matrix::Zero(dd, dd);
      for (std::size_t a = 0; a < sc.outcomes[i]; ++a) {
        const Matrix& e = povm[x][a];
        if (e.rows() != dd || e.cols() != dd) throw ShapeMismatch("POVM effect has the wrong dimension");
        sum += e;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(e);
        for (Eigen::Index j = 0; j < dd; ++j) {
          const double lambda = eig.eigenvalues()(j);
          if (lambda < -kPovmTol) throw IncompletePOVM("POVM effect is not positive semidefinite");
          if (lambda <= 0.0) continue;
          Matrix k = Matrix::Zero(1, static_cast<Eigen::Index>(nx) * dd);
          k.block(0, static_cast<Eigen::Index>(x) * dd, 1, dd) =
              std::sqrt(lambda) * eig.eigenvectors().col(j).adjoint();
          ai.kraus[a].push_back(std::move(k));
        }
      }
      if ((sum - Matrix::Identity(dd, dd)).cwiseAbs().maxCoeff() > kPovmTol)
        throw IncompletePOVM("effects of party " + std::to_string(i + 1) + " at setting " +
                             std::to_string(x) + " do not sum to the identity");
    }
    m.instruments[outcome_id(i)] = std::move(ai);
  }
  return m;
}

std::vector<quantum::Matrix> qubit_measurement(double theta) {
  Eigen::VectorXcd v0(2), v1(2);
  v0 << std::cos(theta / 2), std::sin(theta / 2);
  v1 << -std::sin(theta / 2), std::cos(theta / 2);
  return {v0 * v0.adjoint(), v1 * v1.adjoint()};
}

Eigen::VectorXcd singlet() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return psi;
}

}  // namespace cc::bell
