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

#include "cc/dist.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cc/errors.hpp"

namespace cc {

JointDistribution::JointDistribution(std::vector<Variable> vars, std::vector<double> probs,
                                     bool normalized, double norm_tol)
    : vars_(std::move(vars)), probs_(std::move(probs)), normalized_(normalized) {
  std::size_t expected = 1;
  std::set<std::string> ids;
  for (const auto& v : vars_) {
    if (v.size == 0) throw InvalidDistribution("variable '" + v.id + "' has size 0");
    if (!ids.insert(v.id).second) throw InvalidDistribution("duplicate variable '" + v.id + "'");
    expected = saturating_mul(expected, v.size);
  }
  check_limit(expected, kDefaultStateSpaceLimit, "distribution table size");
  if (probs_.size() != expected)
    throw InvalidDistribution("table has " + std::to_string(probs_.size()) +
                              " entries, expected " + std::to_string(expected));
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i]))
      throw InvalidDistribution("entry " + std::to_string(i) + " is negative or not finite");
  }
  if (normalized_) {
    double t = total();
    if (std::abs(t - 1.0) > norm_tol)
      throw InvalidDistribution("entries sum to " + std::to_string(t) + ", not 1");
  }
}

JointDistribution JointDistribution::uniform(std::vector<Variable> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n = saturating_mul(n, v.size);
  check_limit(n, kDefaultStateSpaceLimit, "distribution table size");
  return JointDistribution(std::move(vars), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointDistribution JointDistribution::point_mass(std::vector<Variable> vars,
                                                const std::vector<std::size_t>& tuple) {
  std::size_t n = 1;
  for (const auto& v : vars) n = saturating_mul(n, v.size);
  check_limit(n, kDefaultStateSpaceLimit, "distribution table size");
  JointDistribution p(std::move(vars), std::vector<double>(n, 0.0), false);
  p.probs_[p.flat_index(tuple)] = 1.0;
  p.normalized_ = true;
  return p;
}

std::optional<std::size_t> JointDistribution::find(const std::string& id) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].id == id) return i;
  return std::nullopt;
}

std::size_t JointDistribution::index_of(const std::string& id) const {
  auto i = find(id);
  if (!i) throw UnknownVariable("unknown variable '" + id + "'");
  return *i;
}

std::vector<std::string> JointDistribution::ids() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.id);
  return out;
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> tuple) const {
  if (tuple.size() != vars_.size()) throw ShapeMismatch("tuple length does not match variables");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (tuple[i] >= vars_[i].size) throw ShapeMismatch("tuple value out of range");
    idx = idx * vars_[i].size + tuple[i];
  }
  return idx;
}

std::vector<std::size_t> JointDistribution::unflatten(std::size_t flat) const {
  std::vector<std::size_t> t(vars_.size());
  for (std::size_t i = vars_.size(); i-- > 0;) {
    t[i] = flat % vars_[i].size;
    flat /= vars_[i].size;
  }
  return t;
}

double JointDistribution::total() const {
  double t = 0.0;
  for (double x : probs_) t += x;
  return t;
}

Tensor JointDistribution::as_tensor() const {
  std::vector<Axis> axes;
  for (const auto& v : vars_) axes.push_back({v.id, v.size});
  return Tensor(std::move(axes), probs_);
}

JointDistribution marginal(const JointDistribution& p, const std::vector<std::string>& keep,
                           Execution exec) {
  std::set<std::string> keep_set;
  for (const auto& id : keep) {
    p.index_of(id);
    keep_set.insert(id);
  }
  std::vector<std::string> order;
  std::vector<Variable> vars;
  for (const auto& v : p.vars()) {
    if (keep_set.count(v.id)) {
      order.push_back(v.id);
      vars.push_back(v);
    }
  }
  Tensor t = contract(p.as_tensor(), Tensor::scalar(1.0), order, exec);
  return JointDistribution(std::move(vars), std::move(t.data()), p.normalized());
}

JointDistribution reorder(const JointDistribution& p, const std::vector<std::string>& order) {
  std::set<std::string> a(order.begin(), order.end());
  auto ids = p.ids();
  std::set<std::string> b(ids.begin(), ids.end());
  if (a != b || order.size() != ids.size())
    throw VariableMismatch("reorder requires a permutation of the variable ids");
  std::vector<Variable> vars;
  for (const auto& id : order) vars.push_back(p.vars()[p.index_of(id)]);
  Tensor t = contract(p.as_tensor(), Tensor::scalar(1.0), order, Execution::serial);
  return JointDistribution(std::move(vars), std::move(t.data()), p.normalized());
}

ConditionalTable conditional(const JointDistribution& p, const std::vector<std::string>& targets,
                             const std::vector<std::string>& givens, double zero_tol) {
  std::set<std::string> ts, gs;
  for (const auto& t : targets) {
    p.index_of(t);
    if (!ts.insert(t).second) throw OverlappingSets("target '" + t + "' repeated");
  }
  for (const auto& g : givens) {
    p.index_of(g);
    if (!gs.insert(g).second) throw OverlappingSets("given '" + g + "' repeated");
    if (ts.count(g)) throw OverlappingSets("variable '" + g + "' is both target and given");
  }
  std::vector<std::string> both = givens;
  both.insert(both.end(), targets.begin(), targets.end());
  // Joint over (givens, targets) in the caller's order.
  Tensor joint = contract(p.as_tensor(), Tensor::scalar(1.0), both, Execution::serial);

  ConditionalTable out;
  for (const auto& g : givens) out.givens.push_back(p.vars()[p.index_of(g)]);
  for (const auto& t : targets) out.targets.push_back(p.vars()[p.index_of(t)]);
  std::size_t gsize = 1, tsize = 1;
  for (const auto& v : out.givens) gsize *= v.size;
  for (const auto& v : out.targets) tsize *= v.size;
  out.rows.resize(gsize);
  out.given_marginal.resize(gsize);
  for (std::size_t g = 0; g < gsize; ++g) {
    const double* row = joint.data().data() + g * tsize;
    double m = 0.0;
    for (std::size_t t = 0; t < tsize; ++t) m += row[t];
    out.given_marginal[g] = m;
    if (m <= zero_tol) continue;
    std::vector<double> r(row, row + tsize);
    for (double& x : r) x /= m;
    out.rows[g] = std::move(r);
  }
  return out;
}

JointDistribution product(const JointDistribution& a, const JointDistribution& b) {
  for (const auto& v : b.vars())
    if (a.find(v.id)) throw VariableCollision("variable '" + v.id + "' appears in both factors");
  std::vector<Variable> vars = a.vars();
  vars.insert(vars.end(), b.vars().begin(), b.vars().end());
  std::vector<std::string> order;
  for (const auto& v : vars) order.push_back(v.id);
  Tensor t = contract(a.as_tensor(), b.as_tensor(), order, Execution::serial);
  return JointDistribution(std::move(vars), std::move(t.data()), a.normalized() && b.normalized());
}

namespace {
void require_same_vars(const JointDistribution& a, const JointDistribution& b) {
  if (a.vars() != b.vars()) throw VariableMismatch("distributions have different variable lists");
}
}  // namespace

double tv_distance(const JointDistribution& a, const JointDistribution& b) {
  require_same_vars(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

double max_abs_difference(const JointDistribution& a, const JointDistribution& b) {
  require_same_vars(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void validate_coarse_graining(const CoarseGraining& f) {
  std::size_t n = 1;
  for (auto d : f.domain) {
    if (d == 0) throw ShapeMismatch("coarse-graining factor of size 0");
    n = saturating_mul(n, d);
  }
  check_limit(n, kDefaultStateSpaceLimit, "coarse-graining domain");
  if (f.codomain == 0) throw ShapeMismatch("coarse-graining codomain is empty");
  if (f.map.size() != n) throw ShapeMismatch("coarse-graining table has the wrong length");
  for (auto s : f.map)
    if (s >= f.codomain) throw ShapeMismatch("coarse-graining value outside the codomain");
}

namespace {

void check_factor_shape(const JointDistribution& p, const CoarseGraining& f) {
  validate_coarse_graining(f);
  if (p.vars().size() != f.domain.size()) throw ShapeMismatch("factor count mismatch");
  for (std::size_t k = 0; k < f.domain.size(); ++k)
    if (p.vars()[k].size != f.domain[k]) throw ShapeMismatch("factor size mismatch");
}

// Index into the product of classes for the flat domain index.
std::size_t cell_of(std::size_t flat, const std::vector<std::size_t>& domain,
                    const std::vector<std::vector<std::size_t>>& maps,
                    const std::vector<std::size_t>& sizes) {
  std::size_t cell = 0, mult = 1;
  for (std::size_t k = domain.size(); k-- > 0;) {
    std::size_t x = flat % domain[k];
    flat /= domain[k];
    cell += maps[k][x] * mult;
    mult *= sizes[k];
  }
  return cell;
}

std::size_t cell_count(const std::vector<std::size_t>& sizes) {
  std::size_t c = 1;
  for (auto s : sizes) c *= s;
  return c;
}

// Relabels classes 0..m-1 in order of first appearance.
std::size_t canonicalize(std::vector<std::size_t>& map) {
  std::vector<std::size_t> relabel(map.size() + 1, SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : map) {
    if (relabel[c] == SIZE_MAX) relabel[c] = next++;
    c = relabel[c];
  }
  return next;
}

}  // namespace

double factorization_error(const JointDistribution& p, const CoarseGraining& f,
                           const std::vector<std::vector<std::size_t>>& factor_maps,
                           const std::vector<std::size_t>& factor_sizes,
                           const std::vector<std::size_t>& composed) {
  check_factor_shape(p, f);
  double err = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t cell = cell_of(i, f.domain, factor_maps, factor_sizes);
    if (composed[cell] != f.map[i]) err += p[i];
  }
  return err;
}

std::vector<std::size_t> best_composed_map(const JointDistribution& p, const CoarseGraining& f,
                                           const std::vector<std::vector<std::size_t>>& factor_maps,
                                           const std::vector<std::size_t>& factor_sizes) {
  check_factor_shape(p, f);
  const std::size_t cells = cell_count(factor_sizes);
  check_limit(saturating_mul(cells, f.codomain), kDefaultStateSpaceLimit, "coarse-graining cells");
  std::vector<double> mass(cells * f.codomain, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    mass[cell_of(i, f.domain, factor_maps, factor_sizes) * f.codomain + f.map[i]] += p[i];
  std::vector<std::size_t> g(cells, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    const double* row = mass.data() + c * f.codomain;
    g[c] = static_cast<std::size_t>(std::max_element(row, row + f.codomain) - row);
  }
  return g;
}

CoarseGrainingFactorization factor_coarse_graining(const JointDistribution& p,
                                                   const CoarseGraining& f, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw BadEpsilon("epsilon must lie in [0, 1]");
  check_factor_shape(p, f);
  const std::size_t n = f.domain.size();

  CoarseGrainingFactorization best;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> id(f.domain[k]);
    for (std::size_t x = 0; x < id.size(); ++x) id[x] = x;
    best.factor_maps.push_back(id);
    best.factor_sizes.push_back(f.domain[k]);
  }
  best.composed = best_composed_map(p, f, best.factor_maps, best.factor_sizes);
  best.error = factorization_error(p, f, best.factor_maps, best.factor_sizes, best.composed);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < f.domain[k]; ++i) {
        for (std::size_t j = i + 1; j < f.domain[k]; ++j) {
          const auto& cur = best.factor_maps[k];
          if (cur[i] == cur[j]) continue;
          auto maps = best.factor_maps;
          auto sizes = best.factor_sizes;
          const std::size_t from = cur[j], to = cur[i];
          for (auto& c : maps[k])
            if (c == from) c = to;
          sizes[k] = canonicalize(maps[k]);
          auto g = best_composed_map(p, f, maps, sizes);
          double err = factorization_error(p, f, maps, sizes, g);
          if (err <= eps) {
            best.factor_maps = std::move(maps);
            best.factor_sizes = std::move(sizes);
            best.composed = std::move(g);
            best.error = err;
            changed = true;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace cc
