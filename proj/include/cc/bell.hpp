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

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cc/causal_graph.hpp"
#include "cc/dist.hpp"
#include "cc/quantum.hpp"

namespace cc::bell {

/// n parties with settings x_i and outcomes a_i, fed by a common source s.
struct Scenario {
  std::size_t parties = 2;
  std::vector<std::size_t> settings;
  std::vector<std::size_t> outcomes;
  std::size_t source = 1;

  static Scenario uniform(std::size_t parties, std::size_t settings, std::size_t outcomes,
                          std::size_t source = 1);
};

void validate_scenario(const Scenario& sc);

NodeId source_id();
NodeId setting_id(std::size_t party);  // "x1", "x2", ...
NodeId outcome_id(std::size_t party);  // "a1", "a2", ...

/// Nodes s, x1, a1, x2, a2, ...; edges s->a_i and x_i->a_i.
CausalGraph make_bell_graph(const Scenario& sc);

/// Reads the scenario off a distribution over s, x_i, a_i (any order).
/// Throws ShapeMismatch.
Scenario infer_scenario(const JointDistribution& p);

struct NsVerdict {
  bool holds = false;
  /// max |P(x_1 .. x_n s) - P(x_1) .. P(x_n) P(s)|
  double free_will = 0.0;
  /// Entry i: max |P(V - a_i) - P(x_i) P(V - a_i - x_i)|
  std::vector<double> no_signalling;
  double tol = 0.0;
};

NsVerdict check_free_will_no_signalling(const Scenario& sc, const JointDistribution& p,
                                        double tol = 1e-9);

/// Per-party response functions; response[i][x] is a_i at setting x.
using Strategy = std::vector<std::vector<std::size_t>>;

std::size_t strategy_count(const Scenario& sc);
Strategy strategy_at(const Scenario& sc, std::size_t index);
/// "r_1|r_2|..." where r_i lists party i's outcomes by setting, dot separated.
std::string strategy_label(const Strategy& d);

struct SourceFit {
  std::size_t source_outcome = 0;
  /// False when P(s) is zero and nothing constrains this block.
  bool constrained = true;
  bool feasible = false;
  /// Phase-1 objective: total artificial slack left at the optimum.
  double infeasibility = 0.0;
  /// Max |reconstruction - conditional| over defined rows.
  double residual = 0.0;
  /// Nonzero strategy weights, keyed by strategy_label.
  std::map<std::string, double> weights;
};

struct LocalityVerdict {
  bool is_local = false;
  std::vector<SourceFit> per_source;
  double residual = 0.0;
  double infeasibility = 0.0;
  double tol = 0.0;
  bool exact = false;
};

/// Decomposes P(a | x, s) into deterministic strategies, one LP per source
/// outcome. Throws NotNoSignalling first if the free-will / no-signalling
/// checks fail at `tol`, and SizeLimitExceeded past 10^6 strategies (4096
/// in exact mode).
LocalityVerdict local_membership(const Scenario& sc, const JointDistribution& p, double tol = 1e-7,
                                 bool exact = false);

/// Full joint P(s) prod_i P(x_i) P(a | x, s), variables in graph node order.
/// `conditional` is row-major over (s, x_1..x_n, a_1..a_n).
JointDistribution behaviour_joint(const Scenario& sc, const std::vector<double>& conditional,
                                  const std::vector<std::vector<double>>& setting_dists,
                                  const std::vector<double>& source_dist);

/// Uniform settings, trivial source.
JointDistribution behaviour_joint(const Scenario& sc, const std::vector<double>& conditional);

/// Conditional table of a deterministic strategy (trivial source).
std::vector<double> strategy_conditional(const Scenario& sc, const Strategy& d);

/// (2,2,2) box with a XOR b = x AND y.
std::vector<double> pr_box_conditional();

/// S = E(0,0) + E(0,1) + E(1,0) - E(1,1) for a (2,2,2) conditional indexed
/// ((x*2 + y)*2 + a)*2 + b, outcome 0 counting as +1.
double chsh_value(const std::array<double, 16>& conditional);

/// CHSH value of a joint over x1, a1, x2, a2 (and optionally s, which is
/// summed out). Throws ShapeMismatch.
double chsh_value(const JointDistribution& p);

struct QuantumBellSetup {
  /// Per source outcome, a unit vector on H_1 x ... x H_n.
  std::vector<Eigen::VectorXcd> states;
  std::vector<std::size_t> local_dims;
  /// povms[i][x][a] = E^x_a for party i.
  std::vector<std::vector<std::vector<quantum::Matrix>>> povms;
  std::vector<std::vector<double>> setting_dists;
  std::vector<double> source_dist;
};

/// Quantum model on the Bell graph: s prepares P(s) |psi_s><psi_s| on the
/// s->a_i wires, x_i sends |x><x| weighted by P(x), and a_i measures
/// sum_x |x><x| (x) E^x_a. Throws ShapeMismatch or IncompletePOVM.
quantum::Model quantum_bell_model(const Scenario& sc, const QuantumBellSetup& setup);

/// Projective qubit measurement along angle theta in the x-z plane.
std::vector<quantum::Matrix> qubit_measurement(double theta);

/// (|01> - |10>) / sqrt(2)
Eigen::VectorXcd singlet();

}  // namespace cc::bell
