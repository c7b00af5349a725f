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

#include <string>
#include <vector>

#include <json.hpp>

#include "cc/bell.hpp"
#include "cc/causal_graph.hpp"
#include "cc/classical.hpp"
#include "cc/correlation.hpp"
#include "cc/dist.hpp"
#include "cc/hbn.hpp"
#include "cc/quantum.hpp"
#include "cc/violation.hpp"

namespace cc::io {

using Json = nlohmann::json;

// Readers reject unknown fields, missing fields and wrong types with
// SchemaError. Writers emit exactly the fields the readers accept.

/// {"nodes":[{"id","outcomes"}], "edges":[{"id","src","dst"}]}
CausalGraph graph_from_json(const Json& j);
Json to_json(const CausalGraph& g);

/// {"vars":[{"id","size"}], "probs":[...]}; row-major, last variable fastest.
JointDistribution dist_from_json(const Json& j);
Json to_json(const JointDistribution& p);

/// {"graph", "edge_sizes":{edge:int}, "gates":{node:{"in","out","tensor"}}}
classical::Model classical_from_json(const Json& j);
Json to_json(const classical::Model& m);

/// {"graph", "edge_dims":{edge:int},
///  "instruments":{node:{"in","out","kraus":{"<outcome>":[matrix, ...]}}}}
/// A matrix is a flat row-major list of [re, im] pairs of shape out x in.
quantum::Model quantum_from_json(const Json& j);
Json to_json(const quantum::Model& m);

/// {"graph", "node_sizes":{node:int},
///  "transitions":{node:{"parents","table"}}, "readouts":{node:[...]}}
hbn::Net hbn_from_json(const Json& j);
Json to_json(const hbn::Net& h);

/// {"domain":[...], "codomain":int, "map":[...]}
CoarseGraining coarse_graining_from_json(const Json& j);
Json to_json(const CoarseGraining& f);

/// {"parties", "settings":[...], "outcomes":[...], "source"}
bell::Scenario scenario_from_json(const Json& j);
Json to_json(const bell::Scenario& sc);

/// {"local_dims", "states":[vector...], "povms":[[[effect...]...]...],
///  "setting_dists", "source_dist"}; vectors and d x d effects as [re, im]
/// lists.
bell::QuantumBellSetup bell_setup_from_json(const Json& j);
Json to_json(const bell::QuantumBellSetup& s);

Json to_json(const std::vector<ModelViolation>& v);
Json to_json(const CorrelationVerdict& v);
Json to_json(const bell::NsVerdict& v);
Json to_json(const bell::LocalityVerdict& v);
Json to_json(const CoarseGrainingFactorization& f);
Json to_json(const NodeSet& s);

/// Parses a file; throws SchemaError on unreadable or malformed input.
Json read_file(const std::string& path);

}  // namespace cc::io
