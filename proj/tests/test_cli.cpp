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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "cc/bell.hpp"
#include "cc/classical.hpp"
#include "cc/json_io.hpp"
#include "cc/scenarios.hpp"

#ifndef CCORR_BINARY
#error "CCORR_BINARY must name the ccorr executable"
#endif

namespace cc {
namespace {

using io::Json;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + CCORR_BINARY + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write(const std::string& name, const std::string& text) {
  const std::string path = ::testing::TempDir() + "ccorr_cli_" + name;
  std::ofstream(path) << text;
  return path;
}

std::string write(const std::string& name, const Json& j) { return write(name, j.dump()); }

const bell::Scenario kChsh = bell::Scenario::uniform(2, 2, 2);

std::string bell_graph() { return write("bell_graph.json", io::to_json(bell::make_bell_graph(kChsh))); }
std::string pr_box() {
  return write("pr.json", io::to_json(bell::behaviour_joint(kChsh, bell::pr_box_conditional())));
}

TEST(Cli, VersionAndHelp) {
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("ccorr"), std::string::npos);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("check-correlation --help").code, 0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("graph-validate --graph " + bell_graph() + " --bogus").code, 2);
  EXPECT_EQ(run("eval-classical --model /nonexistent/missing.json").code, 2);
  EXPECT_EQ(run("eval-classical --model " + write("bad.json", std::string("{\"graph\": ["))).code, 2);
  EXPECT_EQ(run("eval-classical --model " + bell_graph()).code, 2);
}

TEST(Cli, CheckCorrelationOnPrBox) {
  const auto r = run("check-correlation --graph " + bell_graph() + " --dist " + pr_box());
  EXPECT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("is_correlation"), true);
  EXPECT_TRUE(j.at("violations").empty());
}

TEST(Cli, CheckCorrelationRejectsSignalling) {
  std::vector<double> c(16);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t b = 0; b < 2; ++b) c[((x * 2 + y) * 2 + y) * 2 + b] = 0.5;
  const auto dist = write("signal.json", io::to_json(bell::behaviour_joint(kChsh, c)));
  auto r = run("check-correlation --graph " + bell_graph() + " --dist " + dist);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out).at("is_correlation"), false);
  EXPECT_FALSE(Json::parse(r.out).at("violations").empty());
  EXPECT_EQ(run("bell-check-ns --dist " + dist).code, 1);
  EXPECT_EQ(run("check-correlation --graph " + bell_graph() + " --dist " + dist + " --tol 0.2").code, 0);
}

TEST(Cli, BellLocalOnPrBox) {
  const auto r = run("bell-local --dist " + pr_box());
  EXPECT_EQ(r.code, 1);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("is_local"), false);
  EXPECT_GT(j.at("infeasibility").get<double>(), 0.0);
  EXPECT_EQ(run("chsh --dist " + pr_box()).code, 0);
  EXPECT_DOUBLE_EQ(Json::parse(run("chsh --dist " + pr_box()).out).at("chsh").get<double>(), 4.0);
  EXPECT_EQ(run("bell-local --exact --dist " + pr_box()).code, 1);
}

TEST(Cli, BellGenBoxesAgreeWithLibrary) {
  const auto r = run("bell-gen --box pr");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::dist_from_json(Json::parse(r.out)).probs(),
            bell::behaviour_joint(kChsh, bell::pr_box_conditional()).probs());
  const auto g = run("bell-gen --parties 3");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(io::graph_from_json(Json::parse(g.out)).nodes().size(), 7u);
}

TEST(Cli, QuantumBellDefaultIsNonlocal) {
  const auto q = run("bell-quantum");
  ASSERT_EQ(q.code, 0);
  const auto model = write("q.json", q.out);
  const auto p = run("eval-quantum --model " + model);
  ASSERT_EQ(p.code, 0);
  const auto dist = write("qdist.json", p.out);
  EXPECT_EQ(run("bell-check-ns --dist " + dist).code, 0);
  EXPECT_EQ(run("bell-local --dist " + dist).code, 1);
  const double s = Json::parse(run("chsh --dist " + dist).out).at("chsh").get<double>();
  EXPECT_NEAR(std::abs(s), 2.0 * std::sqrt(2.0), 1e-9);
}

TEST(Cli, EvalClassicalMatchesLibraryBitForBit) {
  const auto m = classical::random_model(scenarios::triangle(), 2, 5);
  const auto r = run("eval-classical --model " + write("tri.json", io::to_json(m)));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::dist_from_json(Json::parse(r.out)).probs(), classical::evaluate(m).probs());
}

TEST(Cli, OutFlagWritesFile) {
  const std::string path = ::testing::TempDir() + "ccorr_cli_out.json";
  std::remove(path.c_str());
  const auto r = run("graph-validate --graph " + bell_graph() + " --out " + path);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  EXPECT_EQ(Json::parse(in).at("ok"), true);
}

TEST(Cli, GraphValidateReportsCycle) {
  const Json cyc = {{"nodes", {{{"id", "a"}, {"outcomes", 2}}, {{"id", "b"}, {"outcomes", 2}}}},
                    {"edges", {{{"id", "a->b"}, {"src", "a"}, {"dst", "b"}}, {{"id", "b->a"}, {"src", "b"}, {"dst", "a"}}}}};
  const auto r = run("graph-validate --graph " + write("cyc.json", cyc));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("cycle a→b→a"), std::string::npos);
}

TEST(Cli, RandomModelIsDeterministicPerSeed) {
  const auto g = write("popescu.json", io::to_json(scenarios::popescu()));
  const auto a = run("random-model --graph " + g + " --seed 7");
  const auto b = run("random-model --graph " + g + " --seed 7");
  const auto c = run("random-model --graph " + g + " --seed 8");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, ModelTransformsRoundTrip) {
  const auto m = classical::random_model(scenarios::popescu(), 2, 9);
  const auto path = write("pop_model.json", io::to_json(m));
  const auto ref = classical::evaluate(m);
  const auto small = write("bell_model.json", io::to_json(classical::random_model(scenarios::bell(), 2, 10)));
  const auto pushed = run("push-determinism --model " + small);
  ASSERT_EQ(pushed.code, 0);
  EXPECT_LE(max_abs_difference(classical::evaluate(io::classical_from_json(Json::parse(pushed.out))),
                               classical::evaluate(classical::random_model(scenarios::bell(), 2, 10))),
            1e-12);
  const auto lifted = run("lift-edge --model " + path + " --src s --dst a");
  ASSERT_EQ(lifted.code, 0);
  EXPECT_LE(max_abs_difference(classical::evaluate(io::classical_from_json(Json::parse(lifted.out))), ref), 1e-12);
  const auto rerouted =
      run("reroute-edge --model " + write("lifted.json", lifted.out) + " --edge 's->a#tc' --via \"a'\"");
  ASSERT_EQ(rerouted.code, 0);
  EXPECT_LE(max_abs_difference(classical::evaluate(io::classical_from_json(Json::parse(rerouted.out))), ref), 1e-12);
  const auto h = run("to-hbn --model " + path);
  ASSERT_EQ(h.code, 0);
  const auto e = run("eval-hbn --hbn " + write("h.json", h.out));
  ASSERT_EQ(e.code, 0);
  EXPECT_LE(max_abs_difference(io::dist_from_json(Json::parse(e.out)), ref), 1e-12);
  const auto q = run("embed-quantum --model " + path);
  ASSERT_EQ(q.code, 0);
  const auto eq = run("eval-quantum --model " + write("emb.json", q.out));
  EXPECT_LE(max_abs_difference(io::dist_from_json(Json::parse(eq.out)), ref), 1e-12);
}

TEST(Cli, EnvironmentGuardExitsTwo) {
  const auto m = classical::random_model(scenarios::bell(), 2, 3);
  const auto path = write("guard.json", io::to_json(m));
  EXPECT_EQ(run("eval-classical --model " + path).code, 0);
  EXPECT_EQ(run("push-determinism --model " + path, "CC_MAX_STATE_SPACE=4").code, 2);
}

TEST(Cli, CompressCoarseGraining) {
  CoarseGraining f{{3, 3}, 2, {}};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) f.map.push_back((a + b) % 2);
  const auto p = JointDistribution::uniform({{"a", 3}, {"b", 3}});
  const auto r = run("compress-cg --model " + write("cg.json", io::to_json(f)) + " --dist " +
                     write("cgd.json", io::to_json(p)) + " --tol 0");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("factor_sizes"), Json::array({2, 2}));
}

}  // namespace
}  // namespace cc
