// Copyright 2026 The hufsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "hufsense/io.hpp"

using namespace hufsense;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hufsense_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun cli(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd =
      std::string(HUFSENSE_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

const std::string kData = HUFSENSE_DATA_DIR;

}  // namespace

TEST(Io, ModelRoundTripAndErrors) {
  const SupportModel m = model_from_json(read_json_file(kData + "/small_law.json"));
  EXPECT_EQ(m.dimension(), 4);
  EXPECT_NEAR(m.q_of(IndexSet{0}), 0.61, 1e-12);
  const SupportModel again = model_from_json(model_to_json(m));
  EXPECT_NEAR(again.q_of(IndexSet{1, 2}), m.q_of(IndexSet{1, 2}), 1e-15);

  try {
    model_from_json(Json::parse(R"({"explicit": [{"support": [1], "p": 0.5}, {"support": [2], "p": "x"}]})"));
    FAIL() << "expected a format error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("model.explicit[1].p"), std::string::npos) << e.what();
  }
  EXPECT_THROW(model_from_json(Json::parse(R"({"explicit": [{"support": [0], "p": 1.0}]})")), FormatError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"marginal": {"n": 8}})")), FormatError);
}

TEST(Io, SignalRoundTrip) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
  x(2) = -1.5;
  x(5) = 4.0;
  EXPECT_EQ(signal_from_json(signal_to_json(x)), x);
  EXPECT_THROW(signal_from_json(Json::parse(R"({"n": 3, "entries": [{"index": 4, "value": 1}]})")), FormatError);
}

TEST(Io, CampaignConfigParses) {
  const CampaignConfig c = campaign_from_json(read_json_file(kData + "/../configs/noise_vs_sparsity.json"));
  EXPECT_EQ(c.generator.n, 512);
  EXPECT_EQ(c.sweep, SweepVariable::Sparsity);
  EXPECT_EQ(c.values.front(), 4.0);
  EXPECT_EQ(c.noise.kind, NoiseKind::Uniform);
  const CampaignConfig back = campaign_from_json(campaign_to_json(c));
  EXPECT_EQ(back.values, c.values);
  EXPECT_EQ(back.seed, c.seed);
}

TEST(Cli, TreeDumpMatchesSmallLaw) {
  const CliRun r = cli("tree --model " + kData + "/small_law.json");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json t = Json::parse(r.out);
  EXPECT_EQ(t["indexSet"], Json::parse("[1,2,3,4]"));
  EXPECT_NEAR(t["q"].get<double>(), 0.98, 1e-12);
  EXPECT_EQ(t["sampled"], "left");
  EXPECT_EQ(t["left"]["indexSet"], Json::parse("[1]"));
  EXPECT_EQ(t["right"]["indexSet"], Json::parse("[2,3,4]"));
  EXPECT_EQ(t["right"]["left"]["indexSet"], Json::parse("[2]"));
  EXPECT_EQ(t["right"]["right"]["indexSet"], Json::parse("[3,4]"));
  EXPECT_NEAR(t["right"]["right"]["left"]["q"].get<double>(), 0.3, 1e-12);
  EXPECT_NEAR(t["right"]["right"]["right"]["q"].get<double>(), 0.26, 1e-12);
}

TEST(Cli, TreeOfOneLeaf) {
  const fs::path m = write("one.json", R"({"explicit": [{"support": [1], "p": 1.0}]})");
  const CliRun r = cli("tree --model " + m.string());
  ASSERT_EQ(r.status, 0) << r.err;
  const Json t = Json::parse(r.out);
  EXPECT_EQ(t["indexSet"], Json::parse("[1]"));
  EXPECT_FALSE(t.contains("left"));
}

TEST(Cli, MalformedModelNamesTheField) {
  const fs::path m = write("bad.json", R"({"explicit": [{"support": [1], "p": 0.5}, {"support": [2]}]})");
  const CliRun r = cli("tree --model " + m.string());
  EXPECT_NE(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("model.explicit[1].p"), std::string::npos) << r.err;
}

TEST(Cli, RecoverZeroSignalAndUnitVector) {
  const fs::path zero = write("zero.json", R"({"n": 4, "entries": []})");
  CliRun r = cli("recover --model " + kData + "/small_law.json --signal " + zero.string());
  ASSERT_EQ(r.status, 0) << r.err;
  Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["total_measurements"], 1);
  EXPECT_TRUE(doc["recovered"].empty());

  r = cli("recover --model " + kData + "/small_law.json --signal " + kData + "/small_law_e1.json --traces");
  ASSERT_EQ(r.status, 0) << r.err;
  doc = Json::parse(r.out);
  EXPECT_EQ(doc["order"], Json::parse("[1]"));
  EXPECT_EQ(doc["recovered"][0]["value"], 1.0);
  // One descent step plus the value read in the round that finds coordinate 1.
  EXPECT_EQ(doc["rounds"][0]["steps"].size(), 1U);
  EXPECT_EQ(doc["total_measurements"], 5);
}

TEST(Cli, NoisyRecoverDerivesThreshold) {
  const CliRun r = cli("recover --model " + kData + "/small_law.json --signal " + kData +
                    "/small_law_e1.json --noise gaussian:1 --seed 4");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_NEAR(doc["threshold"].get<double>(), 0.7978845608028654, 1e-12);
  EXPECT_EQ(doc["seed"], 4);
}

TEST(Cli, SimulateWritesCsvAndEchoesConfig) {
  const CliRun r = cli("simulate --config " + kData + "/../configs/noise_vs_sparsity.json --trials 5 --seed 8");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "sweep_value,mean_count,var_count,mean_rel_err_pct,median_rel_err_pct,success_rate,seconds");
  EXPECT_NE(r.err.find("config:"), std::string::npos);
  EXPECT_NE(r.err.find("seed: 8"), std::string::npos);
}

TEST(Cli, PredictZeroNoise) {
  const CliRun r = cli("predict --sigma-noise 0 --sigma-signal 1 --s 8 --n 512");
  ASSERT_EQ(r.status, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["p_single"], 0.0);
  EXPECT_EQ(doc["p_recovery"], 0.0);
}

TEST(Cli, ValidateSuitePasses) {
  const CliRun r = cli("validate --models 100 --seed 3");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, UnknownSubcommandAndFlagRejected) {
  EXPECT_NE(cli("frobnicate").status, 0);
  EXPECT_NE(cli("tree --model x.json --bogus").status, 0);
  EXPECT_NE(cli("").status, 0);
  EXPECT_NE(cli("tree --model /nonexistent/model.json").status, 0);
}
