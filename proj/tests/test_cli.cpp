// Copyright 2026 The bewitness Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = bewitness::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("bewitness_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    ASSERT_EQ(invoke({"upb", "tiles", "-o", path("tiles.json")}).code, 0);
    ASSERT_EQ(invoke({"upb", "padded", "--dim", "4", "-o", path("padded4.json")}).code, 0);
    for (const char* omega : {"0.05", "0.1"}) {
      const std::string name = std::string("r") + omega + ".json";
      ASSERT_EQ(invoke({"state", "rho-g", "--upb", path("tiles.json"), "--g", "1", "--omega", omega, "-o", path(name)}).code, 0);
    }
    ASSERT_EQ(invoke({"state", "rho-be", "--upb", path("tiles.json"), "-o", path("be.json")}).code, 0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static inline fs::path dir_;
};

}  // namespace

TEST_F(CliTest, upb_catalogs) {
  EXPECT_EQ(json::parse(slurp(path("tiles.json")))["members"].size(), 5u);
  EXPECT_EQ(json::parse(slurp(path("padded4.json")))["members"].size(), 12u);
  const Result bad = invoke({"upb", "padded", "--dim", "2"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("at least 3"), std::string::npos);
}

TEST_F(CliTest, certify_reports_lambda) {
  const Result r = invoke({"upb", "certify", "--in", path("tiles.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["is_upb_evidence"].get<bool>());
  EXPECT_NEAR(j["lambda_hat"].get<double>(), support::kTilesLambda, 1e-9);
}

TEST_F(CliTest, malformed_catalog_fails) {
  std::ofstream(path("broken.json")) << "{\"dims\": [3, 3], \"real\": true";
  EXPECT_EQ(invoke({"upb", "certify", "--in", path("broken.json")}).code, 1);
  EXPECT_EQ(invoke({"upb", "certify", "--in", path("missing.json")}).code, 1);
}

TEST_F(CliTest, states_report_rank_and_ppt) {
  const Result r = invoke({"state", "rho-g", "--upb", path("tiles.json"), "--g", "1", "--omega", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("rank = 5, ppt = true"), std::string::npos) << r.err;

  const Result full = invoke({"state", "rho-g", "--upb", path("padded4.json"), "--g", "1,2,3,4,5,6,7,8,9,10,11,12",
                              "--omega", "0.05"});
  ASSERT_EQ(full.code, 0) << full.err;
  EXPECT_NE(full.err.find("rank = 16, ppt = true"), std::string::npos) << full.err;
}

TEST_F(CliTest, zero_omega_equals_rho_be) {
  const Result g = invoke({"state", "rho-g", "--upb", path("tiles.json"), "--g", "2", "--omega", "0"});
  const Result be = invoke({"state", "rho-be", "--upb", path("tiles.json")});
  ASSERT_EQ(g.code, 0);
  ASSERT_EQ(be.code, 0);
  const auto a = bewitness::io::matrix_from_json(json::parse(g.out)["matrix"]);
  const auto b = bewitness::io::matrix_from_json(json::parse(be.out)["matrix"]);
  EXPECT_LT(bewitness::max_abs_diff(a, b), 1e-15);
}

TEST_F(CliTest, state_precondition_errors) {
  EXPECT_EQ(invoke({"state", "rho-g", "--upb", path("tiles.json"), "--g", "1", "--omega", "1.5"}).code, 1);
  EXPECT_EQ(invoke({"state", "rho-g", "--upb", path("tiles.json"), "--g", "", "--omega", "0.1"}).code, 1);
  EXPECT_EQ(invoke({"state", "rho-g", "--upb", path("tiles.json"), "--g", "6", "--omega", "0.1"}).code, 1);
}

TEST_F(CliTest, checks_return_verdicts_with_exit_zero) {

  const std::string lam = bewitness::cli::format_double(support::kTilesLambda);
  const Result w = invoke({"check", "witness", "--state", path("r0.05.json"), "--lambda", lam});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_NEAR(json::parse(w.out)["value"].get<double>(), 0.05 - support::kTilesLambda, 1e-10);
  EXPECT_FALSE(json::parse(w.out)["detected"].get<bool>());

  const Result wb = invoke({"check", "witness", "--state", path("be.json"), "--lambda", lam});
  ASSERT_EQ(wb.code, 0);
  EXPECT_TRUE(json::parse(wb.out)["detected"].get<bool>());

  const Result rc = invoke({"check", "range-criterion", "--state", path("be.json")});
  ASSERT_EQ(rc.code, 0) << rc.err;
  EXPECT_FALSE(json::parse(rc.out)["passed"].get<bool>());

  const Result sep = invoke({"check", "separable-nnls", "--state", path("r0.1.json")});
  ASSERT_EQ(sep.code, 0) << sep.err;
  EXPECT_EQ(json::parse(sep.out)["verdict"], "infeasible");

  const Result ppt = invoke({"check", "ppt", "--state", path("r0.1.json")});
  ASSERT_EQ(ppt.code, 0);
  EXPECT_TRUE(json::parse(ppt.out)["is_ppt"].get<bool>());

  const Result prod = invoke({"check", "products", "--state", path("r0.1.json"), "-o", path("found.json")});
  ASSERT_EQ(prod.code, 0) << prod.err;
  EXPECT_EQ(json::parse(slurp(path("found.json")))["clusters"].size(), 6u);
  const Result pooled = invoke({"check", "separable-nnls", "--state", path("r0.1.json"), "--pool", path("found.json")});
  ASSERT_EQ(pooled.code, 0);
  EXPECT_NEAR(json::parse(pooled.out)["residual"].get<double>(), json::parse(sep.out)["residual"].get<double>(), 1e-10);
}

TEST_F(CliTest, scan_nnls_flips_at_one_fifth) {
  const Result r = invoke({"--format", "csv", "scan", "--upb", path("tiles.json"), "--g", "1", "--omega-from", "0",
                           "--omega-to", "0.4", "--step", "0.005", "--checks", "nnls"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 82u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"omega", "witness_value", "min_pt_eig", "nnls_residual", "nnls_feasible",
                                               "rc_passed"}));
  double last_infeasible = -1.0;
  double first_feasible = 2.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    ASSERT_EQ(rows[k].size(), 6u);
    EXPECT_TRUE(rows[k][1].empty());
    const double omega = std::stod(rows[k][0]);
    if (rows[k][4] == "true") first_feasible = std::min(first_feasible, omega);
    else last_infeasible = std::max(last_infeasible, omega);
  }
  EXPECT_LT(last_infeasible, first_feasible);
  EXPECT_NEAR(first_feasible, 0.2, 0.005 + 1e-12);
  EXPECT_LE(first_feasible - last_infeasible, 0.005 + 1e-12);
}

TEST_F(CliTest, scan_witness_flips_near_lambda) {
  const Result r = invoke({"scan", "--upb", path("padded4.json"), "--g", "1,2,3,4,5,6,7,8", "--omega-from", "0",
                           "--omega-to", "0.1", "--step", "0.005", "--checks", "witness,ppt"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  const double lam = j["lambda_hat"].get<double>();
  EXPECT_NEAR(lam, support::kTilesLambda, 1e-6);
  for (const auto& row : j["rows"]) {
    const double omega = row["omega"].get<double>();
    EXPECT_NEAR(row["witness_value"].get<double>(), omega - lam, 1e-10);
    EXPECT_GE(row["min_pt_eig"].get<double>(), -1e-10);
    EXPECT_TRUE(row["nnls_residual"].is_null());
  }
}

TEST_F(CliTest, scan_degenerate_grid_and_errors) {
  const Result r = invoke({"--format", "csv", "scan", "--upb", path("tiles.json"), "--g", "1", "--omega-from", "0.1",
                           "--omega-to", "0.2", "--step", "0.5", "--checks", "ppt"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "0.1");
  EXPECT_EQ(invoke({"scan", "--upb", path("tiles.json"), "--g", "1", "--omega-from", "0.2", "--omega-to", "0.1",
                    "--step", "0.01"}).code, 1);
  EXPECT_EQ(invoke({"scan", "--upb", path("tiles.json"), "--g", "1", "--omega-from", "0", "--omega-to", "0.1",
                    "--step", "0"}).code, 1);
}

TEST_F(CliTest, identical_configs_give_identical_bytes) {
  const std::vector<std::string> args{"--seed", "7", "--starts", "20", "upb", "certify", "--in", path("tiles.json")};
  auto a = args;
  a.insert(a.end(), {"-o", path("c1.json")});
  auto b = args;
  b.insert(b.end(), {"-o", path("c2.json")});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(path("c1.json")), slurp(path("c2.json")));
  EXPECT_EQ(invoke({"check", "products", "--state", path("r0.1.json")}).out,
            invoke({"check", "products", "--state", path("r0.1.json")}).out);
}

TEST_F(CliTest, seed_from_environment) {
  const std::vector<std::string> args{"--starts", "3", "upb", "certify", "--in", path("tiles.json")};
  ::setenv("BEWITNESS_SEED", "99", 1);
  const Result env = invoke(args);
  ::unsetenv("BEWITNESS_SEED");
  EXPECT_EQ(json::parse(env.out)["seed"], 99);
  const Result flag = invoke({"--seed", "99", "--starts", "3", "upb", "certify", "--in", path("tiles.json")});
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(json::parse(invoke(args).out)["seed"], 42);
}

TEST_F(CliTest, tolerance_overrides) {
  const Result strict = invoke({"--tol", "infeasible=1", "check", "separable-nnls", "--state", path("r0.1.json")});
  ASSERT_EQ(strict.code, 0);
  EXPECT_EQ(json::parse(strict.out)["verdict"], "inconclusive");
  EXPECT_EQ(invoke({"--tol", "bogus=1", "check", "ppt", "--state", path("r0.1.json")}).code, 1);
  EXPECT_EQ(invoke({"--tol", "ppt", "check", "ppt", "--state", path("r0.1.json")}).code, 1);
}

TEST_F(CliTest, parse_errors_exit_two) {
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"upb", "padded"}).code, 2);
  EXPECT_EQ(invoke({"--format", "xml", "upb", "tiles"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, csv_only_for_scan) {
  EXPECT_EQ(invoke({"--format", "csv", "upb", "tiles"}).code, 1);
}
