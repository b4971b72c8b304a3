// Copyright 2026 The qbm Authors
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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Run {
  std::string out;
  int status{-1};
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QBM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// Data rows of a CSV with '#' comments, keyed by the header names.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> meta;

  double at(std::size_t row, const std::string& col) const {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (columns[k] == col) return rows.at(row).at(k);
    }
    ADD_FAILURE() << "no column " << col;
    return NAN;
  }
};

Table parse(const std::string& text) {
  Table t;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && line.rfind("# config:", 0) != 0) {
        t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (t.columns.empty()) {
      t.columns = cells;
      continue;
    }
    std::vector<double> v;
    for (const auto& c : cells) v.push_back(std::stod(c));
    t.rows.push_back(v);
  }
  return t;
}

fs::path scratch(const std::string& name) {
  auto p = fs::path(QBM_CLI_WORKDIR) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("no-such-command").status, 1);
  EXPECT_EQ(run("coeffs --theta 1 --T 1").status, 1);
}

TEST(Cli, CoeffsHighTemperatureLimit) {
  const auto r = run("coeffs --theta 1e6");
  ASSERT_EQ(r.status, 0);
  const auto t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_NEAR(t.at(0, "Delta_reduced"), 1.0 / 12.0, 1e-6);
  EXPECT_EQ(t.meta.at("schema"), "qbm.coeffs/1");
}

TEST(Cli, CoeffsRejectsNonPositiveTemperature) {
  EXPECT_EQ(run("coeffs --theta -1").status, 2);
  EXPECT_EQ(run("coeffs --theta 0").status, 2);
}

TEST(Cli, SiUnitsNeedAllScales) {
  EXPECT_EQ(run("--units si coeffs --T 1").status, 1);
  const auto r = run("--units si --hbar 2 --kB 1 --mass 1 --gamma 1 coeffs --T 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(parse(r.out).at(0, "theta"), 1.0, 1e-15);
}

TEST(Cli, SweepIsMonotoneWithOneSignChange) {
  const auto r = run("sweep --theta-min 0.01 --theta-max 10 --n 50");
  ASSERT_EQ(r.status, 0);
  const auto t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 50u);
  int changes = 0;
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_GT(t.at(k, "Delta"), t.at(k - 1, "Delta"));
    if ((t.at(k, "Delta") > 0) != (t.at(k - 1, "Delta") > 0)) ++changes;
  }
  EXPECT_EQ(changes, 1);
}

TEST(Cli, CriticalTemperatureIsStable) {
  const auto a = run("critical-temp");
  ASSERT_EQ(a.status, 0);
  const double t0 = parse(a.out).at(0, "theta0");
  EXPECT_GT(t0, 0.19);
  EXPECT_LT(t0, 0.22);
  EXPECT_EQ(run("critical-temp").out, a.out);
}

TEST(Cli, KernelMethodsAgree) {
  const auto r = run("kernel --chi 1 --tau-min 0.5 --tau-max 5 --n 10");
  ASSERT_EQ(r.status, 0);
  const auto t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 10u);
  for (std::size_t k = 0; k < t.rows.size(); ++k) EXPECT_LE(t.at(k, "rel_diff"), 1e-5);
}

TEST(Cli, KernelResonanceIsADomainError) {
  EXPECT_EQ(run("kernel --chi 3.141592653589793 --method series").status, 2);
  EXPECT_EQ(run("kernel --chi 3.141592653589793 --method quadrature --n 2").status, 0);
}

TEST(Cli, PlotOnlyWhenAsked) {
  const auto dir = scratch("plot");
  ASSERT_EQ(run("--out-dir " + dir.string() + " kernel --chi 1 --n 4").status, 0);
  EXPECT_TRUE(fs::exists(dir / "kernel.csv"));
  EXPECT_FALSE(fs::exists(dir / "kernel.svg"));
  ASSERT_EQ(run("--out-dir " + dir.string() + " --plot kernel --chi 1 --n 4").status, 0);
  ASSERT_TRUE(fs::exists(dir / "kernel.svg"));
  EXPECT_NE(slurp(dir / "kernel.svg").find("<svg"), std::string::npos);
}

TEST(Cli, GridEvolutionMatchesMoments) {
  const auto g = run("evolve --theta 1 --mode grid --n 129 --t-end 1 --sample 0.25");
  const auto m = run("evolve --theta 1 --mode moments --t-end 1 --sample 0.25");
  ASSERT_EQ(g.status, 0);
  ASSERT_EQ(m.status, 0);
  const auto tg = parse(g.out), tm = parse(m.out);
  ASSERT_EQ(tg.rows.size(), 5u);
  ASSERT_EQ(tm.rows.size(), 5u);
  for (std::size_t k = 0; k < tg.rows.size(); ++k) {
    EXPECT_NEAR(tg.at(k, "t"), tm.at(k, "t"), 1e-12);
    for (const char* c : {"sigma_qq", "sigma_pp"}) EXPECT_NEAR(tg.at(k, c) / tm.at(k, c), 1.0, 1e-3) << c;
    EXPECT_NEAR(tg.at(k, "trace"), 1.0, 1e-6);
    EXPECT_NEAR(tg.at(k, "uncertainty_product") / tm.at(k, "uncertainty_product"), 1.0, 1e-3);
    EXPECT_GE(tm.at(k, "uncertainty_product"), 0.25 - 1e-9);
    EXPECT_EQ(tg.at(k, "boundary_warning"), 0.0);
  }
}

TEST(Cli, GridSnapshots) {
  const auto dir = scratch("snap");
  ASSERT_EQ(run("--out-dir " + dir.string() +
                " evolve --theta 1 --mode grid --n 33 --t-end 0.2 --sample 0.1 --snapshot-every 1 --snapshot-format bin")
                .status,
            0);
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir)) count += e.path().extension() == ".bin";
  EXPECT_EQ(count, 3);
}

TEST(Cli, LangevinIsReproducible) {
  const std::string args = "langevin --theta 100 --map --n-traj 200 --t-end 1 --seed 42";
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(run("langevin --theta 100 --map --n-traj 200 --t-end 1 --seed 43").out, a.out);
  EXPECT_NEAR(std::stod(parse(a.out).meta.at("gamma_cl")), 2.0, 1e-15);
}

TEST(Cli, LangevinRejectsCoarseSteps) {
  EXPECT_EQ(run("langevin --theta 100 --map --dt 0.1 --n-traj 10").status, 2);
}

TEST(Cli, MicrobathBandLimitedWithinOnePercent) {
  const auto r = run("microbath --theta 1 --kernel alpha-i --reference band-limited --n 21");
  ASSERT_EQ(r.status, 0);
  const auto t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 21u);
  for (std::size_t k = 0; k < t.rows.size(); ++k) EXPECT_LE(t.at(k, "rel_error"), 1e-2);
}

TEST(Cli, ManifestReproducesTheRun) {
  const auto a = scratch("manifest_a");
  const auto b = scratch("manifest_b");
  ASSERT_EQ(run("--out-dir " + a.string() + " sweep --n 7 --spacing linear").status, 0);
  ASSERT_TRUE(fs::exists(a / "manifest.txt"));
  ASSERT_EQ(run("--config " + (a / "manifest.txt").string() + " --out-dir " + b.string()).status, 0);
  EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
}

}  // namespace
