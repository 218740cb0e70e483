#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bounds.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "matrix_io.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace subpert;

namespace {

RunConfig small(Subcommand s, int trials) {
  RunConfig c;
  c.subcommand = s;
  c.trials = trials;
  c.dim_min = 2;
  c.dim_max = 8;
  c.partition = 8;
  c.timestamp = false;
  return c;
}

std::string csv_of(const RunResult& r) {
  std::ostringstream os;
  write_csv(os, r.rows, false);
  return os.str();
}

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Harness, ValidateRejectsBadConfigs) {
  auto bad = [](auto mutate) {
    RunConfig c = small(Subcommand::kVerify, 1);
    mutate(c);
    EXPECT_THROW(validate(c), ValidationError);
  };
  bad([](RunConfig& c) { c.trials = -1; });
  bad([](RunConfig& c) { c.dim_min = 1; });
  bad([](RunConfig& c) { c.dim_min = 9; });
  bad([](RunConfig& c) { c.x_min = 0.0; });
  bad([](RunConfig& c) { c.x_max = 0.5; });
  bad([](RunConfig& c) { c.x_min = 0.3, c.x_max = 0.2; });
  bad([](RunConfig& c) { c.grid = 0; });
  bad([](RunConfig& c) { c.partition = 1; });
  bad([](RunConfig& c) { c.threads = 0; });
  bad([](RunConfig& c) {
    c.subcommand = Subcommand::kOscillator;
    c.osc_vnorm = 0.5;
  });
  bad([](RunConfig& c) {
    c.subcommand = Subcommand::kOscillator;
    c.osc_nmax = 0;
  });
  EXPECT_NO_THROW(validate(small(Subcommand::kVerify, 0)));
}

TEST(Harness, ColumnsMatchRowCells) {
  const auto& cols = result_columns();
  ASSERT_EQ(cols.size(), 25u);
  EXPECT_EQ(cols.front(), "trial");
  EXPECT_EQ(cols.back(), "error");
  std::ostringstream os;
  write_csv(os, bounds_grid(3), false);
  std::istringstream in(os.str());
  std::string line;
  while (std::getline(in, line)) {
    ASSERT_FALSE(line.empty());
    EXPECT_EQ(line.back(), '\r');
    EXPECT_EQ(static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')),
              cols.size() - 1);
  }
}

TEST(Harness, BoundsGridMatchesClosedForms) {
  const auto rows = bounds_grid(100);
  ASSERT_EQ(rows.size(), 100u);
  const double c_kmm = 2.0 / (2.0 + M_PI);
  for (int k = 0; k < 100; ++k) {
    const auto& r = rows[k];
    const double x = 0.5 * k / 100.0;
    EXPECT_EQ(r.x, x);
    EXPECT_NEAR(r.m_ms, -0.25 * M_PI * std::log(1.0 - 2.0 * x), 1e-15);
    if (x <= c_kmm) {
      EXPECT_NEAR(r.m_kmm, std::asin(M_PI * x / (2.0 - 2.0 * x)), 1e-15);
    } else {
      EXPECT_TRUE(std::isnan(r.m_kmm));
    }
    EXPECT_EQ(r.m_star, m_star(x));
  }
  EXPECT_THROW(bounds_grid(0), ValidationError);
}

TEST(Harness, ZeroTrialsGiveEmptyOutput) {
  const auto r = run(small(Subcommand::kVerify, 0));
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(count_lines(csv_of(r)), 1);
  std::ostringstream js;
  write_json(js, r.rows);
  EXPECT_EQ(js.str(), "[]\n");
}

TEST(Harness, VerifyIsDeterministicAcrossThreadCounts) {
  auto c = small(Subcommand::kVerify, 12);
  c.seed = 99;
  const auto a = run(c);
  c.threads = 4;
  const auto b = run(c);
  EXPECT_EQ(csv_of(a), csv_of(b));
  EXPECT_EQ(count_lines(csv_of(a)), 13);
  EXPECT_EQ(a.violations, 0);
  EXPECT_EQ(a.errors, 0);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& r = a.rows[i];
    EXPECT_EQ(r.trial, static_cast<long>(i));
    EXPECT_EQ(r.seed, trial_seed(99, i));
    EXPECT_GE(r.dim, 2);
    EXPECT_LE(r.dim, 8);
    EXPECT_GT(r.x, 0.01);
    EXPECT_LT(r.x, 0.49);
    EXPECT_EQ(r.pass_mstar, Flag::kPass);
    EXPECT_EQ(r.pass_path, Flag::kPass);
    EXPECT_EQ(r.pass_kappa, Flag::kPass);
    EXPECT_EQ(r.pass_consistency, Flag::kPass);
    EXPECT_EQ(r.wall_ms, 0.0);
  }
  c.seed = 100;
  EXPECT_NE(csv_of(run(c)), csv_of(a));
}

TEST(Harness, PathAndStressRows) {
  const auto p = run(small(Subcommand::kPath, 5));
  for (const auto& r : p.rows) {
    EXPECT_EQ(r.pass_path, Flag::kPass);
    EXPECT_EQ(r.pass_kappa, Flag::kNa);
    EXPECT_LE(r.path_length, r.path_bound + 1e-12);
  }
  const auto s = run(small(Subcommand::kStress, 20));
  ASSERT_TRUE(s.stress.has_value());
  EXPECT_EQ(s.stress->count, 20);
  EXPECT_LE(s.stress->theta_min, s.stress->theta_mean);
  EXPECT_LE(s.stress->theta_mean, s.stress->theta_max);
  EXPECT_LE(s.stress->theta_max, M_PI / 2);
  for (const auto& r : s.rows) {
    EXPECT_GE(r.x, constants().c_star);
    EXPECT_EQ(r.pass_consistency, Flag::kNa);
  }
}

TEST(Harness, OscillatorRow) {
  auto c = small(Subcommand::kOscillator, 1);
  c.osc_dims = 2;
  c.osc_nmax = 6;
  const auto r = run(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].dim, 28);
  EXPECT_EQ(r.rows[0].pass_mstar, Flag::kPass);
  EXPECT_EQ(r.rows[0].pass_consistency, Flag::kPass);
  EXPECT_EQ(r.violations, 0);
}

TEST(Harness, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(csv_field(""), "");
}

TEST(Harness, CsvTimestampHeader) {
  std::ostringstream os;
  write_csv(os, {}, true);
  EXPECT_EQ(os.str().rfind("# generated ", 0), 0u);
  EXPECT_EQ(count_lines(os.str()), 2);
}

TEST(Harness, JsonShape) {
  ResultRow r;
  r.trial = 3;
  r.x = 0.25;
  r.pass_mstar = Flag::kPass;
  r.pass_ms = Flag::kFail;
  r.error = "bad \"thing\"\n";
  std::ostringstream os;
  write_json(os, {r, r});
  const std::string s = os.str();
  EXPECT_EQ(s.front(), '[');
  EXPECT_EQ(s.substr(s.size() - 2), "]\n");
  EXPECT_EQ(std::count(s.begin(), s.end(), '{'), 2);
  EXPECT_NE(s.find("\"trial\": 3"), std::string::npos);
  EXPECT_NE(s.find("\"x\": 0.25"), std::string::npos);
  EXPECT_NE(s.find("\"theta\": null"), std::string::npos);
  EXPECT_NE(s.find("\"pass_mstar\": true"), std::string::npos);
  EXPECT_NE(s.find("\"pass_ms\": false"), std::string::npos);
  EXPECT_NE(s.find("\"pass_kmm\": null"), std::string::npos);
  EXPECT_NE(s.find("\"error\": \"bad \\\"thing\\\"\\n\""), std::string::npos);
}

TEST(Harness, FixtureRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "subpert_fixture_test";
  std::filesystem::remove_all(dir);
  const auto p = random_problem(5, 0.2, 17);
  write_fixture(p, dir);
  EXPECT_EQ(read_matrix(dir / "A.txt"), p.a().matrix());
  EXPECT_EQ(read_matrix(dir / "V.txt"), p.v().matrix());
  std::ifstream s(dir / "sigma.txt");
  std::size_t n = 0;
  double lo, hi;
  while (s >> lo >> hi) {
    ASSERT_LT(n, p.sigma().intervals().size());
    EXPECT_EQ(lo, p.sigma().intervals()[n].lo);
    EXPECT_EQ(hi, p.sigma().intervals()[n].hi);
    ++n;
  }
  EXPECT_EQ(n, p.sigma().intervals().size());
  std::filesystem::remove_all(dir);
}
