#include "qce_cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return qce::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qce_cli_test_" + name + ".json");
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"--quiet", "certify", "--disc", "15", "--prime", "271"}), 0);
  EXPECT_EQ(run_cli({"--quiet", "certify", "--disc", "3", "--prime", "73"}), 1);
  EXPECT_EQ(run_cli({"--quiet", "certify", "--disc", "3", "--prime", "3"}), 2);
  EXPECT_EQ(run_cli({"--quiet", "certify", "--disc", "12", "--prime", "271"}), 2);
  EXPECT_EQ(run_cli({"--quiet", "no-such-command"}), 2);
  EXPECT_EQ(run_cli({"--quiet", "kloosterman", "1", "1"}), 2);
  EXPECT_EQ(run_cli({"--quiet", "component-group", "--prime", "13", "--ram", "1"}), 2);
  EXPECT_EQ(run_cli({"--quiet", "kloosterman", "1", "1", "5"}), 0);
}

TEST(Cli, JsonOutputIsDeterministic) {
  const auto a = temp_file("a"), b = temp_file("b");
  for (const auto& f : {a, b})
    ASSERT_EQ(run_cli({"--quiet", "--json", "--out", f.string(), "component-group", "--prime", "11", "--ram", "2"}), 0);
  const auto sa = slurp(a);
  EXPECT_EQ(sa, slurp(b));
  EXPECT_NE(sa.find("\"invariant_factors\":[10]"), std::string::npos) << sa;
  EXPECT_EQ(sa.find("elapsed_ms"), std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, TimingAddsElapsed) {
  const auto a = temp_file("t");
  ASSERT_EQ(run_cli({"--quiet", "--json", "--timing", "--out", a.string(), "runge-bound", "--prime", "2"}), 0);
  EXPECT_NE(slurp(a).find("elapsed_ms"), std::string::npos);
  std::filesystem::remove(a);
}

TEST(Cli, NonFiniteValuesAreStrings) {
  qce::cli::json j = {{"x", std::numeric_limits<double>::infinity()}, {"y", std::nan("")}, {"z", 0.1}};
  const auto s = qce::cli::to_json_string(j);
  EXPECT_NE(s.find("\"inf\""), std::string::npos) << s;
  EXPECT_NE(s.find("\"nan\""), std::string::npos) << s;
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos) << s;
}
