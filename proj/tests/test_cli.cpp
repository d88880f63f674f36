#include "mcduff_cli/config.hpp"
#include "mcduff_cli/run.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mcduff::cli;

namespace {

int run_text(const std::string& text, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  int status = kUsage;
  try {
    status = run(parse_config(text), out, err);
  } catch (const ConfigError& e) {
    err << e.what();
  }
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return status;
}

const char* kTheorem = R"(# theorem-scale bounded run
[run]
command = mcduff
seed = 3

[mcduff]
epsilon = 1/4
delta = 1/200
T = 400
D = 10000
mode = bounded
displacement = 2,1
)";

}  // namespace

TEST(Config, RoundTrip) {
  const auto cfg = parse_config(kTheorem);
  EXPECT_EQ(cfg.subcommand, "mcduff");
  EXPECT_EQ(cfg.seed, 3U);
  EXPECT_EQ(cfg.get("T"), "400");
  EXPECT_EQ(cfg.get("substitution"), "a->ab, b->a");  // default
  const auto again = parse_config(cfg.serialize());
  EXPECT_EQ(again, cfg);
  EXPECT_EQ(again.serialize(), cfg.serialize());
}

TEST(Config, SweepRoundTrip) {
  const auto cfg = parse_config(
      "[run]\ncommand = sweep\n[sweep]\ntarget = mcduff\nparam1 = T\nvalues1 = 50:800:50\nparam2 = delta\nvalues2 = 1/200,1/100\n"
      "[mcduff]\nepsilon = 1/4\nD = 10000\n");
  EXPECT_EQ(cfg.format, "csv");
  ASSERT_EQ(cfg.grid.size(), 2U);
  EXPECT_EQ(parse_config(cfg.serialize()), cfg);
  EXPECT_EQ(expand_values("50:800:50").size(), 16U);
  EXPECT_EQ(expand_values("1/4:1:1/4"), (std::vector<std::string>{"1/4", "1/2", "3/4", "1"}));
  EXPECT_THROW(expand_values("0:1:0"), ConfigError);
  EXPECT_THROW(expand_values("0:100000:1"), ConfigError);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("[run]\ncommand = mcduff\n[mcduff]\nepsilon = 1/4\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ncommand = mcduff\n[mcduff]\nT = 1\nT = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ncommand = teleport\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ncommand = wedderburn\n[shift]\nepsilon = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("key = value\n"), ConfigError);
  EXPECT_THROW(parse_config("[nowhere]\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ncommand = wedderburn\nformat = csv\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ncommand = wedderburn\nprecision = 8\n"), ConfigError);
  const auto cfg = parse_config("[run]\ncommand = mcduff\n");
  EXPECT_THROW(cfg.get("epsilon"), ConfigError);  // required
  EXPECT_THROW(cfg.get("nope"), ConfigError);
}

TEST(Run, ExitStatuses) {
  std::string out;
  EXPECT_EQ(run_text(kTheorem, &out), kPass);
  EXPECT_NE(out.find("\"pass\": true"), std::string::npos);
  std::string failing = kTheorem;
  failing.replace(failing.find("T = 400"), 7, "T = 40");
  EXPECT_EQ(run_text(failing), kFail);
  std::string err;
  EXPECT_EQ(run_text("[run]\ncommand = mcduff\n[mcduff]\nepsilon = 0\nT = 400\nD = 10000\n", nullptr, &err), kUsage);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(run_text("[run]\ncommand = wedderburn\n[wedderburn]\nn = 4\n"), kUsage);
  EXPECT_EQ(run_text("[run]\ncommand = free-example\n[free-example]\nn = 0\n"), kUsage);
}

TEST(Run, WedderburnListing) {
  std::string out;
  EXPECT_EQ(run_text("[run]\ncommand = wedderburn\n[wedderburn]\nn = 5\n", &out), kPass);
  const auto cert = mcduff::Certificate::from_json(out);
  std::string degrees;
  for (const auto& [k, v] : cert.params)
    if (k == "degrees") degrees = v;
  EXPECT_EQ(degrees, "1,3,3,4,5");
}

TEST(Run, DeterministicOutput) {
  const std::string js = "[run]\ncommand = wreath-js\nseed = 9\n[wreath-js]\nsamples = 2000\nrectangles = 3\n";
  std::string a;
  std::string b;
  run_text(js, &a);
  run_text(js, &b);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(Sweep, EmptyGridIsHeaderOnly) {
  std::string out;
  EXPECT_EQ(run_text("[run]\ncommand = sweep\n[sweep]\ntarget = wedderburn\nparam1 = n\nvalues1 =\n", &out), kPass);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1);
  EXPECT_EQ(out.rfind("n,pass,error", 0), 0U);
}

TEST(Sweep, FrontierInT) {
  std::string out;
  run_text(
      "[run]\ncommand = sweep\n[sweep]\ntarget = mcduff\nparam1 = T\nvalues1 = 100,400\n"
      "[mcduff]\nepsilon = 1/4\ndelta = 1/200\nD = 10000\ndisplacement = 2\n",
      &out);
  std::istringstream lines(out);
  std::string header;
  std::string small;
  std::string large;
  std::getline(lines, header);
  std::getline(lines, small);
  std::getline(lines, large);
  EXPECT_EQ(small.rfind("100,false", 0), 0U) << small;
  EXPECT_EQ(large.rfind("400,true", 0), 0U) << large;
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("plain"), "plain");
}

TEST(Validate, FileRoundTrip) {
  std::string out;
  ASSERT_EQ(run_text(kTheorem, &out), kPass);
  const auto path = std::filesystem::temp_directory_path() / "mcduff_cli_validate.json";
  std::ofstream(path) << out;
  std::ostringstream o;
  std::ostringstream e;
  EXPECT_EQ(validate_file(path.string(), {}, o, e), kPass);
  EXPECT_NE(o.str().find("consistent"), std::string::npos);
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(validate_file(path.string(), {}, o, e), kUsage);
  std::filesystem::remove(path);
  EXPECT_EQ(validate_file("/nonexistent/cert.json", {}, o, e), kUsage);
}
