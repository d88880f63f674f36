#include "mcduff_cli/config.hpp"
#include "mcduff_cli/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using mcduff::cli::RunConfig;

struct Common {
  std::string output = "-";
  std::uint64_t seed = 1;
  long precision = 65536;
  bool dump = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.output, "output path, - for stdout");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--precision", c.precision, "interval precision cap in bits");
  sub->add_flag("--dump-config", c.dump, "print the equivalent config file and exit");
}

int finish(RunConfig cfg, const Common& c) {
  cfg.output = c.output;
  cfg.seed = c.seed;
  cfg.precision_bits = c.precision;
  if (c.dump) {
    try {
      cfg.validate();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return mcduff::cli::kUsage;
    }
    std::cout << cfg.serialize();
    return mcduff::cli::kPass;
  }
  return mcduff::cli::run(cfg, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified finite-dimensional checks for McDuff and JS-stability constructions"};
  app.require_subcommand(1);

  Common common;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, keys] : mcduff::cli::schema()) {
    CLI::App* sub = app.add_subcommand(name, "build a " + name + " certificate");
    sub->set_help_flag("--help", "print this help and exit");
    add_common(sub, common);
    for (const auto& k : keys) sub->add_option("--" + k.name, values[name][k.name], k.help + (k.fallback.empty() ? "" : " [" + k.fallback + "]"));
    subs[name] = sub;
  }

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "run a config file");
  run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  std::string override_output;
  run_cmd->add_option("-o,--output", override_output, "override the configured output");

  RunConfig sweep_cfg;
  sweep_cfg.subcommand = "sweep";
  sweep_cfg.format = "csv";
  std::string p1, v1, p2, v2;
  std::vector<std::string> sets;
  CLI::App* sweep = app.add_subcommand("sweep", "grid over one or two parameters, CSV out");
  add_common(sweep, common);
  sweep->add_option("--target", sweep_cfg.target, "subcommand to sweep")->required();
  sweep->add_option("--param1", p1, "first grid key")->required();
  sweep->add_option("--values1", v1, "start:stop:step or comma list");
  sweep->add_option("--param2", p2, "second grid key");
  sweep->add_option("--values2", v2, "start:stop:step or comma list");
  sweep->add_option("--set", sets, "fixed key=value for the target");

  std::string cert_path;
  CLI::App* validate = app.add_subcommand("validate", "re-decide a certificate file");
  validate->add_option("certificate", cert_path, "certificate JSON")->required();
  validate->add_option("--precision", common.precision, "interval precision cap in bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mcduff::cli::kUsage;
  }

  if (*validate) {
    mcduff::PrecisionPolicy policy;
    policy.max_bits = common.precision;
    return mcduff::cli::validate_file(cert_path, policy, std::cout, std::cerr);
  }
  if (*run_cmd) {
    std::ifstream f(config_path);
    std::stringstream buf;
    buf << f.rdbuf();
    try {
      RunConfig cfg = mcduff::cli::parse_config(buf.str());
      if (!override_output.empty()) cfg.output = override_output;
      return mcduff::cli::run(cfg, std::cout, std::cerr);
    } catch (const mcduff::cli::ConfigError& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return mcduff::cli::kUsage;
    }
  }
  if (*sweep) {
    sweep_cfg.grid.emplace_back(p1, v1);
    if (!p2.empty()) sweep_cfg.grid.emplace_back(p2, v2);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << s << "'\n";
        return mcduff::cli::kUsage;
      }
      sweep_cfg.params[mcduff::cli::trim(s.substr(0, eq))] = mcduff::cli::trim(s.substr(eq + 1));
    }
    return finish(sweep_cfg, common);
  }
  for (const auto& [name, sub] : subs) {
    if (!*sub) continue;
    RunConfig cfg;
    cfg.subcommand = name;
    for (const auto& [key, value] : values[name]) {
      if (sub->count("--" + key) > 0) cfg.params[key] = value;
    }
    return finish(cfg, common);
  }
  return mcduff::cli::kUsage;
}
