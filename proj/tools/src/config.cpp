#include "mcduff_cli/config.hpp"

#include "mcduff/rational.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace mcduff::cli {

const std::map<std::string, std::vector<KeySpec>>& schema() {
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"mcduff",
       {
           {"epsilon", "", true, "target accuracy, a/b > 0"},
           {"delta", "auto", false, "invariance parameter; auto picks the largest 1/b that works"},
           {"T", "", true, "size of the invariant set T"},
           {"D", "", true, "degree n of the alternating group A_n"},
           {"mode", "bounded", false, "enumerated | bounded"},
           {"displacement", "", false, "comma list of |sigma_h S \\ S|, one per h"},
           {"tower", "false", false, "derive the displacements from a Cantor tower"},
           {"substitution", "a->ab, b->a", false, "primitive substitution for the tower"},
           {"point", "", false, "fixed point seed L.R (empty = first legal)"},
           {"swap_word", "aa", false, "Omega = swap of Cyl(word) with its translate"},
           {"swap_anchor", "0", false, "cylinder anchor"},
           {"swap_shift", "1", false, "translation k of the swap"},
           {"tower_samples", "10", false, "sampled points per tower check"},
           {"search_bound", "1000000", false, "candidate cap for the tower search"},
       }},
      {"shift",
       {
           {"group", "Z", false, "group acting on itself by translation"},
           {"F", "0;1;-1", false, "';'-separated elements, including the identity"},
           {"Y", "", false, "';'-separated points T must avoid"},
           {"epsilon", "", true, "target accuracy"},
           {"cap", "65536", false, "largest |T| searched"},
       }},
      {"wreath-js",
       {
           {"H", "Z", false, "base group (S2 models Z/2)"},
           {"h", "1", false, "element of H other than e"},
           {"G", "Z", false, "group acting on itself by translation"},
           {"F", "@0;0->1@1;@-1", false, "';'-separated x->a&x->a@g"},
           {"samples", "100000", false, "Monte Carlo samples per condition"},
           {"conservative", "true", false, "choose eps by 2^(-6 eps) instead of 2^(-3 eps)"},
           {"E", "", false, "';'-separated override for E"},
           {"rectangles", "20", false, "random rectangle events for conditions 2 and measure preservation"},
           {"tallies", "", false, "CSV path for the raw Monte Carlo tallies"},
       }},
      {"wedderburn",
       {
           {"n", "", true, "degree of A_n, n >= 5"},
           {"mode", "enumerated", false, "enumerated | bounded"},
       }},
      {"folner",
       {
           {"group", "Z", false, "group acting on itself by translation"},
           {"K", "0;1;-1", false, "';'-separated elements"},
           {"delta", "", true, "invariance parameter"},
           {"Y", "", false, "';'-separated points to avoid"},
           {"cap", "65536", false, "largest |T| searched"},
       }},
      {"free-example",
       {
           {"n", "", true, "coordinate n outside K"},
           {"omega1", "a:0;b:1", false, "';'-separated r:k tensor supports"},
           {"F", "a@0=b;ab@1=a", false, "';'-separated s@k=t&k=t"},
       }},
  };
  return table;
}

bool is_runnable(std::string_view subcommand) { return schema().contains(std::string(subcommand)); }

namespace {

const KeySpec* find_key(const std::string& sub, const std::string& key) {
  const auto it = schema().find(sub);
  if (it == schema().end()) return nullptr;
  for (const auto& k : it->second) {
    if (k.name == key) return &k;
  }
  return nullptr;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) throw ConfigError(what + " must be a non-negative integer, got '" + text + "'");
  return v;
}

const std::set<std::string> kRunKeys = {"command", "output", "format", "seed", "precision"};
const std::set<std::string> kSweepKeys = {"target", "param1", "values1", "param2", "values2"};

}  // namespace

std::string trim(std::string_view text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    const auto piece = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string RunConfig::get(const std::string& key) const {
  const KeySpec* spec = find_key(driver(), key);
  if (spec == nullptr) throw ConfigError("unknown key '" + key + "' for " + driver());
  if (const auto it = params.find(key); it != params.end()) return it->second;
  if (spec->required) throw ConfigError(driver() + ": missing required key '" + key + "'");
  return spec->fallback;
}

void RunConfig::validate() const {
  if (subcommand == "sweep") {
    if (!is_runnable(target)) throw ConfigError("sweep target must be a certificate subcommand, got '" + target + "'");
    if (grid.empty() || grid.size() > 2) throw ConfigError("a sweep needs one or two grid parameters");
    for (const auto& [key, values] : grid) {
      if (find_key(target, key) == nullptr) throw ConfigError("unknown sweep parameter '" + key + "' for " + target);
    }
    if (grid.size() == 2 && grid[0].first == grid[1].first) throw ConfigError("sweep parameters must differ");
    if (format != "csv") throw ConfigError("sweep output format must be csv");
  } else if (!is_runnable(subcommand)) {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  } else if (format != "json") {
    throw ConfigError("certificate output format must be json");
  }
  for (const auto& [key, value] : params) {
    if (find_key(driver(), key) == nullptr) throw ConfigError("unknown key '" + key + "' for " + driver());
  }
  if (precision_bits < 64) throw ConfigError("precision must be at least 64 bits");
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "[run]\n";
  out << "command = " << subcommand << "\n";
  out << "output = " << output << "\n";
  out << "format = " << format << "\n";
  out << "seed = " << seed << "\n";
  out << "precision = " << precision_bits << "\n";
  if (subcommand == "sweep") {
    out << "\n[sweep]\n";
    out << "target = " << target << "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << "param" << i + 1 << " = " << grid[i].first << "\n";
      out << "values" << i + 1 << " = " << grid[i].second << "\n";
    }
  }
  if (!params.empty()) {
    out << "\n[" << driver() << "]\n";
    for (const auto& [k, v] : params) out << k << " = " << v << "\n";
  }
  return out.str();
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::map<std::string, std::string> run_keys;
  std::map<std::string, std::string> sweep_keys;
  std::map<std::string, std::map<std::string, std::string>> blocks;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "sweep" && !is_runnable(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (section.empty()) throw ConfigError(where + "key outside a section");
    std::map<std::string, std::string>* dest = nullptr;
    if (section == "run") {
      if (!kRunKeys.contains(key)) throw ConfigError(where + "unknown key '" + key + "' in [run]");
      dest = &run_keys;
    } else if (section == "sweep") {
      if (!kSweepKeys.contains(key)) throw ConfigError(where + "unknown key '" + key + "' in [sweep]");
      dest = &sweep_keys;
    } else {
      if (find_key(section, key) == nullptr) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
      dest = &blocks[section];
    }
    if (!dest->emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
  }
  if (!run_keys.contains("command")) throw ConfigError("[run] must set command");
  cfg.subcommand = run_keys["command"];
  if (run_keys.contains("output")) cfg.output = run_keys["output"];
  if (cfg.subcommand == "sweep") cfg.format = "csv";
  if (run_keys.contains("format")) cfg.format = run_keys["format"];
  if (run_keys.contains("seed")) cfg.seed = parse_u64(run_keys["seed"], "seed");
  if (run_keys.contains("precision")) cfg.precision_bits = static_cast<long>(parse_u64(run_keys["precision"], "precision"));
  if (cfg.subcommand == "sweep") {
    cfg.target = sweep_keys["target"];
    for (const char* i : {"1", "2"}) {
      const std::string p = std::string("param") + i;
      const std::string v = std::string("values") + i;
      if (sweep_keys.contains(p)) cfg.grid.emplace_back(sweep_keys[p], sweep_keys.contains(v) ? sweep_keys[v] : "");
      else if (sweep_keys.contains(v)) throw ConfigError(v + " without " + p);
    }
  } else if (!sweep_keys.empty()) {
    throw ConfigError("[sweep] given for command " + cfg.subcommand);
  }
  for (auto& [name, keys] : blocks) {
    if (name != cfg.driver()) throw ConfigError("section [" + name + "] does not belong to command " + cfg.subcommand);
    cfg.params = std::move(keys);
  }
  cfg.validate();
  return cfg;
}

std::vector<std::string> expand_values(std::string_view spec) {
  const std::string s = trim(spec);
  if (s.empty()) return {};
  if (s.find(':') == std::string::npos) return split(s, ',');
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + s + "'");
  Rational a;
  Rational b;
  Rational step;
  try {
    a = parse_rational(parts[0]);
    b = parse_rational(parts[1]);
    step = parse_rational(parts[2]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad range '" + s + "': " + e.what());
  }
  if (step <= 0) throw ConfigError("range step must be positive");
  std::vector<std::string> out;
  for (Rational x = a; x <= b; x += step) {
    if (out.size() >= 10000) throw ConfigError("range '" + s + "' has more than 10^4 values");
    out.push_back(to_string(x));
  }
  return out;
}

}  // namespace mcduff::cli
