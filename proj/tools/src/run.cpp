#include "mcduff_cli/run.hpp"

#include "mcduff/cantor.hpp"
#include "mcduff/jsstab.hpp"
#include "mcduff/repalg.hpp"
#include "mcduff/verify.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace mcduff::cli {

namespace {

Rational rational_key(const RunConfig& c, const std::string& key) {
  const std::string v = c.get(key);
  try {
    return parse_rational(v);
  } catch (const std::invalid_argument&) {
    throw ConfigError(key + " must be a rational a/b, got '" + v + "'");
  }
}

long integer(const std::string& what, const std::string& v) {
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::logic_error&) {
    throw ConfigError(what + " must be an integer, got '" + v + "'");
  }
}

long long_key(const RunConfig& c, const std::string& key) { return integer(key, c.get(key)); }

bool bool_key(const RunConfig& c, const std::string& key) {
  const std::string v = c.get(key);
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(key + " must be true or false, got '" + v + "'");
}

std::vector<groups::Element> elements(const groups::Group& g, const std::string& list) {
  std::vector<groups::Element> out;
  for (const auto& piece : split(list, ';')) {
    auto e = g.parse_element(piece);
    g.validate(e);
    out.push_back(std::move(e));
  }
  return out;
}

Certificate wedderburn(const RunConfig& c) {
  const long n = long_key(c, "n");
  const std::string m = c.get("mode");
  if (m != "enumerated" && m != "bounded") throw ConfigError("mode must be 'enumerated' or 'bounded'");
  if (n < 5 || n > repalg::kEnumerationCap) throw ConfigError("n must lie in [5, " + std::to_string(repalg::kEnumerationCap) + "]");
  const auto mode = m == "enumerated" ? repalg::WedderburnMode::Enumerated : repalg::WedderburnMode::Bounded;
  const auto data = repalg::alternating_wedderburn(static_cast<int>(n), mode);
  Certificate cert;
  cert.theorem = "wedderburn";
  cert.mode = m;
  cert.param("n", std::to_string(n));
  cert.param("group_order", to_string(data.group_order));
  cert.param("trivial_weight", to_string(data.trivial_weight));
  cert.param("degree_lower_bound", to_string(data.degree_lower_bound));
  cert.add(exact_item("trivial_weight", ExactScalar(data.trivial_weight), Relation::Equal, ExactScalar(Rational(Integer(1), data.group_order))));
  if (mode == repalg::WedderburnMode::Bounded) return cert;

  std::string degrees = "1";
  std::string weights = to_string(data.trivial_weight);
  Integer dim = 1;
  Rational wsum = data.trivial_weight;
  for (const auto& b : data.blocks) {
    degrees += "," + to_string(b.degree);
    weights += "," + to_string(b.weight);
    dim += b.degree * b.degree;
    wsum += b.weight;
  }
  cert.param("blocks", std::to_string(data.blocks.size() + 1));
  cert.param("degrees", degrees);
  cert.param("weights", weights);
  cert.add(exact_item("dimension_sum", ExactScalar(Rational(dim)), Relation::Equal, ExactScalar(Rational(data.group_order))));
  cert.add(exact_item("weight_sum", ExactScalar(wsum), Relation::Equal, ExactScalar(1L)));
  auto bound = exact_item("degree_bound", ExactScalar(Rational(data.min_degree())), Relation::GreaterEq, ExactScalar(n - 1));
  if (n < 6) {
    bound.advisory = true;
    bound.note = "A_5 has irreducible degree 3 < n - 1; the bound holds from n = 6 on";
  }
  cert.add(std::move(bound));
  return cert;
}

Certificate mcduff_run(const RunConfig& c) {
  verify::McDuffParams p;
  p.epsilon = rational_key(c, "epsilon");
  if (p.epsilon <= 0) throw ConfigError("epsilon must be positive");
  p.delta = c.get("delta") == "auto" ? verify::choose_delta(p.epsilon) : rational_key(c, "delta");
  p.T_size = long_key(c, "T");
  p.D_size = long_key(c, "D");
  p.mode = verify::parse_trace_mode(c.get("mode"));
  p.policy.max_bits = c.precision_bits;
  if (!bool_key(c, "tower")) {
    const auto list = split(c.get("displacement"), ',');
    for (std::size_t i = 0; i < list.size(); ++i) {
      p.displacements.push_back({"h" + std::to_string(i), integer("displacement", list[i])});
    }
    auto cert = verify::mcduff_certificate(p);
    cert.precision_bits = c.precision_bits;
    return cert;
  }
  if (c.has("displacement")) throw ConfigError("displacement and tower are mutually exclusive");
  auto shift = std::make_shared<const cantor::Subshift>(cantor::Substitution::parse(c.get("substitution")), c.get("point"));
  const std::vector<cantor::FullGroupElement> omega{
      cantor::FullGroupElement::swap(shift, c.get("swap_word"), long_key(c, "swap_anchor"), long_key(c, "swap_shift"))};
  const auto partition = cantor::refine_partition(omega);
  std::vector<long> T(static_cast<std::size_t>(p.T_size));
  for (long i = 0; i < p.T_size; ++i) T[static_cast<std::size_t>(i)] = i;
  const auto samples = static_cast<std::size_t>(long_key(c, "tower_samples"));
  const auto tower = cantor::find_tower(shift, omega, partition, T, static_cast<std::size_t>(p.D_size),
                                        static_cast<std::size_t>(long_key(c, "search_bound")), p.delta);
  p.tower = &tower;
  auto cert = verify::mcduff_certificate(p);
  cert.precision_bits = c.precision_bits;
  cert.param("substitution", shift->substitution().to_string());
  cert.param("point", shift->seed());
  cert.param("omega", omega.front().name());
  const auto report = cantor::verify_tower(tower, omega, samples);
  std::string failures;
  for (const auto& f : report.failures) failures += (failures.empty() ? "" : "; ") + f;
  cert.add(holds_item("tower_verified", report.pass,
                      std::to_string(report.sample_points) + " sample points, " + std::to_string(report.point_checks) + " point checks" +
                          (failures.empty() ? "" : "; " + failures)));
  cert.add(holds_item("tower_sample_count", report.sample_points >= samples,
                      std::to_string(report.sample_points) + " >= " + std::to_string(samples)));
  return cert;
}

Certificate shift_run(const RunConfig& c) {
  const auto G = groups::Group::parse(c.get("group"));
  const auto action = groups::make_translation_action(G);
  const auto F = elements(G, c.get("F"));
  const auto Y = elements(G, c.get("Y"));
  const Rational eps = rational_key(c, "epsilon");
  return verify::shift_certificate(*action, Y, F, eps, static_cast<std::size_t>(long_key(c, "cap")));
}

Certificate folner_run(const RunConfig& c) {
  const auto G = groups::Group::parse(c.get("group"));
  const auto action = groups::make_translation_action(G);
  auto K = elements(G, c.get("K"));
  const auto Y = elements(G, c.get("Y"));
  const Rational delta = rational_key(c, "delta");
  if (delta <= 0 || delta >= 1) throw ConfigError("delta must lie in (0, 1)");
  if (std::none_of(K.begin(), K.end(), [&](const groups::Element& k) { return G.is_identity(k); })) K.insert(K.begin(), G.identity());
  const auto fc = groups::folner_search(*action, K, delta, static_cast<std::size_t>(long_key(c, "cap")), Y);
  Certificate cert;
  cert.theorem = "folner";
  cert.mode = "exact";
  cert.param("action", action->name());
  cert.param("delta", to_string(delta));
  cert.param("T", std::to_string(fc.T.size()));
  cert.param("core", std::to_string(fc.core.size()));
  cert.param("T_first", action->format_point(fc.T.front()));
  cert.param("T_last", action->format_point(fc.T.back()));
  cert.add(exact_item("invariance_defect", ExactScalar(groups::invariance_defect(*action, fc.T, K)), Relation::LessEq, ExactScalar(delta)));
  cert.add(holds_item("T_avoids_Y", std::none_of(fc.T.begin(), fc.T.end(), [&](const groups::Point& x) {
                        return std::find(Y.begin(), Y.end(), x) != Y.end();
                      })));
  return cert;
}

Certificate wreath_run(const RunConfig& c) {
  const auto H = groups::Group::parse(c.get("H"));
  const auto G = groups::Group::parse(c.get("G"));
  std::shared_ptr<const groups::Action> action = groups::make_translation_action(G);
  const auto h = H.parse_element(c.get("h"));
  // F entries are read against a provisional model so points parse in X.
  const jsstab::WreathModel probe(H, action, h, {{{}, G.identity()}});
  std::vector<jsstab::WreathElement> F;
  for (const auto& piece : split(c.get("F"), ';')) F.push_back(probe.parse_element(piece));
  const jsstab::WreathModel model(H, action, h, F);
  jsstab::ReportOptions opt;
  opt.samples = long_key(c, "samples");
  opt.seed = c.seed;
  opt.random_rectangles = static_cast<int>(long_key(c, "rectangles"));
  opt.witness.conservative = bool_key(c, "conservative");
  if (!c.get("E").empty()) opt.witness.E_override = elements(G, c.get("E"));
  std::vector<std::pair<std::string, jsstab::McResult>> tallies;
  opt.tallies = &tallies;
  auto cert = jsstab::stability_report(model, opt);
  if (const std::string path = c.get("tallies"); !path.empty()) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << jsstab::mc_tally_csv(tallies);
  }
  return cert;
}

Certificate free_run(const RunConfig& c) {
  const auto F2 = groups::Group::free(2);
  const long n = long_key(c, "n");
  std::vector<std::pair<groups::Element, long>> omega1;
  for (const auto& piece : split(c.get("omega1"), ';')) {
    const auto colon = piece.find(':');
    if (colon == std::string::npos) throw ConfigError("omega1 entries are r:k, got '" + piece + "'");
    omega1.emplace_back(F2.parse_element(trim(piece.substr(0, colon))), integer("omega1 index", trim(piece.substr(colon + 1))));
  }
  std::vector<verify::BilateralElement> F;
  for (const auto& piece : split(c.get("F"), ';')) {
    const auto at = piece.find('@');
    verify::BilateralElement b;
    b.s = F2.parse_element(trim(piece.substr(0, at)));
    if (at != std::string::npos) {
      for (const auto& entry : split(piece.substr(at + 1), '&')) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) throw ConfigError("F coordinates are k=t, got '" + entry + "'");
        b.t[integer("F coordinate", trim(entry.substr(0, eq)))] = F2.parse_element(trim(entry.substr(eq + 1)));
      }
    }
    F.push_back(std::move(b));
  }
  return verify::free_example_check(n, omega1, F);
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output == "-" || config.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(config.output);
  if (!f) throw ConfigError("cannot write " + config.output);
  f << text;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && (s.empty() || (s.front() != ' ' && s.back() != ' '))) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

Certificate build_certificate(const RunConfig& config) {
  const std::string& d = config.driver();
  Certificate cert;
  if (d == "mcduff") cert = mcduff_run(config);
  else if (d == "shift") cert = shift_run(config);
  else if (d == "wreath-js") cert = wreath_run(config);
  else if (d == "wedderburn") cert = wedderburn(config);
  else if (d == "folner") cert = folner_run(config);
  else if (d == "free-example") cert = free_run(config);
  else throw ConfigError("unknown subcommand '" + d + "'");
  if (d != "wreath-js") cert.seed = config.seed;
  return cert;
}

std::string run_sweep(const RunConfig& config) {
  config.validate();
  std::vector<std::vector<std::string>> axes;
  std::size_t points = 1;
  for (const auto& [key, spec] : config.grid) {
    axes.push_back(expand_values(spec));
    points *= axes.back().size();
  }
  if (points > 10000) throw ConfigError("sweep grid has more than 10^4 points");

  struct Row {
    std::vector<std::string> values;
    std::string pass;
    std::string error;
    std::map<std::string, const CertificateItem*> items;
    Certificate cert;
  };
  std::vector<Row> rows;
  rows.reserve(points);
  std::vector<std::string> names;
  for (std::size_t idx = 0; idx < points; ++idx) {
    Row row;
    RunConfig one = config;
    one.subcommand = config.target;
    one.grid.clear();
    one.format = "json";
    std::size_t rem = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const std::string& v = axes[a][rem % axes[a].size()];
      rem /= axes[a].size();
      one.params[config.grid[a].first] = v;
    }
    for (const auto& [key, spec] : config.grid) row.values.push_back(one.params[key]);
    try {
      row.cert = build_certificate(one);
      row.pass = row.cert.pass() ? "true" : "false";
    } catch (const std::exception& e) {
      row.pass = "error";
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  for (auto& row : rows) {
    for (const auto& item : row.cert.items) {
      if (!row.items.emplace(item.name, &item).second) continue;
      if (std::find(names.begin(), names.end(), item.name) == names.end()) names.push_back(item.name);
    }
  }

  std::ostringstream out;
  std::vector<std::string> header;
  for (const auto& [key, spec] : config.grid) header.push_back(key);
  header.push_back("pass");
  header.push_back("error");
  for (const auto& n : names) {
    header.push_back(n);
    header.push_back(n + " (approx)");
    header.push_back(n + " pass");
  }
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << "\n";
  };
  line(header);
  for (const auto& row : rows) {
    std::vector<std::string> f = row.values;
    f.push_back(row.pass);
    f.push_back(row.error);
    for (const auto& n : names) {
      const auto it = row.items.find(n);
      if (it == row.items.end()) {
        f.insert(f.end(), {"", "", ""});
      } else {
        f.push_back(it->second->value);
        f.push_back(it->second->approx);
        f.push_back(it->second->undecided ? "undecided" : it->second->pass ? "true" : "false");
      }
    }
    line(f);
  }
  return out.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.subcommand == "sweep") {
      emit(config, run_sweep(config), out);
      return kPass;
    }
    const Certificate cert = build_certificate(config);
    emit(config, cert.to_json() + "\n", out);
    for (const auto& item : cert.items) {
      if (!item.pass && !item.advisory) err << (item.undecided ? "undecided: " : "failed: ") << item.name << "\n";
    }
    return cert.pass() ? kPass : kFail;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kFail;
  }
}

int validate_file(const std::string& path, const PrecisionPolicy& policy, std::ostream& out, std::ostream& err) {
  std::ifstream f(path);
  if (!f) {
    err << "error: cannot read " << path << "\n";
    return kUsage;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  Certificate cert;
  try {
    cert = Certificate::from_json(buf.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const auto problems = cert.revalidate(policy);
  for (const auto& p : problems) err << "inconsistent: " << p << "\n";
  out << cert.theorem << ": " << cert.items.size() << " items, " << (problems.empty() ? "consistent" : "inconsistent") << ", "
      << (cert.pass() ? "pass" : "fail") << "\n";
  return problems.empty() && cert.pass() ? kPass : kFail;
}

}  // namespace mcduff::cli
